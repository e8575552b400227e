"""Episode session: the agent-facing view of a running game.

Tracks the eight context features, recomputes helper-model output, and
assembles the candidate set each step. Works with either oracle helpers
(ground-truth labels from the engine) or the learned recipe/navigator
models.
"""

from collections import deque

from .commands import StepContext, assemble_candidates, execute_choice
from .engine import (new_game, render_inventory, render_observation,
                     render_recipe, render_room)
from .navigator import oracle_nav, predict_closed_doors, predict_exits
from .recipe import model_status, oracle_status

PREV_COMMAND_WINDOW = 10


class OracleHelpers:
    """Ground-truth recipe status and navigation labels."""

    def status(self, world, state, recipe_text, inventory_text):
        return oracle_status(world, state)

    def nav(self, world, state, description):
        return oracle_nav(world, state)


class LearnedHelpers:
    """Trained recipe + navigator models over raw text, with caching."""

    def __init__(self, recipe_model, nav_model, vocab, cache_size=4096):
        self.recipe_model = recipe_model
        self.nav_model = nav_model
        self.vocab = vocab
        self.cache_size = cache_size
        self._status_cache = {}
        self._nav_cache = {}

    def status(self, world, state, recipe_text, inventory_text):
        key = (recipe_text, inventory_text)
        if key not in self._status_cache:
            if len(self._status_cache) >= self.cache_size:
                self._status_cache.clear()
            self._status_cache[key] = model_status(
                self.recipe_model, self.vocab, recipe_text, inventory_text)
        return self._status_cache[key]

    def nav(self, world, state, description):
        if description not in self._nav_cache:
            if len(self._nav_cache) >= self.cache_size:
                self._nav_cache.clear()
            exits = predict_exits(self.nav_model, self.vocab, description)
            doors = predict_closed_doors(self.nav_model, self.vocab,
                                         description)
            self._nav_cache[description] = (exits, doors)
        return self._nav_cache[description]


class GameSession:
    """One episode: engine state plus the agent's textual context."""

    def __init__(self, world, helpers):
        self.world = world
        self.helpers = helpers
        self.state = new_game(world)
        self.observation = render_observation(world, self.state)
        self.description = render_room(world, self.state)
        self.prev_commands = deque(maxlen=PREV_COMMAND_WINDOW)
        self.discovered = [self.state.room]
        self.recipe_text = None
        self.last_command = ""
        self._refresh()

    @property
    def done(self):
        return self.state.status != "ongoing"

    def _refresh(self):
        state = self.state
        self.inventory_text = render_inventory(state)
        if state.recipe_read and self.recipe_text is None:
            self.recipe_text = render_recipe(self.world)
        self.status = None
        if self.recipe_text is not None:
            self.status = self.helpers.status(self.world, state,
                                              self.recipe_text,
                                              self.inventory_text)
        self.nav_exits, self.nav_doors = self.helpers.nav(
            self.world, state, self.description)
        self.meal_held = any(i.name == "meal" for i in state.inventory)
        self.candidates = assemble_candidates(StepContext(
            description=self.description,
            inventory=self.inventory_text,
            location=state.room,
            kitchen_name=self.world.kitchen,
            recipe_status=self.status,
            nav_exits=self.nav_exits,
            nav_doors=self.nav_doors,
            last_command=self.last_command,
            meal_held=self.meal_held,
        ))

    def features(self):
        """The eight text features of the model context."""
        if self.status is not None:
            missing = self.status.missing_text
            unnecessary = self.status.unnecessary_text
            utilities = self.status.utilities_text
        else:
            missing = unnecessary = utilities = "unknown"
        prev = " . ".join(self.prev_commands) if self.prev_commands else "nothing"
        return [
            self.observation,
            missing,
            unnecessary,
            self.description,
            prev,
            utilities,
            ", ".join(self.discovered),
            self.state.room,
        ]

    def advance(self, choice_index):
        """Execute the chosen candidate; returns (reward, done)."""
        candidate = self.candidates[choice_index]
        feedbacks, reward, done = execute_choice(self.world, self.state,
                                                 candidate)
        for cmd, fb in zip(candidate.expansion, feedbacks):
            if cmd == "look" or (cmd.startswith("go ")
                                 and fb.text.startswith("-=")):
                self.description = fb.text
        self.observation = " ".join(fb.text for fb in feedbacks)
        self.prev_commands.append(candidate.text)
        self.last_command = candidate.text
        if self.state.room not in self.discovered:
            self.discovered.append(self.state.room)
        if not done:
            self._refresh()
        return reward, done
