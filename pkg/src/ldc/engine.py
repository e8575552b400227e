"""Deterministic state machine for one cooking game.

A world is immutable after generation; a GameState owns all mutable episode
state. Commands form a closed grammar; anything unrecognized or inapplicable
is an in-game no-op that still consumes a step. Points: +1 for the first
take of each recipe ingredient, +1 per recipe direction performed, +1 for
preparing and +1 for eating the meal.
"""

import hashlib
import json
from dataclasses import dataclass, field, asdict

from . import text as T
from .lexicon import tokenize


class GenerationError(Exception):
    pass


@dataclass
class Item:
    name: str
    cut: str = "none"
    heat: str = "none"

    def render(self):
        adjs = [a for a in (self.cut, self.heat) if a != "none"]
        return " ".join(adjs + [self.name])

    def copy(self):
        return Item(self.name, self.cut, self.heat)


@dataclass(frozen=True)
class IngredientReq:
    name: str
    cut: str = "none"   # none | sliced | diced | chopped
    heat: str = "none"  # none | fried | roasted | grilled


@dataclass(frozen=True)
class Recipe:
    ingredients: tuple          # of IngredientReq
    directions: tuple           # of (verb, ingredient-name) pairs

    def direction_lines(self):
        return [f"{verb} the {name}" for verb, name in self.directions]

    def required_utilities(self):
        utils = []
        for verb, _ in self.directions:
            if verb in T.CUT_VERBS:
                u = "knife"
            else:
                u = T.UTILITY_FOR_HEAT[T.HEAT_VERBS[verb]]
            if u not in utils:
                utils.append(u)
        return utils


@dataclass
class Room:
    name: str
    exits: dict = field(default_factory=dict)       # dir -> room name
    doors: dict = field(default_factory=dict)       # dir -> door name
    utilities: tuple = ()
    items: tuple = ()                               # initial Items


@dataclass
class World:
    rooms: dict                 # name -> Room
    doors: dict                 # door name -> initially-closed flag
    start_room: str
    kitchen: str
    cookbook_room: str
    recipe: Recipe
    initial_inventory: tuple = ()
    flavor: int = 0             # drives distractor-sentence selection
    capacity: int = 5
    max_steps: int = 100
    loss_penalty: bool = True

    @property
    def max_score(self):
        return len(self.recipe.ingredients) + len(self.recipe.directions) + 2

    def utility_room(self, utility):
        for name in sorted(self.rooms):
            if utility in self.rooms[name].utilities:
                return name
        return None


@dataclass
class Feedback:
    text: str
    reward: int = 0
    done: bool = False


@dataclass
class GameState:
    room: str
    inventory: list
    room_items: dict            # room name -> list of Items
    door_closed: dict           # door name -> bool
    recipe_read: bool = False
    meal_prepared: bool = False
    score: int = 0
    steps: int = 0
    status: str = "ongoing"     # ongoing | won | lost
    reason: str = ""            # "" | burned | timeout
    awarded: set = field(default_factory=set)


def new_game(world):
    return GameState(
        room=world.start_room,
        inventory=[i.copy() for i in world.initial_inventory],
        room_items={name: [i.copy() for i in room.items]
                    for name, room in world.rooms.items()},
        door_closed=dict(world.doors),
    )


# ---------------------------------------------------------------- rendering

def render_item(item):
    return item.render()


def room_sentences(world, state, room_name):
    """Structured description: list of (sentence, door_name, door_closed).

    door_name is None for non-door sentences; the tuple form lets the
    navigation dataset label door-name tokens by position.
    """
    room = world.rooms[room_name]
    key = (world.flavor, room_name)
    out = []

    def plain(s):
        out.append((s, None, False))

    plain(T.pick_variant(T.ROOM_ENTER, "enter", *key).format(room=room_name))
    h = T.stable_hash("distract", world.flavor, room_name, state.steps)
    n_distract = h % 3
    pool = T.DISTRACTOR_SENTENCES
    if n_distract >= 1:
        plain(pool[(h >> 4) % len(pool)])
    if room.utilities:
        items = T.join_and([T.with_article(u) for u in room.utilities])
        plain(T.pick_variant(T.ROOM_UTILITIES, "utility", *key)
              .format(room=room_name, items=items))
    items_here = state.room_items[room_name]
    if items_here:
        rendered = T.join_and([T.with_article(i.render()) for i in items_here])
        plain(T.pick_variant(T.ROOM_ITEMS, "items", *key).format(items=rendered))
    if world.cookbook_room == room_name:
        plain(T.pick_variant(T.ROOM_COOKBOOK, "cookbook", *key))
    if n_distract >= 2:
        plain(pool[(h >> 9) % len(pool)])
    for d in T.DIRECTIONS:
        if d not in room.exits:
            continue
        door = room.doors.get(d)
        if door is None:
            plain(T.pick_variant(T.ROOM_EXIT, "exit", *key, d).format(dir=d))
        else:
            closed = state.door_closed[door]
            s = T.pick_variant(T.ROOM_DOOR, "door", *key, d).format(
                a=T.article(door), state="closed" if closed else "open",
                door=door, dir=d)
            out.append((s, door, closed))
    return out


def render_room(world, state, room_name=None):
    room_name = room_name or state.room
    sentences = [s for s, _, _ in room_sentences(world, state, room_name)]
    return f"-= {room_name.title()} =- " + " ".join(sentences)


def render_inventory(state):
    if not state.inventory:
        return T.INVENTORY_EMPTY
    items = ", ".join(T.with_article(i.render()) for i in state.inventory)
    return f"{T.INVENTORY_PREFIX} {items}."


def render_recipe(world):
    ing = ", ".join(req.name for req in world.recipe.ingredients)
    dirs = ". ".join(world.recipe.direction_lines())
    dirs = (dirs + ".") if dirs else "enjoy as it is."
    return f"{T.RECIPE_HEADER} Ingredients: {ing}. Directions: {dirs}"


def render_observation(world, state, last_feedback=None):
    if last_feedback is None:
        return T.INTRO_TEXT + " " + render_room(world, state)
    return last_feedback.text


# ------------------------------------------------------------- state logic

def _find_item(items, words):
    """Resolve an item by base name, tolerating leading state adjectives."""
    stripped = list(words)
    while stripped and stripped[0] in T.STATE_ADJECTIVES + ("raw",):
        stripped.pop(0)
    name = " ".join(stripped)
    for item in items:
        if item.name == name:
            return item
    return None


def _required(world, name):
    for req in world.recipe.ingredients:
        if req.name == name:
            return req
    return None


def _award(world, state, key):
    if key in state.awarded:
        return 0
    state.awarded.add(key)
    state.score += 1
    return 1


def _held_ingredients_match(world, state):
    for req in world.recipe.ingredients:
        item = next((i for i in state.inventory if i.name == req.name), None)
        if item is None or item.cut != req.cut or item.heat != req.heat:
            return False
    return True


def _strip_article(words):
    if words and words[0] in ("the", "a", "an"):
        return words[1:]
    return words


def apply_command(world, state, command):
    """Apply one command; always consumes a step. Returns Feedback."""
    if state.status != "ongoing":
        raise ValueError("game is not ongoing")
    state.steps += 1
    fb = _dispatch(world, state, command)
    if state.status == "ongoing" and state.steps >= world.max_steps:
        state.status = "lost"
        state.reason = "timeout"
        fb = Feedback(fb.text + " " + T.MSG_TIMEOUT, fb.reward, True)
    return fb


def _dispatch(world, state, command):
    words = " ".join(str(command).lower().split()).split()
    room = world.rooms[state.room]

    if not words:
        return Feedback(T.MSG_NOTHING)

    verb, rest = words[0], _strip_article(words[1:])

    if verb == "look" and not rest:
        return Feedback(render_room(world, state))

    if verb == "inventory" and not rest:
        return Feedback(render_inventory(state))

    if verb == "examine":
        if rest == ["cookbook"] and world.cookbook_room == state.room:
            state.recipe_read = True
            return Feedback(render_recipe(world))
        return Feedback(T.MSG_NOTHING)

    if verb == "go":
        if len(rest) != 1 or rest[0] not in T.DIRECTIONS:
            return Feedback(T.MSG_NOTHING)
        d = rest[0]
        if d not in room.exits:
            return Feedback(T.MSG_GO_NO_EXIT.format(dir=d))
        door = room.doors.get(d)
        if door is not None and state.door_closed[door]:
            return Feedback(T.MSG_GO_CLOSED.format(door=door))
        state.room = room.exits[d]
        return Feedback(render_room(world, state))

    if verb == "open":
        name = " ".join(rest)
        for d in T.DIRECTIONS:
            door = room.doors.get(d)
            if door == name:
                if not state.door_closed[door]:
                    return Feedback(T.MSG_OPEN_ALREADY.format(door=door))
                state.door_closed[door] = False
                return Feedback(T.MSG_OPEN.format(door=door))
        return Feedback(T.MSG_OPEN_MISSING)

    if verb == "take":
        item = _find_item(state.room_items[state.room], rest)
        if item is None:
            return Feedback(T.MSG_TAKE_MISSING.format(name=" ".join(rest) or "such thing"))
        if len(state.inventory) >= world.capacity:
            return Feedback(T.MSG_TAKE_FULL)
        state.room_items[state.room].remove(item)
        state.inventory.append(item)
        reward = 0
        if _required(world, item.name) is not None:
            reward = _award(world, state, ("take", item.name))
        msg = T.MSG_TAKE.format(item=item.render())
        if reward:
            msg += " " + T.SCORE_SENTENCE
        return Feedback(msg, reward)

    if verb == "drop":
        item = _find_item(state.inventory, rest)
        if item is None:
            return Feedback(T.MSG_DROP_MISSING.format(name=" ".join(rest) or "such thing"))
        state.inventory.remove(item)
        state.room_items[state.room].append(item)
        return Feedback(T.MSG_DROP.format(item=item.render()))

    if verb in T.CUT_VERBS:
        if len(rest) < 3 or rest[-2:] != ["with", "knife"]:
            return Feedback(T.MSG_NOTHING)
        target = rest[:-2]
        if "knife" not in room.utilities:
            return Feedback(T.MSG_CUT_NO_KNIFE)
        item = _find_item(state.inventory, target)
        if item is None or item.name == "meal":
            return Feedback(T.MSG_NOT_CARRIED.format(name=" ".join(target)))
        if item.cut != "none":
            return Feedback(T.MSG_CUT_AGAIN.format(name=item.name))
        item.cut = T.CUT_VERBS[verb]
        req = _required(world, item.name)
        reward = 0
        if req is not None and req.cut == item.cut:
            reward = _award(world, state, ("cut", item.name))
        msg = T.MSG_CUT.format(verb=verb, name=item.name)
        if reward:
            msg += " " + T.SCORE_SENTENCE
        return Feedback(msg, reward)

    if verb == "cook":
        if len(rest) < 3 or rest[-2] != "with" or rest[-1] not in T.HEAT_FOR_UTILITY:
            return Feedback(T.MSG_NOTHING)
        utility = rest[-1]
        target = rest[:-2]
        if utility not in room.utilities:
            return Feedback(T.MSG_NOTHING)
        item = _find_item(state.inventory, target)
        if item is None or item.name == "meal":
            return Feedback(T.MSG_NOT_CARRIED.format(name=" ".join(target)))
        if item.heat != "none":
            state.status = "lost"
            state.reason = "burned"
            reward = -1 if world.loss_penalty else 0
            return Feedback(T.MSG_BURN.format(name=item.name), reward, True)
        item.heat = T.HEAT_FOR_UTILITY[utility]
        req = _required(world, item.name)
        reward = 0
        if req is not None and req.heat == item.heat:
            reward = _award(world, state, ("heat", item.name))
        msg = T.MSG_COOK.format(name=item.name, utility=utility, adj=item.heat)
        if reward:
            msg += " " + T.SCORE_SENTENCE
        return Feedback(msg, reward)

    if verb == "prepare" and rest == ["meal"]:
        ready = (state.recipe_read and state.room == world.kitchen
                 and not state.meal_prepared
                 and _held_ingredients_match(world, state))
        if not ready:
            return Feedback(T.MSG_PREPARE_FAIL)
        names = {req.name for req in world.recipe.ingredients}
        state.inventory = [i for i in state.inventory if i.name not in names]
        state.inventory.append(Item("meal"))
        state.meal_prepared = True
        reward = _award(world, state, ("prepare",))
        return Feedback(T.MSG_PREPARE + " " + T.SCORE_SENTENCE, reward)

    if verb == "eat" and rest == ["meal"]:
        item = next((i for i in state.inventory if i.name == "meal"), None)
        if item is None:
            return Feedback(T.MSG_EAT_MISSING)
        state.inventory.remove(item)
        reward = _award(world, state, ("eat",))
        state.status = "won"
        return Feedback(T.MSG_EAT, reward, True)

    return Feedback(T.MSG_NOTHING)


def admissible_commands(world, state):
    """Exactly the commands that change state or yield information."""
    room = world.rooms[state.room]
    cmds = ["look", "inventory"]
    if world.cookbook_room == state.room:
        cmds.append("examine cookbook")
    for d in T.DIRECTIONS:
        if d not in room.exits:
            continue
        door = room.doors.get(d)
        if door is None or not state.door_closed[door]:
            cmds.append(f"go {d}")
    for d in T.DIRECTIONS:
        door = room.doors.get(d)
        if door is not None and state.door_closed[door]:
            cmds.append(f"open {door}")
    if len(state.inventory) < world.capacity:
        for item in state.room_items[state.room]:
            cmds.append(f"take {item.name}")
    for item in state.inventory:
        cmds.append(f"drop {item.name}")
    knife_here = "knife" in room.utilities
    for item in state.inventory:
        if item.name == "meal":
            continue
        if knife_here and item.cut == "none":
            for verb in T.CUT_VERBS:
                cmds.append(f"{verb} {item.name} with knife")
        for utility in ("stove", "oven", "bbq"):
            if utility in room.utilities:
                cmds.append(f"cook {item.name} with {utility}")
    if (state.recipe_read and state.room == world.kitchen
            and not state.meal_prepared and _held_ingredients_match(world, state)):
        cmds.append("prepare meal")
    if any(i.name == "meal" for i in state.inventory):
        cmds.append("eat meal")
    return cmds


# ------------------------------------------------------------- walkthrough

def _bfs_path(world, src, dst):
    """Directions from src to dst, ignoring door states (doors get opened)."""
    if src == dst:
        return []
    parent = {src: None}
    queue = [src]
    while queue:
        cur = queue.pop(0)
        for d in T.DIRECTIONS:
            nxt = world.rooms[cur].exits.get(d)
            if nxt is not None and nxt not in parent:
                parent[nxt] = (cur, d)
                if nxt == dst:
                    path = []
                    node = dst
                    while parent[node] is not None:
                        prev, pd = parent[node]
                        path.append(pd)
                        node = prev
                    return path[::-1]
                queue.append(nxt)
    raise GenerationError(f"no path from {src} to {dst}")


def walkthrough(world):
    """Command list that wins the game with max score; raises on bad worlds."""
    state = new_game(world)
    cmds = []

    def run(cmd):
        fb = apply_command(world, state, cmd)
        if state.status == "lost":
            raise GenerationError(f"walkthrough failed at {cmd!r}: {fb.text}")
        cmds.append(cmd)

    def goto(target):
        if target is None:
            raise GenerationError("required utility missing from world")
        for d in _bfs_path(world, state.room, target):
            door = world.rooms[state.room].doors.get(d)
            if door is not None and state.door_closed[door]:
                run(f"open {door}")
            run(f"go {d}")

    goto(world.cookbook_room)
    run("examine cookbook")

    required = {req.name for req in world.recipe.ingredients}
    for item in [i for i in state.inventory if i.name not in required]:
        run(f"drop {item.name}")

    def room_of(name):
        for rn in sorted(state.room_items):
            if any(i.name == name for i in state.room_items[rn]):
                return rn
        raise GenerationError(f"ingredient {name!r} not placed in any room")

    remaining = [req.name for req in world.recipe.ingredients
                 if not any(i.name == req.name for i in state.inventory)]
    while remaining:
        dists = [(len(_bfs_path(world, state.room, room_of(n))), room_of(n), n)
                 for n in remaining]
        dists.sort()
        _, target_room, name = dists[0]
        goto(target_room)
        run(f"take {name}")
        remaining.remove(name)

    cuts = [req for req in world.recipe.ingredients if req.cut != "none"]
    if cuts:
        goto(world.utility_room("knife"))
        for req in cuts:
            run(f"{T.VERB_FOR_CUT[req.cut]} {req.name} with knife")
    indoor = [req for req in world.recipe.ingredients
              if req.heat in ("fried", "roasted")]
    if indoor:
        goto(world.utility_room("stove"))
        for req in indoor:
            run(f"cook {req.name} with {T.UTILITY_FOR_HEAT[req.heat]}")
    grills = [req for req in world.recipe.ingredients if req.heat == "grilled"]
    if grills:
        goto(world.utility_room("bbq"))
        for req in grills:
            run(f"cook {req.name} with bbq")

    goto(world.kitchen)
    run("prepare meal")
    run("eat meal")

    if state.status != "won" or state.score != world.max_score:
        raise GenerationError(
            f"walkthrough ended with status={state.status} score={state.score}"
            f"/{world.max_score}")
    return cmds


# ------------------------------------------------------- export / identity

def world_to_dict(world):
    return {
        "rooms": {
            name: {
                "exits": dict(sorted(room.exits.items())),
                "doors": dict(sorted(room.doors.items())),
                "utilities": list(room.utilities),
                "items": [asdict(i) for i in room.items],
            }
            for name, room in sorted(world.rooms.items())
        },
        "doors": dict(sorted(world.doors.items())),
        "start_room": world.start_room,
        "kitchen": world.kitchen,
        "cookbook_room": world.cookbook_room,
        "recipe": {
            "ingredients": [asdict(r) for r in world.recipe.ingredients],
            "directions": [list(d) for d in world.recipe.directions],
        },
        "initial_inventory": [asdict(i) for i in world.initial_inventory],
        "flavor": world.flavor,
        "capacity": world.capacity,
        "max_steps": world.max_steps,
        "loss_penalty": world.loss_penalty,
    }


def world_from_dict(d):
    rooms = {
        name: Room(
            name=name,
            exits=dict(rd["exits"]),
            doors=dict(rd["doors"]),
            utilities=tuple(rd["utilities"]),
            items=tuple(Item(**i) for i in rd["items"]),
        )
        for name, rd in d["rooms"].items()
    }
    recipe = Recipe(
        ingredients=tuple(IngredientReq(**r) for r in d["recipe"]["ingredients"]),
        directions=tuple(tuple(x) for x in d["recipe"]["directions"]),
    )
    return World(
        rooms=rooms,
        doors=dict(d["doors"]),
        start_room=d["start_room"],
        kitchen=d["kitchen"],
        cookbook_room=d["cookbook_room"],
        recipe=recipe,
        initial_inventory=tuple(Item(**i) for i in d["initial_inventory"]),
        flavor=d["flavor"],
        capacity=d["capacity"],
        max_steps=d["max_steps"],
        loss_penalty=d["loss_penalty"],
    )


def world_hash(world):
    blob = json.dumps(world_to_dict(world), sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def mentions_phrase(description_tokens, phrase):
    """True if the phrase's tokens occur consecutively in the description."""
    needle = tokenize(phrase)
    n = len(needle)
    for i in range(len(description_tokens) - n + 1):
        if description_tokens[i:i + n] == needle:
            return True
    return False


def mentions_item(description_tokens, name):
    """True if the description lists an item with this base name: the name's
    tokens preceded by an article plus optional state adjectives."""
    needle = tokenize(name)
    n = len(needle)
    adjs = set(T.STATE_ADJECTIVES) | {"raw"}
    for i in range(len(description_tokens) - n + 1):
        if description_tokens[i:i + n] != needle:
            continue
        j = i - 1
        while j >= 0 and description_tokens[j] in adjs:
            j -= 1
        if j >= 0 and description_tokens[j] in ("a", "an"):
            return True
    return False
