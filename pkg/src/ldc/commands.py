"""Candidate-set assembly: the pruned, partially grouped list of commands
offered to the agent each step, combining recipe-manager output, navigator
output, and the fixed always-available commands."""

from dataclasses import dataclass

from .engine import apply_command
from .lexicon import tokenize
from .navigator import build_nav_commands
from .recipe import Candidate, build_recipe_commands


@dataclass(frozen=True)
class StepContext:
    """Everything assemble_candidates needs about the current step."""
    description: str
    inventory: str
    location: str
    kitchen_name: str
    recipe_status: object        # RecipeStatus or None before the recipe is read
    nav_exits: dict
    nav_doors: list
    last_command: str = ""
    meal_held: bool = False


def assemble_candidates(ctx):
    """Ordered, de-duplicated candidate list (recipe, nav, fixed)."""
    out = []
    if ctx.recipe_status is not None:
        recipe_cmds = build_recipe_commands(ctx.recipe_status,
                                            ctx.description, ctx.inventory)
        out.extend(sorted(recipe_cmds, key=lambda c: c.text))
    out.extend(build_nav_commands(ctx.nav_exits, ctx.nav_doors))

    fixed = []
    for cmd in ("look", "inventory"):
        if ctx.last_command != cmd:
            fixed.append(cmd)
    if (ctx.recipe_status is not None and not ctx.recipe_status.pending_any
            and ctx.location == ctx.kitchen_name):
        fixed.append("prepare meal")
    if ctx.meal_held:
        fixed.append("eat meal")
    if "cookbook" in tokenize(ctx.description):
        fixed.append("examine cookbook")
    out.extend(Candidate(c, (c,), "fixed") for c in sorted(fixed))

    seen = set()
    unique = []
    for c in out:
        if c.text not in seen:
            seen.add(c.text)
            unique.append(c)
    if not unique:
        unique = [Candidate("look", ("look",), "fixed")]
    return unique


def execute_choice(world, state, candidate):
    """Run a candidate's expansion through the engine; returns
    (feedbacks, total reward, done). Grouped commands consume one engine
    step per low-level command and stop early on a terminal state."""
    feedbacks = []
    total = 0
    done = False
    for cmd in candidate.expansion:
        fb = apply_command(world, state, cmd)
        feedbacks.append(fb)
        total += fb.reward
        if fb.done:
            done = True
            break
    return feedbacks, total, done
