"""Procedural generation: game worlds on a room grid, plus the supervised
datasets for the recipe manager and the navigator.

Everything here is a pure function of (seed, config, lexicon); worlds are
validated with the walkthrough oracle before being returned.
"""

import json
import random
from dataclasses import dataclass, field, replace

from . import text as T
from .engine import (GenerationError, IngredientReq, Item, Recipe, Room,
                     World, new_game, render_inventory, room_sentences,
                     walkthrough)
from .lexicon import tokenize


@dataclass(frozen=True)
class GenConfig:
    rooms: tuple = (4, 8)
    ingredients: tuple = (2, 4)
    directions_per_ingredient: tuple = (0, 2)
    door_prob: float = 0.3
    extra_edge_prob: float = 0.25
    distractor_items: tuple = (2, 5)
    start_items: tuple = (0, 2)
    capacity: int = 5
    max_steps: int = 100
    split: str = "train"

    def __post_init__(self):
        for lo, hi in (self.rooms, self.ingredients,
                       self.directions_per_ingredient):
            if lo > hi or lo < 0:
                raise ValueError("empty range in generator config")
        if not 0.0 <= self.door_prob <= 1.0:
            raise ValueError("door_prob must be in [0, 1]")


SPLIT_SEED_BASE = {"train": 0, "valid": 1_000_000, "test": 2_000_000}


def split_seed(split, index):
    return SPLIT_SEED_BASE[split] + index


def _door_name(rng, taken):
    for _ in range(50):
        kind = rng.random()
        if kind < 0.1:
            name = "door"
        elif kind < 0.6:
            name = f"{rng.choice(T.DOOR_MATERIALS)} door"
        else:
            name = (f"{rng.choice(T.DOOR_STYLES)} "
                    f"{rng.choice(T.DOOR_MATERIALS)} door")
        if name not in taken:
            return name
    raise GenerationError("ran out of distinct door names")


def _sample_state(rng, p_cut=0.4, p_heat=0.4):
    cut = rng.choice(T.CUT_STATES) if rng.random() < p_cut else "none"
    heat = rng.choice(T.HEAT_STATES) if rng.random() < p_heat else "none"
    return cut, heat


def _build_world(rng, config, lexicon):
    n_rooms = rng.randint(*config.rooms)
    names = ["kitchen"] + rng.sample(
        [r for r in T.ROOM_NAMES if r != "kitchen"], n_rooms - 1)

    # place rooms on a grid so cardinal exits stay consistent
    pos = {(0, 0): names[0]}
    placed = [names[0]]
    for name in names[1:]:
        options = []
        for (x, y), anchor in sorted(pos.items()):
            for d in T.DIRECTIONS:
                dx, dy = T.DELTA[d]
                cell = (x + dx, y + dy)
                if cell not in pos:
                    options.append((anchor, d, cell))
        anchor, d, cell = rng.choice(options)
        pos[cell] = name
        placed.append(name)

    cell_of = {v: k for k, v in pos.items()}
    rooms = {name: Room(name=name) for name in names}
    edges = set()

    def connect(a, b, d):
        rooms[a].exits[d] = b
        rooms[b].exits[T.OPPOSITE[d]] = a
        edges.add(tuple(sorted((a, b))))

    # spanning edges from the placement, then optional extra edges
    for name in names[1:]:
        x, y = cell_of[name]
        for d in T.DIRECTIONS:
            dx, dy = T.DELTA[d]
            neighbor = pos.get((x + dx, y + dy))
            if neighbor in placed[:placed.index(name)]:
                connect(name, neighbor, d)
                break
    for (x, y), a in sorted(pos.items()):
        for d in ("north", "east"):
            dx, dy = T.DELTA[d]
            b = pos.get((x + dx, y + dy))
            if b and tuple(sorted((a, b))) not in edges:
                if rng.random() < config.extra_edge_prob:
                    dir_ab = d if rooms[a].exits.get(d) is None else None
                    if dir_ab:
                        connect(a, b, d)

    doors = {}
    for a, b in sorted(edges):
        if rng.random() < config.door_prob:
            name = _door_name(rng, doors)
            doors[name] = rng.random() < 0.75  # mostly start closed
            d_ab = next(d for d, r in rooms[a].exits.items() if r == b)
            rooms[a].doors[d_ab] = name
            rooms[b].doors[T.OPPOSITE[d_ab]] = name

    # recipe
    n_ing = rng.randint(*config.ingredients)
    pool = list(lexicon.game_pool)
    food_names = rng.sample(pool, n_ing)
    ingredients = []
    directions = []
    for name in food_names:
        n_dirs = rng.randint(*config.directions_per_ingredient)
        cut = heat = "none"
        if n_dirs == 1:
            if rng.random() < 0.5:
                cut = rng.choice(T.CUT_STATES)
            else:
                heat = rng.choice(T.HEAT_STATES)
        elif n_dirs >= 2:
            cut = rng.choice(T.CUT_STATES)
            heat = rng.choice(T.HEAT_STATES)
        ingredients.append(IngredientReq(name, cut=cut, heat=heat))
        if cut != "none":
            directions.append((T.VERB_FOR_CUT[cut], name))
        if heat != "none":
            directions.append((T.VERB_FOR_HEAT[heat], name))
    recipe = Recipe(ingredients=tuple(ingredients), directions=tuple(directions))

    # utilities: stove/oven in the kitchen, knife mostly there, bbq outdoors
    rooms["kitchen"].utilities = ("stove", "oven")
    knife_room = "kitchen" if rng.random() < 0.8 else rng.choice(names)
    rooms[knife_room].utilities = tuple(rooms[knife_room].utilities) + ("knife",)
    needs_bbq = any(req.heat == "grilled" for req in ingredients)
    if needs_bbq or rng.random() < 0.3:
        outdoor = [r for r in names if r in T.OUTDOOR_ROOMS]
        bbq_room = rng.choice(outdoor) if outdoor else "kitchen"
        rooms[bbq_room].utilities = tuple(rooms[bbq_room].utilities) + ("bbq",)

    cookbook_room = "kitchen" if rng.random() < 0.4 else rng.choice(names)
    start_room = rng.choice(names)

    # required ingredients are placed raw; distractor foods may carry states
    placements = {name: [] for name in names}
    for req in ingredients:
        placements[rng.choice(names)].append(Item(req.name))
    used = set(food_names)
    n_distract = rng.randint(*config.distractor_items)
    distract_pool = [f for f in pool if f not in used]
    distractors = rng.sample(distract_pool, n_distract)
    for food in distractors:
        cut, heat = _sample_state(rng)
        placements[rng.choice(names)].append(Item(food, cut=cut, heat=heat))
        used.add(food)

    initial_inventory = []
    n_start = rng.randint(*config.start_items)
    if n_start:
        start_pool = [f for f in pool if f not in used]
        for food in rng.sample(start_pool, n_start):
            cut, heat = _sample_state(rng, p_cut=0.3, p_heat=0.3)
            initial_inventory.append(Item(food, cut=cut, heat=heat))

    for name in names:
        rooms[name].items = tuple(placements[name])

    return World(
        rooms=rooms,
        doors=doors,
        start_room=start_room,
        kitchen="kitchen",
        cookbook_room=cookbook_room,
        recipe=recipe,
        initial_inventory=tuple(initial_inventory),
        flavor=rng.getrandbits(31),
        capacity=config.capacity,
        max_steps=config.max_steps,
    )


def generate_world(seed, config, lexicon):
    """Deterministic world for (seed, config); validated via walkthrough."""
    rng = random.Random(f"{config.split}/{seed}")
    last_error = None
    for _ in range(20):
        try:
            world = _build_world(rng, config, lexicon)
            walkthrough(world)
            return world
        except GenerationError as e:  # resample from the same stream
            last_error = e
    raise GenerationError(f"could not generate a valid world for seed {seed}: "
                          f"{last_error}")


def generate_worlds(base_seed, count, config, lexicon):
    return [generate_world(split_seed(config.split, base_seed + i), config,
                           lexicon)
            for i in range(count)]


# ------------------------------------------------------------ recipe data

@dataclass(frozen=True)
class RecipeSample:
    direction: str
    inventory: str
    needed: int
    collect: int
    holdout: int = 0


_DATASET_VERBS = tuple(T.CUT_VERBS) + tuple(T.HEAT_VERBS) + ("take",)


def _satisfies(verb, item):
    if verb == "take":
        return True
    if verb in T.CUT_VERBS:
        return item.cut == T.CUT_VERBS[verb]
    return item.heat == T.HEAT_VERBS[verb]


def generate_recipe_dataset(seed, n, lexicon):
    """Direction/inventory pairs with needed/collect labels.

    Half the target foods come from the holdout pool so the classifier is
    forced to generalize past the foods the world generator uses.
    """
    rng = random.Random(f"recipe-data/{seed}")
    samples = []
    game_pool = list(lexicon.game_pool)
    holdout_pool = list(lexicon.holdout_pool)
    for _ in range(n):
        holdout = rng.random() < 0.5
        food = rng.choice(holdout_pool if holdout else game_pool)
        verb = rng.choice(_DATASET_VERBS)
        present = rng.random() < 0.65

        inv_items = []
        target = None
        if present:
            target = Item(food)
            if verb in T.CUT_VERBS:
                if rng.random() < 0.5:
                    target.cut = T.CUT_VERBS[verb]
                elif rng.random() < 0.4:
                    target.cut = rng.choice(T.CUT_STATES)
                if rng.random() < 0.3:
                    target.heat = rng.choice(T.HEAT_STATES)
            elif verb in T.HEAT_VERBS:
                if rng.random() < 0.5:
                    target.heat = T.HEAT_VERBS[verb]
                elif rng.random() < 0.4:
                    target.heat = rng.choice(T.HEAT_STATES)
                if rng.random() < 0.3:
                    target.cut = rng.choice(T.CUT_STATES)
            else:
                cut, heat = _sample_state(rng, 0.3, 0.3)
                target.cut, target.heat = cut, heat
            inv_items.append(target)

        others = [f for f in game_pool + holdout_pool if f != food]
        # skew toward the small inventories the engine actually produces
        n_extra = rng.choices((0, 1, 2, 3, 4), weights=(30, 25, 20, 15, 10))[0]
        for other in rng.sample(others, n_extra):
            cut, heat = _sample_state(rng, 0.3, 0.3)
            inv_items.append(Item(other, cut=cut, heat=heat))
        rng.shuffle(inv_items)

        class _Inv:
            inventory = inv_items

        needed = 0 if (target is not None and _satisfies(verb, target)) else 1
        collect = 0 if present else 1
        if verb == "take":
            needed = collect
        samples.append(RecipeSample(
            direction=f"{verb} the {food}",
            inventory=render_inventory(_Inv),
            needed=needed,
            collect=collect,
            holdout=int(holdout),
        ))
    return samples


# --------------------------------------------------------------- nav data

@dataclass(frozen=True)
class NavSample:
    description: str
    exits: dict                  # direction -> bool
    door_tokens: tuple           # one 0/1 label per description token


def _synthetic_room(rng, lexicon):
    name = rng.choice(T.ROOM_NAMES)
    room = Room(name=name)
    doors = {}
    exit_dirs = [d for d in T.DIRECTIONS if rng.random() < 0.45]
    for d in exit_dirs:
        room.exits[d] = "elsewhere"
        if rng.random() < 0.45:
            door = _door_name(rng, doors)
            doors[door] = rng.random() < 0.6
            room.doors[d] = door
    utilities = []
    if rng.random() < 0.4:
        utilities.append("stove")
        utilities.append("oven")
    if rng.random() < 0.3:
        utilities.append("knife")
    if rng.random() < 0.15:
        utilities.append("bbq")
    room.utilities = tuple(utilities)
    items = []
    for food in rng.sample(list(lexicon.game_pool), rng.randint(0, 3)):
        cut, heat = _sample_state(rng, 0.3, 0.3)
        items.append(Item(food, cut=cut, heat=heat))
    room.items = tuple(items)
    return room, doors, rng.random() < 0.3


def generate_nav_dataset(seed, n, lexicon):
    """Room descriptions labeled with exit directions and closed-door tokens."""
    rng = random.Random(f"nav-data/{seed}")
    samples = []
    for i in range(n):
        room, doors, with_cookbook = _synthetic_room(rng, lexicon)
        world = World(
            rooms={room.name: room, "elsewhere": Room(name="elsewhere")},
            doors=doors,
            start_room=room.name,
            kitchen=room.name,
            cookbook_room=room.name if with_cookbook else "elsewhere",
            recipe=Recipe(ingredients=(), directions=()),
            flavor=rng.getrandbits(31),
        )
        state = new_game(world)
        state.steps = rng.randint(0, 99)
        sentences = room_sentences(world, state, room.name)
        all_tokens = []
        labels = []
        for sentence, door, closed in sentences:
            toks = tokenize(sentence)
            marks = [0] * len(toks)
            if door is not None and closed:
                needle = tokenize(door)
                for j in range(len(toks) - len(needle) + 1):
                    if toks[j:j + len(needle)] == needle:
                        for k in range(j, j + len(needle)):
                            marks[k] = 1
                        break
            all_tokens.extend(toks)
            labels.extend(marks)
        header = tokenize(f"-= {room.name.title()} =-")
        description = " ".join(header + all_tokens)
        labels = [0] * len(header) + labels
        samples.append(NavSample(
            description=description,
            exits={d: d in room.exits for d in T.DIRECTIONS},
            door_tokens=tuple(labels),
        ))
    return samples


# ------------------------------------------------------------------ io

def samples_to_jsonl(samples, path):
    with open(path, "w", encoding="utf-8") as f:
        for s in samples:
            row = s.__dict__ if not hasattr(s, "_asdict") else s._asdict()
            f.write(json.dumps(row, sort_keys=True) + "\n")


def recipe_samples_from_jsonl(path):
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                out.append(RecipeSample(**json.loads(line)))
    return out


def nav_samples_from_jsonl(path):
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                d = json.loads(line)
                out.append(NavSample(description=d["description"],
                                     exits=d["exits"],
                                     door_tokens=tuple(d["door_tokens"])))
    return out
