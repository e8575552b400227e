"""All surface text used by the game engine and generator.

Kept in one module so the vocabulary can be built deterministically from
the complete set of strings a game can ever emit.
"""

import zlib

DIRECTIONS = ("north", "east", "south", "west")
OPPOSITE = {"north": "south", "south": "north", "east": "west", "west": "east"}
# grid deltas: (dx, dy) with north = +y
DELTA = {"north": (0, 1), "south": (0, -1), "east": (1, 0), "west": (-1, 0)}

CUT_VERBS = {"slice": "sliced", "dice": "diced", "chop": "chopped"}
HEAT_VERBS = {"fry": "fried", "roast": "roasted", "grill": "grilled"}
CUT_STATES = ("sliced", "diced", "chopped")
HEAT_STATES = ("fried", "roasted", "grilled")
STATE_ADJECTIVES = CUT_STATES + HEAT_STATES

UTILITY_FOR_HEAT = {"fried": "stove", "roasted": "oven", "grilled": "bbq"}
HEAT_FOR_UTILITY = {v: k for k, v in UTILITY_FOR_HEAT.items()}
VERB_FOR_CUT = {v: k for k, v in CUT_VERBS.items()}
VERB_FOR_HEAT = {v: k for k, v in HEAT_VERBS.items()}

ROOM_NAMES = (
    "kitchen", "pantry", "living room", "bedroom", "bathroom", "corridor",
    "backyard", "garden", "driveway", "shed", "cellar", "laundry room",
    "balcony", "attic",
)
OUTDOOR_ROOMS = ("backyard", "garden", "driveway", "balcony")

DOOR_STYLES = ("sliding", "frosted", "fancy", "heavy", "sturdy")
DOOR_MATERIALS = ("patio", "glass", "wooden", "screen", "barn", "front", "metal")

INTRO_TEXT = ("You are hungry! Better find the cookbook somewhere around "
              "here, prepare the recipe it describes, and eat your meal.")

DISTRACTOR_SENTENCES = (
    "You hear a faint noise coming from somewhere behind you.",
    "Somewhere in the distance a dog starts barking.",
    "A gust of wind rattles the windows for a moment.",
    "You get the feeling you are forgetting something important.",
    "The floorboards creak under your feet.",
    "A clock ticks away somewhere out of sight.",
    "Dust dances in a thin beam of light.",
    "You shiver, although it is not particularly cold in here.",
    "Nothing about this place looks out of the ordinary.",
    "You could swear something just moved at the corner of your eye.",
    "The silence in here is almost deafening.",
    "A fly buzzes lazily past your head.",
    "Outside, a car drives by without stopping.",
    "What a strange day this is turning out to be.",
)

SCORE_SENTENCE = "Your score has just gone up by one point."

# paired templates; pick_variant chooses one deterministically
ROOM_ENTER = ("You are in the {room}.",
              "You find yourself in the {room}.")
ROOM_UTILITIES = ("The {room} is equipped with {items}.",
                  "There is {items} in here.")
ROOM_ITEMS = ("You see {items} on the floor.",
              "Someone has left {items} lying around.")
ROOM_COOKBOOK = ("A cookbook sits here, waiting to be read.",
                 "There is a cookbook in here.")
ROOM_EXIT = ("There is an exit to the {dir}.",
             "You can go {dir} from here.")
ROOM_DOOR = ("There is {a} {state} {door} leading {dir}.",
             "To the {dir} you see {a} {state} {door}.")

MSG_TAKE = "You pick up the {item}."
MSG_TAKE_FULL = "You are carrying too many things already."
MSG_TAKE_MISSING = "You do not see any {name} here."
MSG_DROP = "You drop the {item}."
MSG_DROP_MISSING = "You are not carrying any {name}."
MSG_GO_CLOSED = "The {door} is closed. You should open it first."
MSG_GO_NO_EXIT = "You cannot go {dir} from here."
MSG_OPEN = "You open the {door}."
MSG_OPEN_ALREADY = "The {door} is already open."
MSG_OPEN_MISSING = "There is no such door here."
MSG_CUT = "You {verb} the {name} with the knife."
MSG_CUT_AGAIN = "The {name} has already been cut."
MSG_CUT_NO_KNIFE = "You need a knife to do that."
MSG_NOT_CARRIED = "You need to pick up the {name} first."
MSG_COOK = "You cook the {name} with the {utility}. The {name} is now {adj}."
MSG_BURN = ("You cook the {name} one time too many. It burns to a crisp, "
            "and with it your hopes of a decent meal. You lost!")
MSG_PREPARE = ("You follow the recipe step by step and prepare the meal. "
               "It smells delicious!")
MSG_PREPARE_FAIL = "You cannot prepare the meal yet."
MSG_EAT = "You sit down and eat the meal. It is exactly what you needed. You won!"
MSG_EAT_MISSING = "You have no meal to eat."
MSG_NOTHING = "Nothing happens."
MSG_TIMEOUT = "You have run out of time. You lost!"

RECIPE_HEADER = "You open the cookbook and start reading."
INVENTORY_PREFIX = "You are carrying:"
INVENTORY_EMPTY = "You are carrying nothing."

_VOWELS = "aeiou"


def article(phrase):
    return "an" if phrase[:1] in _VOWELS else "a"


def with_article(phrase):
    return f"{article(phrase)} {phrase}"


def join_and(parts):
    """'a, b and c' list rendering."""
    parts = list(parts)
    if not parts:
        return ""
    if len(parts) == 1:
        return parts[0]
    return ", ".join(parts[:-1]) + " and " + parts[-1]


def stable_hash(*parts):
    """Deterministic 32-bit hash of string pieces (not Python's salted hash)."""
    return zlib.crc32("\x1f".join(str(p) for p in parts).encode("utf-8"))


def pick_variant(variants, *key):
    return variants[stable_hash("variant", *key) % len(variants)]


def _template_texts():
    texts = [INTRO_TEXT, SCORE_SENTENCE, RECIPE_HEADER, INVENTORY_PREFIX,
             INVENTORY_EMPTY]
    texts += list(DISTRACTOR_SENTENCES)
    texts += [t for group in
              (ROOM_ENTER, ROOM_UTILITIES, ROOM_ITEMS, ROOM_COOKBOOK,
               ROOM_EXIT, ROOM_DOOR)
              for t in group]
    texts += [MSG_TAKE, MSG_TAKE_FULL, MSG_TAKE_MISSING, MSG_DROP,
              MSG_DROP_MISSING, MSG_GO_CLOSED, MSG_GO_NO_EXIT, MSG_OPEN,
              MSG_OPEN_ALREADY, MSG_OPEN_MISSING, MSG_CUT, MSG_CUT_AGAIN,
              MSG_CUT_NO_KNIFE, MSG_NOT_CARRIED, MSG_COOK, MSG_BURN,
              MSG_PREPARE, MSG_PREPARE_FAIL, MSG_EAT, MSG_EAT_MISSING,
              MSG_NOTHING, MSG_TIMEOUT]
    return texts


def vocabulary_texts():
    """Every string the engine or generator can emit or accept."""
    texts = _template_texts()
    texts += list(ROOM_NAMES) + list(DIRECTIONS)
    texts += list(DOOR_STYLES) + list(DOOR_MATERIALS) + ["door"]
    texts += list(CUT_VERBS) + list(HEAT_VERBS) + list(STATE_ADJECTIVES)
    texts += ["cook", "take", "drop", "go", "open", "examine", "look",
              "inventory", "prepare", "eat", "meal", "cookbook", "knife",
              "stove", "oven", "bbq", "the", "a", "an", "with", "from",
              "all", "required", "ingredients", "here", "unnecessary",
              "items", "nothing", "unknown", "recipe", "directions"]
    return texts
