import copy

import pytest

from ldc.engine import IngredientReq, Item, Recipe, Room, World


def make_two_room_world(**overrides):
    """Kitchen (start) + pantry east behind a closed sliding patio door.

    Recipe: red hot pepper (sliced + fried) and carrot (raw). The pepper is
    in the pantry, the carrot in the kitchen next to a pre-fried egg.
    """
    rooms = {
        "kitchen": Room(
            name="kitchen",
            exits={"east": "pantry"},
            doors={"east": "sliding patio door"},
            utilities=("stove", "oven", "knife"),
            items=(Item("carrot"), Item("egg", heat="fried")),
        ),
        "pantry": Room(
            name="pantry",
            exits={"west": "kitchen"},
            doors={"west": "sliding patio door"},
            items=(Item("red hot pepper"),),
        ),
    }
    recipe = Recipe(
        ingredients=(IngredientReq("red hot pepper", cut="sliced", heat="fried"),
                     IngredientReq("carrot")),
        directions=(("slice", "red hot pepper"), ("fry", "red hot pepper")),
    )
    kwargs = dict(
        rooms=rooms,
        doors={"sliding patio door": True},
        start_room="kitchen",
        kitchen="kitchen",
        cookbook_room="kitchen",
        recipe=recipe,
        initial_inventory=(),
        flavor=11,
    )
    kwargs.update(overrides)
    return World(**kwargs)


def make_one_room_world():
    """Minimal solvable world: one kitchen, one raw ingredient, no directions."""
    rooms = {
        "kitchen": Room(
            name="kitchen",
            utilities=("stove", "oven", "knife"),
            items=(Item("carrot"),),
        ),
    }
    recipe = Recipe(ingredients=(IngredientReq("carrot"),), directions=())
    return World(
        rooms=rooms,
        doors={},
        start_room="kitchen",
        kitchen="kitchen",
        cookbook_room="kitchen",
        recipe=recipe,
        flavor=3,
    )


@pytest.fixture
def two_room_world():
    return make_two_room_world()


@pytest.fixture
def one_room_world():
    return make_one_room_world()


def snapshot(state):
    return copy.deepcopy((state.room, state.inventory, state.room_items,
                          state.door_closed, state.recipe_read,
                          state.meal_prepared, state.score, state.steps,
                          state.status, state.reason, state.awarded))
