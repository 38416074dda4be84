import pytest

from textrules.world import EntitySpec, GameSpec, RoomSpec


@pytest.fixture
def shoe_spec():
    """Two shoes left on the coat rack; both belong in the shoe cabinet."""
    return GameSpec(
        "medium",
        [RoomSpec("bedroom", {})],
        [
            EntitySpec("shoe cabinet", "container", "bedroom"),
            EntitySpec("coat rack", "supporter", "bedroom"),
            EntitySpec("brown golf shoe", "object", "coat rack"),
            EntitySpec("blue moccasin", "object", "coat rack"),
        ],
        {"brown golf shoe": "shoe cabinet", "blue moccasin": "shoe cabinet"},
    )


@pytest.fixture
def two_room_spec():
    """A hat on the kitchen floor that belongs on the bedroom coat rack."""
    return GameSpec(
        "hard",
        [RoomSpec("kitchen", {"east": "bedroom"}), RoomSpec("bedroom", {"west": "kitchen"})],
        [
            EntitySpec("coat rack", "supporter", "bedroom"),
            EntitySpec("dining table", "supporter", "kitchen"),
            EntitySpec("old hat", "object", "kitchen"),
            EntitySpec("red napkin", "object", "coat rack"),
        ],
        {"old hat": "coat rack", "red napkin": "dining table"},
    )
