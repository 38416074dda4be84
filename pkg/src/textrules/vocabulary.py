"""Built-in household vocabulary of (object, holder) pairs.

Every object and holder has a distinct final token (its root noun), so root-noun
alignment is unambiguous inside any generated game.
"""
from __future__ import annotations

from dataclasses import dataclass, field

# holder phrase -> kind
HOLDERS = {
    "shoe cabinet": "container",
    "wardrobe": "container",
    "dresser": "container",
    "dishwasher": "container",
    "refrigerator": "container",
    "laundry basket": "container",
    "trash can": "container",
    "toolbox": "container",
    "cutlery drawer": "container",
    "bathroom vanity": "container",
    "coat rack": "supporter",
    "bookshelf": "supporter",
    "dining table": "supporter",
    "kitchen counter": "supporter",
    "bed": "supporter",
    "sofa": "supporter",
    "desk": "supporter",
    "nightstand": "supporter",
    "stove": "supporter",
    "towel rail": "supporter",
}

PAIRS = (
    ("golf shoe", "shoe cabinet"),
    ("moccasin", "shoe cabinet"),
    ("sneaker", "shoe cabinet"),
    ("sweater", "wardrobe"),
    ("dress", "wardrobe"),
    ("jacket", "wardrobe"),
    ("sock", "dresser"),
    ("scarf", "dresser"),
    ("undershirt", "dresser"),
    ("dinner plate", "dishwasher"),
    ("wine glass", "dishwasher"),
    ("coffee mug", "dishwasher"),
    ("milk carton", "refrigerator"),
    ("cheddar cheese", "refrigerator"),
    ("yogurt", "refrigerator"),
    ("pillowcase", "laundry basket"),
    ("washcloth", "laundry basket"),
    ("pajamas", "laundry basket"),
    ("banana peel", "trash can"),
    ("candy wrapper", "trash can"),
    ("paper tissue", "trash can"),
    ("hammer", "toolbox"),
    ("screwdriver", "toolbox"),
    ("wrench", "toolbox"),
    ("fork", "cutlery drawer"),
    ("teaspoon", "cutlery drawer"),
    ("butter knife", "cutlery drawer"),
    ("toothbrush", "bathroom vanity"),
    ("toothpaste", "bathroom vanity"),
    ("hairbrush", "bathroom vanity"),
    ("raincoat", "coat rack"),
    ("overcoat", "coat rack"),
    ("hat", "coat rack"),
    ("novel", "bookshelf"),
    ("dictionary", "bookshelf"),
    ("atlas", "bookshelf"),
    ("placemat", "dining table"),
    ("napkin", "dining table"),
    ("candle", "dining table"),
    ("toaster", "kitchen counter"),
    ("blender", "kitchen counter"),
    ("cutting board", "kitchen counter"),
    ("pillow", "bed"),
    ("blanket", "bed"),
    ("duvet", "bed"),
    ("cushion", "sofa"),
    ("tv remote", "sofa"),
    ("throw rug", "sofa"),
    ("laptop", "desk"),
    ("stapler", "desk"),
    ("notebook", "desk"),
    ("alarm clock", "nightstand"),
    ("reading lamp", "nightstand"),
    ("eyeglasses", "nightstand"),
    ("frying pan", "stove"),
    ("kettle", "stove"),
    ("saucepan", "stove"),
    ("bath towel", "towel rail"),
    ("bathrobe", "towel rail"),
    ("hand mitt", "towel rail"),
)

ADJECTIVES = (
    "brown", "blue", "red", "green", "white", "black", "old", "clean",
    "small", "large", "striped", "wooden", "dirty", "shiny",
)

ROOM_NAMES = ("bedroom", "kitchen", "bathroom", "living room", "hallway", "laundry room")


def root_of(phrase: str) -> str:
    return phrase.strip().split()[-1]


@dataclass(frozen=True)
class EntityVocabulary:
    """Object/holder pairs with a train vs held-out partition of the objects."""

    pairs: tuple[tuple[str, str], ...]
    holder_kinds: dict[str, str]
    held_out: frozenset[str] = field(default_factory=frozenset)
    adjectives: tuple[str, ...] = ADJECTIVES

    def __post_init__(self):
        roots = [root_of(o) for o, _ in self.pairs] + [root_of(h) for h in self.holder_kinds]
        if len(set(roots)) != len(roots):
            raise ValueError("vocabulary root nouns must be unique")
        for o, h in self.pairs:
            if h not in self.holder_kinds:
                raise ValueError(f"holder {h!r} of {o!r} has no kind")
            if " and " in f" {o} " or "," in o:
                raise ValueError(f"object phrase {o!r} clashes with list syntax")

    @property
    def objects(self) -> list[str]:
        return [o for o, _ in self.pairs]

    @property
    def train_objects(self) -> list[str]:
        return [o for o in self.objects if o not in self.held_out]

    @property
    def held_out_objects(self) -> list[str]:
        return [o for o in self.objects if o in self.held_out]

    @property
    def holders(self) -> list[str]:
        return list(self.holder_kinds)

    def home(self, obj: str) -> str:
        for o, h in self.pairs:
            if o == obj:
                return h
        raise KeyError(obj)

    def kind(self, holder: str) -> str:
        return self.holder_kinds[holder]

    @classmethod
    def from_pairs(cls, pairs, holder_kinds, held_out_fraction=0.25):
        pairs = tuple((o, h) for o, h in pairs)
        stride = round(1 / held_out_fraction) if held_out_fraction > 0 else 0
        held = frozenset(o for i, (o, _) in enumerate(pairs) if stride and i % stride == stride - 1)
        return cls(pairs=pairs, holder_kinds=dict(holder_kinds), held_out=held)


def default_vocabulary() -> EntityVocabulary:
    """The shipped 60-pair vocabulary; every 4th object is held out."""
    return EntityVocabulary.from_pairs(PAIRS, HOLDERS, held_out_fraction=0.25)
