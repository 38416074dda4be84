"""Shared value types: symbolic facts and action commands."""
from __future__ import annotations

from dataclasses import dataclass

# closed predicate inventory: name -> arity
STATE_PREDICATES = {
    "be-located-at": 1,
    "carry": 1,
    "direction": 1,
    "open": 1,
    "atlocation": 2,
}

# verb -> allowed arities
ACTION_ARITIES = {
    "go": (1,),
    "take": (1, 2),
    "put": (2,),
    "insert": (2,),
    "open": (1,),
    "examine": (1,),
    "look": (0,),
    "inventory": (0,),
}


@dataclass(frozen=True, order=True)
class SymbolicFact:
    predicate: str
    args: tuple[str, ...]
    confidence: float = 1.0

    def __post_init__(self):
        arity = STATE_PREDICATES.get(self.predicate)
        if arity is None:
            raise ValueError(f"unknown predicate {self.predicate!r}")
        if len(self.args) != arity:
            raise ValueError(f"{self.predicate} takes {arity} argument(s), got {len(self.args)}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")

    def __str__(self):
        return f"{self.predicate}({', '.join(self.args)})"


def fact(predicate: str, *args: str) -> SymbolicFact:
    return SymbolicFact(predicate, tuple(args))


@dataclass(frozen=True, order=True)
class ActionCommand:
    verb: str
    args: tuple[str, ...] = ()

    def __post_init__(self):
        arities = ACTION_ARITIES.get(self.verb)
        if arities is None:
            raise ValueError(f"unknown verb {self.verb!r}")
        if len(self.args) not in arities:
            raise ValueError(f"{self.verb} does not take {len(self.args)} argument(s)")

    @property
    def predicate(self) -> str:
        return self.verb

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.verb, len(self.args))

    def render(self) -> str:
        v, a = self.verb, self.args
        if v == "take" and len(a) == 2:
            return f"take {a[0]} from {a[1]}"
        if v == "put":
            return f"put {a[0]} on {a[1]}"
        if v == "insert":
            return f"insert {a[0]} into {a[1]}"
        return " ".join((v,) + a)

    def __str__(self):
        return self.render()
