"""Exact text-to-facts parser for the simulator's sentence grammar.

Location sentences become unary ``be-located-at`` facts (the holder argument is
dropped), inventory lines become ``carry``, exits ``direction`` and opened
lidded containers ``open``. All other grammatical sentences carry no facts.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import ActionCommand, SymbolicFact, fact


class ParseError(ValueError):
    pass


_PHRASE = r"[a-z][a-z ]*?"
_LIST = r"(?:an? [a-z ]+?)(?:(?:, | and )an? [a-z ]+?)*"

# (pattern, handler); the handler maps the match to facts
_SENTENCES = [
    (rf"You are in the {_PHRASE}\.", None),
    (rf"You see (?P<list>{_LIST})\.", None),
    (rf"There is (?P<list>{_LIST}) (?:on|in) the {_PHRASE}\.", "located"),
    (rf"The {_PHRASE} is empty\.", None),
    (r"The room is empty\.", None),
    (rf"The (?P<h>{_PHRASE}) is open\.", "open"),
    (rf"The {_PHRASE} is closed\.", None),
    (r"There is an exit to the (?P<d>[a-z]+)\.", "exit"),
    (r"There are exits to the (?P<dl>[a-z, ]+)\.", "exits"),
    (rf"You are carrying: (?P<list>{_LIST})\.", "carry"),
    (r"You are carrying nothing\.", None),
    # feedback
    (r"Nothing happens\.", None),
    (r"You go [a-z]+\.", None),
    (rf"You take the {_PHRASE}(?: from the {_PHRASE})?\.", None),
    (rf"You put the {_PHRASE} on the {_PHRASE}\.", None),
    (rf"You insert the {_PHRASE} into the {_PHRASE}\.", None),
    (rf"You open the {_PHRASE}\.", None),
    (rf"You see nothing special about the {_PHRASE}\.", None),
    (r"You look around\.", None),
    (r"You check your belongings\.", None),
    (r"Your score has gone up by one point\.", None),
]
_COMPILED = [(re.compile(p), h) for p, h in _SENTENCES]
_SPLIT = re.compile(r"(?<=\.)\s+")


def split_list(text: str) -> list[str]:
    """'a brown golf shoe and a blue moccasin' -> ['brown golf shoe', 'blue moccasin']."""
    items = re.split(r", | and ", text)
    out = []
    for item in items:
        item = item.strip()
        for art in ("a ", "an "):
            if item.startswith(art):
                item = item[len(art):]
                break
        out.append(item)
    return out


def parse_observation(text: str) -> set[SymbolicFact]:
    facts: set[SymbolicFact] = set()
    text = text.strip()
    if not text:
        return facts
    for sentence in _SPLIT.split(text):
        for pattern, handler in _COMPILED:
            m = pattern.fullmatch(sentence)
            if m:
                break
        else:
            raise ParseError(f"sentence outside the grammar: {sentence!r}")
        if handler == "located":
            facts |= {fact("be-located-at", x) for x in split_list(m["list"])}
        elif handler == "carry":
            facts |= {fact("carry", x) for x in split_list(m["list"])}
        elif handler == "open":
            facts.add(fact("open", m["h"]))
        elif handler == "exit":
            facts.add(fact("direction", m["d"]))
        elif handler == "exits":
            facts |= {fact("direction", d) for d in re.split(r", | and ", m["dl"])}
    return facts


_ACTIONS = [
    (re.compile(r"go ([a-z]+)"), "go"),
    (re.compile(r"take (.+) from (.+)"), "take"),
    (re.compile(r"take (.+)"), "take"),
    (re.compile(r"put (.+) on (.+)"), "put"),
    (re.compile(r"insert (.+) into (.+)"), "insert"),
    (re.compile(r"open (.+)"), "open"),
    (re.compile(r"examine (.+)"), "examine"),
    (re.compile(r"look"), "look"),
    (re.compile(r"inventory"), "inventory"),
]


def parse_action(command: str) -> ActionCommand:
    command = " ".join(command.strip().split())
    for pattern, verb in _ACTIONS:
        m = pattern.fullmatch(command)
        if m:
            return ActionCommand(verb, tuple(g.strip() for g in m.groups()))
    raise ParseError(f"unknown command {command!r}")


@dataclass(frozen=True)
class NoiseConfig:
    p_drop: float = 0.0
    p_swap: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("p_drop", "p_swap"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")

    @property
    def active(self) -> bool:
        return self.p_drop > 0 or self.p_swap > 0


def apply_noise(
    facts: Iterable[SymbolicFact],
    cfg: NoiseConfig,
    rng: np.random.Generator | None = None,
    vocabulary: Sequence[str] | None = None,
) -> set[SymbolicFact]:
    """Drop each fact with ``p_drop``; swap each surviving argument with ``p_swap``.

    Swapped arguments are drawn from ``vocabulary`` (default: all arguments seen
    in ``facts``). Facts are visited in sorted order so a seeded generator
    gives the same result for the same input set.
    """
    facts = sorted(facts)
    if not cfg.active:
        return set(facts)
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    pool = sorted(vocabulary) if vocabulary is not None else sorted({a for f in facts for a in f.args})
    out = set()
    for f in facts:
        if rng.random() < cfg.p_drop:
            continue
        args = list(f.args)
        for i in range(len(args)):
            if pool and rng.random() < cfg.p_swap:
                args[i] = pool[int(rng.integers(len(pool)))]
        out.add(SymbolicFact(f.predicate, tuple(args), f.confidence))
    return out
