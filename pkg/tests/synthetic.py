"""Planted-rule transition buffers for learner tests."""
import numpy as np

from textrules.core import ActionCommand, fact
from textrules.learner import Transition

OBJECTS = ["red sock", "old hat", "blue mug"]
HOLDERS = ["dresser", "coat rack"]
PREDICATES = {"carry", "atlocation", "be-located-at"}


def planted_put(n, seed, p_drop=0.0, p_unrewarded=0.3):
    """put(x,y) transitions rewarded exactly when atlocation(x,y) holds.

    carry and be-located-at facts are coin flips, so only atlocation(x,y)
    is true on every rewarded choice. ``p_drop`` removes atlocation facts
    after the choice is made.
    """
    rng = np.random.default_rng(seed)
    adm = tuple(ActionCommand("put", (o, h)) for o in OBJECTS for h in HOLDERS)
    out = []
    for i in range(n):
        goal = {o: HOLDERS[rng.integers(2)] for o in OBJECTS}
        facts = {fact("atlocation", o, goal[o]) for o in OBJECTS}
        facts |= {fact("carry", o) for o in OBJECTS if rng.random() < 0.5}
        facts |= {fact("be-located-at", o) for o in OBJECTS if rng.random() < 0.5}
        if rng.random() < p_unrewarded:
            action, r = adm[rng.integers(len(adm))], 0.0
        else:
            o = OBJECTS[rng.integers(3)]
            action, r = ActionCommand("put", (o, goal[o])), 1.0
        if p_drop:
            facts = {f for f in sorted(facts) if f.predicate != "atlocation" or rng.random() >= p_drop}
        out.append(Transition(frozenset(facts), adm, action, r, r, i, 0))
    return out
