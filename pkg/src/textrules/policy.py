"""Executing Horn rules as a policy over admissible commands."""
from __future__ import annotations

import logging
from collections import Counter
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import lnn
from .core import ActionCommand, SymbolicFact
from .rules import HornRule, Literal, RuleFile

log = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def root_noun(phrase: str) -> str:
    """Head noun of a template noun phrase: its final token."""
    tokens = phrase.split()
    if not tokens:
        raise ValueError("empty entity phrase")
    return tokens[-1]


class FactIndex:
    """Facts keyed by predicate and root nouns of their arguments."""

    def __init__(self, facts: Iterable[SymbolicFact]):
        self.keys = {(f.predicate, tuple(root_noun(a) for a in f.args)) for f in facts}

    def holds(self, predicate: str, args: tuple[str, ...]) -> bool:
        return (predicate, tuple(root_noun(a) for a in args)) in self.keys


def _index(facts) -> FactIndex:
    return facts if isinstance(facts, FactIndex) else FactIndex(facts)


def match(literal: Literal, assignment: Mapping[str, str], facts) -> float:
    """1.0 if a fact aligns with the bound literal by root noun, else 0.0; negation as failure."""
    try:
        args = tuple(assignment[v] for v in literal.variables)
    except KeyError as e:
        raise ValueError(f"unbound variable {e.args[0]!r} in {literal.predicate}") from None
    value = 1.0 if _index(facts).holds(literal.predicate, args) else 0.0
    return 1.0 - value if literal.negated else value


def score_rule(rule: HornRule, action: ActionCommand, facts, weighted: bool = False) -> float:
    if len(rule.variables) != action.arity or rule.predicate != action.verb:
        raise ValueError(f"cannot apply {rule.head_text()} to {action.render()!r}")
    idx = _index(facts)
    assignment = dict(zip(rule.variables, action.args))
    if not rule.body:
        return 1.0
    truths = np.array([match(l, assignment, idx) for l in rule.body])
    negated = np.array([l.negated for l in rule.body])
    if not weighted:
        return float(truths.min())
    # negated literals act crisply; the positive ones go through the weighted neuron
    if np.any(truths[negated] < 1.0):
        return 0.0
    pos = [l for l in rule.body if not l.negated]
    if not pos:
        return 1.0
    w = np.array([1.0 if l.weight is None else l.weight for l in pos])
    neuron = lnn.ConjunctionNeuron(w, 1.0 if rule.bias is None else rule.bias)
    return float(lnn.forward(neuron, truths[~negated]))


def _lookup(rules, key):
    if isinstance(rules, RuleFile):
        return rules.get(*key)
    return rules.get(key)


def score_action(rules, action: ActionCommand, facts, weighted: bool = False) -> float:
    """Likelihood of one grounded action under its predicate's rule (0 if no rule)."""
    if isinstance(rules, HornRule):
        return score_rule(rules, action, facts, weighted)
    rule = _lookup(rules, action.signature)
    if rule is None:
        others = [r for r in (rules.rules if isinstance(rules, RuleFile) else rules.values())
                  if r.predicate == action.verb]
        if others:
            log.debug("no %s/%d rule; %s scores 0", action.verb, action.arity, action.render())
        return 0.0
    return score_rule(rule, action, facts, weighted)


def action_distribution(
    rules,
    admissible: list[ActionCommand],
    facts,
    allowed: Iterable[str] | None = None,
    weighted: bool = False,
) -> np.ndarray:
    """Probabilities over ``admissible``; predicates outside ``allowed`` get 0.

    Falls back to uniform over the allowed actions when every likelihood is 0,
    and to uniform over all of ``admissible`` if none is allowed.
    """
    if not admissible:
        raise ValueError("no admissible actions")
    idx = _index(facts)
    allowed = None if allowed is None else set(allowed)
    mask = np.array([allowed is None or a.verb in allowed for a in admissible], dtype=float)
    if not mask.any():
        mask[:] = 1.0
    scores = np.array([score_action(rules, a, idx, weighted) if m else 0.0
                       for a, m in zip(admissible, mask)])
    total = scores.sum()
    if total <= 0:
        return mask / mask.sum()
    return scores / total


TIE_BREAKS = ("count", "lex")


class UniformPolicy:
    """Uniform choice over the allowed admissible actions."""

    def __init__(self, allowed: Iterable[str] | None = None):
        self.allowed = None if allowed is None else frozenset(allowed)

    def probabilities(self, facts, admissible):
        mask = np.array([self.allowed is None or a.verb in self.allowed for a in admissible], float)
        if not mask.any():
            mask[:] = 1.0
        return mask / mask.sum()

    def choose(self, facts, admissible, rng, counts=None) -> ActionCommand:
        p = self.probabilities(facts, admissible)
        return admissible[int(rng.choice(len(admissible), p=p))]


class RulePolicy:
    """Rule-set policy: categorical sampling, or greedy argmax.

    Greedy ties go to the command executed fewest times so far in the episode,
    then to the lexicographically smallest command.
    """

    def __init__(self, rules, allowed=None, greedy: bool = True, weighted: bool = False,
                 tie_break: str = "count"):
        if tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
        self.rules = rules
        self.allowed = None if allowed is None else frozenset(allowed)
        self.greedy = greedy
        self.weighted = weighted
        self.tie_break = tie_break

    def probabilities(self, facts, admissible):
        return action_distribution(self.rules, admissible, facts, self.allowed, self.weighted)

    def choose(self, facts, admissible, rng=None, counts: Counter | None = None) -> ActionCommand:
        p = self.probabilities(facts, admissible)
        if not self.greedy:
            return admissible[int(rng.choice(len(admissible), p=p))]
        counts = counts or Counter()
        best = p.max()
        tied = [a for a, q in zip(admissible, p) if q >= best - 1e-12]
        if self.tie_break == "lex":
            return min(tied, key=ActionCommand.render)
        return min(tied, key=lambda a: (counts[a.render()], a.render()))
