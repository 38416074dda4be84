"""Learning first-order action rules for text cleanup games.

A template simulator produces observations; a parser turns them into
symbolic facts; one weighted conjunction neuron per action predicate is
trained from discounted returns and read back as a Horn rule that the
policy engine executes.
"""
from .core import ActionCommand, SymbolicFact, fact
from .lnn import ConjunctionNeuron
from .rules import HornRule, Literal, RuleFile, apply_edit, parse_rules, serialize_rules
from .world import GameSpec, TextGame, generate_games

__all__ = [
    "ActionCommand", "SymbolicFact", "fact", "ConjunctionNeuron", "HornRule", "Literal",
    "RuleFile", "apply_edit", "parse_rules", "serialize_rules", "GameSpec", "TextGame",
    "generate_games",
]
