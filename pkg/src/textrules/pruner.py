"""Look-ahead pruning of action predicates by counterfactual replay."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import ActionCommand
from .parser import parse_action
from .world import replay


@dataclass(frozen=True)
class PruneEntry:
    predicate: str
    mean_with: float
    mean_without: float
    verdict: str  # pruned | retained


@dataclass
class PruneReport:
    entries: list[PruneEntry] = field(default_factory=list)
    tolerance: float = 0.0
    n_episodes: int = 0

    @property
    def retained(self) -> list[str]:
        return sorted(e.predicate for e in self.entries if e.verdict == "retained")

    @property
    def pruned(self) -> list[str]:
        return sorted(e.predicate for e in self.entries if e.verdict == "pruned")

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "n_episodes": self.n_episodes,
            "entries": [asdict(e) for e in self.entries],
            "retained": self.retained,
            "pruned": self.pruned,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "PruneReport":
        return cls([PruneEntry(**e) for e in d["entries"]], d["tolerance"], d["n_episodes"])


def prune(episodes, actions, tolerance: float = 0.0) -> PruneReport:
    """Replay every episode once per predicate with that predicate's commands removed.

    ``episodes`` holds (spec, command sequence, total reward) triples. A
    predicate is pruned when the mean episodic reward moves by at most
    ``tolerance``. The step cap still applies to the shortened sequence.
    """
    episodes = list(episodes)
    if not episodes:
        raise ValueError("no episodes to replay")
    parsed = [(spec, [a if isinstance(a, ActionCommand) else parse_action(a) for a in seq], r)
              for spec, seq, r in episodes]
    mean_with = float(np.mean([r for _, _, r in parsed]))
    report = PruneReport(tolerance=tolerance, n_episodes=len(parsed))
    for a in sorted(set(actions)):
        rewards = [replay(spec, [c for c in seq if c.verb != a]) for spec, seq, _ in parsed]
        mean_without = float(np.mean(rewards))
        verdict = "pruned" if abs(mean_with - mean_without) <= tolerance else "retained"
        report.entries.append(PruneEntry(a, mean_with, mean_without, verdict))
    return report
