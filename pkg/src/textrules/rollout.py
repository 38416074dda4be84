"""Playing episodes: observation to symbolic state, policy step, transition log."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .core import ActionCommand
from .knowledge import CommonsenseGraph, subgraph_for
from .parser import NoiseConfig, apply_noise, parse_observation
from .world import GameSpec, TextGame

NOISE_SCOPES = ("all", "observation")


@dataclass(frozen=True)
class Perception:
    """How an agent turns observation text into a symbolic state."""

    noise: NoiseConfig = NoiseConfig()
    noise_scope: str = "all"  # all: parsed + commonsense facts; observation: parsed only
    graph: CommonsenseGraph | None = None
    distractors: bool | None = None

    def __post_init__(self):
        if self.noise_scope not in NOISE_SCOPES:
            raise ValueError(f"noise_scope must be one of {NOISE_SCOPES}")

    def knowledge(self, spec: GameSpec) -> frozenset:
        return frozenset(subgraph_for(spec, self.graph, self.distractors))

    def state(self, text: str, kb: frozenset, rng: np.random.Generator) -> frozenset:
        parsed = parse_observation(text)
        if not self.noise.active:
            return frozenset(parsed | kb)
        if self.noise_scope == "observation":
            return frozenset(apply_noise(parsed, self.noise, rng) | kb)
        return frozenset(apply_noise(parsed | kb, self.noise, rng))


@dataclass(frozen=True)
class Step:
    state: frozenset
    admissible: tuple[ActionCommand, ...]
    action: ActionCommand
    reward: int


@dataclass
class Episode:
    spec: GameSpec
    steps: list[Step] = field(default_factory=list)
    reward: int = 0
    done: bool = False

    @property
    def actions(self) -> list[str]:
        return [s.action.render() for s in self.steps]

    @property
    def n_steps(self) -> int:
        return len(self.steps)


def run_episode(
    spec: GameSpec,
    policy,
    rng: np.random.Generator,
    perception: Perception = Perception(),
) -> Episode:
    """Play one episode until the game reports done."""
    game = TextGame(spec)
    obs = game.reset()
    kb = perception.knowledge(spec)
    counts: Counter = Counter()
    ep = Episode(spec)
    while not obs.done:
        state = perception.state(obs.text, kb, rng)
        adm = tuple(obs.admissible)
        action = policy.choose(state, list(adm), rng, counts)
        counts[action.render()] += 1
        obs = game.step(action)
        ep.steps.append(Step(state, adm, action, obs.reward))
        ep.reward += obs.reward
    ep.done = True
    return ep

