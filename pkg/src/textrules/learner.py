"""Return-weighted rule learning: one conjunction neuron per action predicate.

For an action predicate ``a`` every candidate literal is a state predicate
applied to the head variables. A state ``s`` and grounding give a 0/1 truth
vector over those literals; the neuron maps it to a likelihood ``L``. Within
one transition the likelihoods of the admissible groundings of ``a`` are
normalized into ``pi``. Training ascends

    J = sum_t g_t * (log pi_t + kappa * log(L_t + eps))

where ``L_t`` belongs to the taken grounding. The second term asks the rule
to fire on rewarded choices and stops the weights from sharpening ``pi`` by
switching on literals that are false everywhere.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from . import lnn
from .core import ActionCommand, STATE_PREDICATES
from .policy import FactIndex, root_noun
from .rollout import Episode, Perception, run_episode
from .rules import HornRule, Literal

log = logging.getLogger(__name__)

HEAD_VARS = ("x", "y")
INIT_SUPPORT = 1.0


@dataclass(frozen=True)
class Transition:
    state: frozenset
    admissible: tuple[ActionCommand, ...]
    action: ActionCommand
    reward: float
    ret: float
    episode: int
    step: int

    def __post_init__(self):
        if self.action not in self.admissible:
            raise ValueError(f"{self.action.render()!r} is not admissible")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 300
    learning_rate: float = 0.5
    kappa: float = 0.0
    eps: float = 1e-3
    init_weight: float = 0.1
    constraint_weight: float = 0.0
    learn_bias: bool = False


@dataclass
class RuleModel:
    predicate: str
    arity: int
    literals: tuple[Literal, ...]
    neuron: lnn.ConjunctionNeuron | None
    trained: bool = False
    flags: list[str] = field(default_factory=list)

    @property
    def key(self) -> tuple[str, int]:
        return (self.predicate, self.arity)

    @property
    def weights(self) -> dict[str, float]:
        if self.neuron is None:
            return {}
        return {str(l): float(w) for l, w in zip(self.literals, self.neuron.weights)}


def candidate_literals(arity: int, predicates, negation: bool = False) -> tuple[Literal, ...]:
    """All arity-compatible literals over the head variables, in a fixed order."""
    head = HEAD_VARS[:arity]
    out = []
    for p in sorted(predicates):
        n = STATE_PREDICATES.get(p)
        if n is None:
            raise ValueError(f"unknown state predicate {p!r}")
        for args in product(head, repeat=n):
            if n == 2 and args[0] == args[1]:
                continue
            out.append(Literal(p, args))
            if negation:
                out.append(Literal(p, args, negated=True))
    return tuple(out)


def new_model(signature: tuple[str, int], predicates, negation: bool = False,
              alpha: float = lnn.DEFAULT_ALPHA) -> RuleModel:
    pred, arity = signature
    lits = candidate_literals(arity, predicates, negation)
    neuron = lnn.ConjunctionNeuron(np.zeros(len(lits)), 1.0, alpha) if lits else None
    return RuleModel(pred, arity, lits, neuron)


# -- buffers --------------------------------------------------------------------

def compute_returns(rewards, gamma: float) -> list[float]:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    out = []
    g = 0.0
    for r in reversed(list(rewards)):
        g = r + gamma * g
        out.append(g)
    return out[::-1]


def episode_transitions(ep: Episode, episode_id: int, gamma: float) -> list[Transition]:
    rets = compute_returns([s.reward for s in ep.steps], gamma)
    return [
        Transition(s.state, s.admissible, s.action, s.reward, g, episode_id, i)
        for i, (s, g) in enumerate(zip(ep.steps, rets))
    ]


def collect(policy, specs, episodes: int, seed: int, gamma: float = 0.9,
            perception: Perception = Perception(), start: int = 0,
            ) -> tuple[list[Transition], list[Episode]]:
    """Play ``episodes`` episodes cycling through ``specs``; returns the buffer and raw episodes.

    Episode ``i`` (counting from ``start``) plays ``specs[i % len(specs)]``
    with its own generator seeded by ``(seed, i)``.
    """
    if episodes <= 0:
        raise ValueError("episodes must be positive")
    if not specs:
        raise ValueError("no games to play")
    buffer, played = [], []
    for i in range(start, start + episodes):
        rng = np.random.default_rng([seed, i])
        ep = run_episode(specs[i % len(specs)], policy, rng, perception)
        played.append(ep)
        buffer += episode_transitions(ep, i, gamma)
    return buffer, played


def extract_templates(buffer) -> tuple[set[str], set[tuple[str, int]]]:
    if not buffer:
        raise ValueError("empty buffer")
    preds = {f.predicate for t in buffer for f in t.state}
    acts = {a.signature for t in buffer for a in t.admissible}
    return preds, acts


def sub_buffer(buffer, signature) -> list[Transition]:
    return [t for t in buffer if t.action.signature == signature]


# -- design matrices --------------------------------------------------------------

@dataclass(frozen=True)
class _Design:
    X: np.ndarray       # (groundings, literals) truth values
    starts: np.ndarray  # first row of each transition
    taken: np.ndarray   # row of the taken grounding
    g: np.ndarray       # return per transition

    @property
    def n(self) -> int:
        return len(self.starts)


def _truths(literals, action: ActionCommand, idx: FactIndex) -> list[float]:
    bind = dict(zip(HEAD_VARS, (root_noun(a) for a in action.args)))
    keys = idx.keys
    row = []
    for lit in literals:
        v = 1.0 if (lit.predicate, tuple(bind[x] for x in lit.variables)) in keys else 0.0
        row.append(1.0 - v if lit.negated else v)
    return row


def build_design(model: RuleModel, transitions, cache: dict | None = None) -> _Design:
    """Truth matrix over every admissible grounding of the model's predicate.

    ``cache`` maps (transition id, literals) to rows; pass the same dict across
    calls on a growing buffer to avoid recomputing old transitions.
    """
    rows, starts, taken, g = [], [], [], []
    for t in transitions:
        key = (id(t), model.literals)
        block = None if cache is None else cache.get(key)
        if block is None:
            idx = FactIndex(t.state)
            block = [(a == t.action, _truths(model.literals, a, idx))
                     for a in t.admissible if a.signature == model.key]
            if cache is not None:
                cache[key] = block
        starts.append(len(rows))
        for is_taken, row in block:
            if is_taken:
                taken.append(len(rows))
            rows.append(row)
        g.append(t.ret)
    X = np.array(rows, dtype=float).reshape(len(rows), len(model.literals))
    return _Design(X, np.array(starts, int), np.array(taken, int), np.array(g, float))


def objective(neuron: lnn.ConjunctionNeuron, d: _Design, kappa: float, eps: float):
    """(J, dJ/dL per grounding row) for the smoothed return-weighted likelihood."""
    L = lnn.forward(neuron, d.X)
    L = np.atleast_1d(L)
    S = np.add.reduceat(L + eps, d.starts)
    Lt = L[d.taken] + eps
    J = float(np.sum(d.g * (np.log(Lt / S) + kappa * np.log(Lt))))
    counts = np.diff(np.append(d.starts, len(L)))
    dL = -np.repeat(d.g / S, counts)
    dL[d.taken] += d.g * (1.0 + kappa) / Lt
    return J, dL


def _lgg_weights(d: _Design, n: int, init_weight: float) -> np.ndarray:
    pos = d.X[d.taken[d.g > 0]]
    if len(pos) == 0:
        return np.full(n, init_weight)
    freq = (d.g[d.g > 0] @ pos) / d.g[d.g > 0].sum()
    w = np.where(freq >= INIT_SUPPORT - 1e-9, 1.0, init_weight)
    w[pos.max(axis=0) <= 0.0] = 0.0
    return w


def lgg_init(model: RuleModel, transitions, init_weight: float = 0.1, cache=None) -> RuleModel:
    """Weight 1 on literals true for every positively rewarded taken grounding.

    Literals never true on such a grounding start at 0, the rest at ``init_weight``.
    """
    if model.neuron is None:
        return model
    w = _lgg_weights(build_design(model, transitions, cache), len(model.literals), init_weight)
    return replace(model, neuron=lnn.ConjunctionNeuron(w, 1.0, model.neuron.alpha))


def _ascend(neuron, d: _Design, cfg: TrainConfig):
    # literals never true on a rewarded choice stay where they are
    if np.any(d.g > 0):
        live = d.X[d.taken[d.g > 0]].max(axis=0) > 0
    else:
        live = np.zeros(d.X.shape[1], bool)
    for _ in range(cfg.epochs):
        _, dL = objective(neuron, d, cfg.kappa, cfg.eps)
        d_bias, d_w, _ = lnn.grad(neuron, d.X, -dL / d.n, one_sided=True)
        d_w = np.where(live, d_w, 0.0)
        if not cfg.learn_bias:
            d_bias = 0.0
        neuron = lnn.update(neuron, (d_bias, d_w), cfg.learning_rate, cfg.constraint_weight)
    return neuron


def _check_sub_buffer(model, transitions):
    if any(t.action.signature != model.key for t in transitions):
        raise ValueError(f"sub-buffer holds actions other than {model.predicate}/{model.arity}")


def train_rule(model: RuleModel, transitions, cfg: TrainConfig = TrainConfig(), cache=None) -> RuleModel:
    """Gradient ascent on the return-weighted objective over this predicate's sub-buffer."""
    _check_sub_buffer(model, transitions)
    if not transitions:
        log.warning("no transitions for %s/%d; model left untrained", *model.key)
        return replace(model, flags=model.flags + ["untrained: empty buffer"])
    if model.neuron is None:
        return replace(model, trained=True)
    neuron = _ascend(model.neuron, build_design(model, transitions, cache), cfg)
    return replace(model, neuron=neuron, trained=True)


def fit_rule(model: RuleModel, transitions, cfg: TrainConfig = TrainConfig(), cache=None) -> RuleModel:
    """Initialize from the rewarded examples, then train."""
    _check_sub_buffer(model, transitions)
    if not transitions or model.neuron is None:
        return train_rule(model, transitions, cfg)
    d = build_design(model, transitions, cache)
    w = _lgg_weights(d, len(model.literals), cfg.init_weight)
    neuron = _ascend(lnn.ConjunctionNeuron(w, 1.0, model.neuron.alpha), d, cfg)
    return replace(model, neuron=neuron, trained=True)


def evaluation_loss(model: RuleModel, transitions, cfg: TrainConfig = TrainConfig(), cache=None) -> float:
    """Negative training objective on ``transitions``, per transition."""
    if model.neuron is None or not transitions:
        return 0.0
    d = build_design(model, transitions, cache)
    J, _ = objective(model.neuron, d, cfg.kappa, cfg.eps)
    return -J / d.n


def train_with_outlier_rejection(
    model: RuleModel,
    transitions,
    predicates,
    k_percent: float = 50.0,
    min_support: float = 0.10,
    cfg: TrainConfig = TrainConfig(),
    cache: dict | None = None,
) -> RuleModel:
    """Train one model per state predicate on its top-k% rewarded subset; keep the best on the full buffer."""
    if not 0 < k_percent <= 100:
        raise ValueError("k_percent must lie in (0, 100]")
    if not transitions:
        return train_rule(model, transitions, cfg)
    _check_sub_buffer(model, transitions)
    best, best_loss = None, np.inf
    for p in sorted(predicates):
        subset = [t for t in transitions if any(f.predicate == p for f in t.state)]
        if len(subset) < min_support * len(transitions) or not subset:
            continue
        order = sorted(range(len(subset)), key=lambda i: (-subset[i].ret, i))
        keep = max(1, int(np.ceil(len(subset) * k_percent / 100.0)))
        chosen = [subset[i] for i in sorted(order[:keep])]
        candidate = fit_rule(model, chosen, cfg, cache)
        loss = evaluation_loss(candidate, transitions, cfg, cache)
        if loss < best_loss:
            best, best_loss = candidate, loss
    if best is None:
        log.warning("all subsets rejected for %s/%d; plain training", *model.key)
        out = fit_rule(model, transitions, cfg, cache)
        return replace(out, flags=out.flags + ["or-fallback"])
    return best


def extract_crisp_rule(model: RuleModel, tau: float = 0.5, digits: int = 4) -> HornRule:
    """Keep literals with weight >= tau, annotated with their rounded weights."""
    head = HEAD_VARS[:model.arity]
    if model.neuron is None:
        return HornRule(model.predicate, head)
    body = tuple(
        replace(lit, weight=round(float(w), digits))
        for lit, w in zip(model.literals, model.neuron.weights)
        if w >= tau
    )
    if not body:
        log.warning("%s/%d: no literal reaches tau=%s; rule is always true", *model.key, tau)
    return HornRule(model.predicate, head, body, bias=round(model.neuron.bias, digits))
