"""Weighted Lukasiewicz conjunction neuron.

    f(x) = clamp(beta - sum_k w_k (1 - x_k), 0, 1)

with nonnegative weights and bias, a noise threshold ``alpha`` splitting [0, 1]
into logical low [0, 1 - alpha] and logical high [alpha, 1], and truth-table
constraints checked at the corners of those regions. Because ``f`` is affine
inside the clamp, corner checks are exact over the whole regions.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

DEFAULT_ALPHA = 0.95


@dataclass(frozen=True)
class ConjunctionNeuron:
    weights: np.ndarray
    bias: float = 1.0
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty vector")
        if not 0.5 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0.5, 1]")
        if np.any(w < 0) or self.bias < 0:
            raise ValueError("weights and bias must be nonnegative")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    @classmethod
    def classical(cls, n_inputs: int, alpha: float = DEFAULT_ALPHA) -> "ConjunctionNeuron":
        """w_k = 1, beta = 1: exact Boolean AND on crisp inputs."""
        return cls(np.ones(n_inputs), 1.0, alpha)

    @property
    def n_inputs(self) -> int:
        return self.weights.size

    def __eq__(self, other):
        if not isinstance(other, ConjunctionNeuron):
            return NotImplemented
        return (self.bias == other.bias and self.alpha == other.alpha
                and np.array_equal(self.weights, other.weights))

    __hash__ = None


def _check_dim(neuron, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (neuron.n_inputs,):
        raise ValueError(f"expected {neuron.n_inputs} inputs, got shape {x.shape}")
    return x


def preactivation(neuron: ConjunctionNeuron, x) -> np.ndarray:
    x = _check_dim(neuron, x)
    return neuron.bias - (1.0 - x) @ neuron.weights


def forward(neuron: ConjunctionNeuron, x):
    """Truth value of the conjunction; ``x`` may carry leading batch axes."""
    out = np.clip(preactivation(neuron, x), 0.0, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def grad(neuron: ConjunctionNeuron, x, upstream=1.0, one_sided: bool = False):
    """(d/dbias, d/dweights, d/dx) of ``upstream * f``.

    Zero wherever f sits on a clamp boundary. With ``one_sided`` a boundary
    point still passes gradient when a descent step on ``upstream * f`` would
    move it back into the interior. With batched ``x`` the parameter gradients
    are summed over the batch and d/dx keeps the batch shape.
    """
    x = _check_dim(neuron, x)
    pre = neuron.bias - (1.0 - x) @ neuron.weights
    live = (pre > 0.0) & (pre < 1.0)
    if one_sided:
        up = np.broadcast_to(upstream, pre.shape)
        live = live | ((pre >= 1.0) & (up > 0)) | ((pre <= 0.0) & (up < 0))
    g = np.where(live, upstream, 0.0)
    d_bias = np.sum(g)
    d_w = -np.tensordot(g, 1.0 - x, axes=np.ndim(g)) if np.ndim(g) else -g * (1.0 - x)
    d_x = np.multiply.outer(g, neuron.weights)
    return float(d_bias), np.asarray(d_w, dtype=float), d_x


def corner_points(n: int, alpha: float, active=None) -> tuple[np.ndarray, np.ndarray]:
    """Corner inputs and their kind (+1 must be high, -1 must be low).

    Rows: all-high, one row per active input set low with the rest high, all-low.
    Inactive inputs are held at 1 so they drop out of the conjunction.
    """
    active = np.ones(n, bool) if active is None else np.asarray(active, bool)
    hi, lo = alpha, 1.0 - alpha
    rows = [np.where(active, hi, 1.0)]
    kinds = [1.0]
    for k in np.flatnonzero(active):
        r = np.ones(n)
        r[k] = lo
        rows.append(r)
        kinds.append(-1.0)
    rows.append(np.where(active, lo, 1.0))
    kinds.append(-1.0)
    return np.array(rows), np.array(kinds)


def check_constraints(neuron: ConjunctionNeuron, active=None) -> np.ndarray:
    """Hinge residuals of the truth-table constraints; all zero iff satisfied."""
    corners, kinds = corner_points(neuron.n_inputs, neuron.alpha, active)
    f = forward(neuron, corners)
    a = neuron.alpha
    return np.where(kinds > 0, np.maximum(0.0, a - f), np.maximum(0.0, f - (1.0 - a)))


def constraint_penalty_grad(neuron: ConjunctionNeuron, active=None) -> tuple[float, np.ndarray]:
    """Gradient of sum(residual^2), using the unclamped corner values.

    The unclamped hinge has the same zero set as the clamped one but keeps a
    gradient where the corner value saturates.
    """
    corners, kinds = corner_points(neuron.n_inputs, neuron.alpha, active)
    pre = preactivation(neuron, corners)
    a = neuron.alpha
    r = np.where(kinds > 0, np.maximum(0.0, a - pre), np.maximum(0.0, pre - (1.0 - a)))
    # d pre/d bias = 1, d pre/d w_k = -(1 - x_k); residual sign flips for high corners
    s = 2.0 * r * np.where(kinds > 0, -1.0, 1.0)
    return float(s.sum()), -(s @ (1.0 - corners))


def update(
    neuron: ConjunctionNeuron,
    grads: tuple[float, np.ndarray],
    learning_rate: float,
    constraint_weight: float = 1.0,
    active=None,
) -> ConjunctionNeuron:
    """One descent step on task loss + ``constraint_weight`` * sum(residual^2).

    ``grads`` is (d loss/d bias, d loss/d weights). Weights and bias are
    projected back onto the nonnegative orthant afterwards.
    """
    if learning_rate <= 0:
        raise ValueError("learning_rate must be positive")
    d_bias, d_w = grads
    d_w = np.asarray(d_w, dtype=float)
    if constraint_weight:
        pb, pw = constraint_penalty_grad(neuron, active)
        d_bias = d_bias + constraint_weight * pb
        d_w = d_w + constraint_weight * pw
    w = np.maximum(neuron.weights - learning_rate * d_w, 0.0)
    b = max(neuron.bias - learning_rate * d_bias, 0.0)
    return replace(neuron, weights=w, bias=b)


def fit(
    neuron: ConjunctionNeuron,
    X,
    y,
    epochs: int = 2000,
    learning_rate: float = 0.1,
    constraint_weight: float = 1.0,
) -> ConjunctionNeuron:
    """Least-squares fit of the neuron to truth-value labels."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    for _ in range(epochs):
        err = forward(neuron, X) - y
        d_bias, d_w, _ = grad(neuron, X, 2.0 * err / len(y))
        neuron = update(neuron, (d_bias, d_w), learning_rate, constraint_weight)
    return neuron
