"""The weighted Lukasiewicz conjunction: evaluation, gradients, constraints, fitting."""
import numpy as np

from textrules import lnn

n = lnn.ConjunctionNeuron(np.array([0.5, 0.5]), bias=1.0)
print("f(0.8, 0.6) =", lnn.forward(n, [0.8, 0.6]))
print("grad:", lnn.grad(n, [0.8, 0.6]))

# truth-table residuals: all-high, each single-low corner, all-low
print("residuals beta=1 alpha=0.7:", lnn.check_constraints(lnn.ConjunctionNeuron(np.ones(2), 1.0, 0.7)))

# fit crisp AND data from a poor start
X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], float)
fitted = lnn.fit(lnn.ConjunctionNeuron(np.array([0.3, 0.3]), 0.5), X, X.min(axis=1), epochs=5000)
print("fitted weights", fitted.weights.round(3), "bias", round(fitted.bias, 3))
print("outputs", lnn.forward(fitted, X).round(3))
print("max residual", lnn.check_constraints(fitted).max())
