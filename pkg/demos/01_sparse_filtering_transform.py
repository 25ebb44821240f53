# coding: utf-8

# # The sparse filtering transform
#
# Sparse filtering maps data X (d x N, one sample per column) to features
# T = col_normalize(row_normalize(soft_abs(W @ X))). Every column of T has unit
# length, so the sum of T is small exactly when each sample activates few features.

import numpy as np

from sfib import init_weights, sf_forward, sf_objective, sf_objective_and_gradient

rng = np.random.default_rng(0)
X = rng.standard_normal((4, 200))
W = init_weights(3, 4, seed=0)

T = sf_forward(W, X)
print("T shape:", T.shape)
print("column norms (should all be 1):", np.linalg.norm(T, axis=0)[:5])
print("entries in [0, 1]:", T.min() >= 0 and T.max() <= 1)

# The objective is bounded between N (one active feature per sample)
# and N * sqrt(k) (all features equal).

value = sf_objective(W, X)
print(f"objective {value:.3f}, bounds [{X.shape[1]}, {X.shape[1] * np.sqrt(3):.3f}]")

# The gradient is hand-derived; compare one entry to a central difference.

_, grad = sf_objective_and_gradient(W, X)
h = 1e-6
E = np.zeros_like(W)
E[1, 2] = h
fd = (sf_objective(W + E, X) - sf_objective(W - E, X)) / (2 * h)
print(f"dF/dW[1,2]: analytic {grad[1, 2]:.8f}  finite difference {fd:.8f}")

# Rescaling a row of W leaves the objective unchanged.

W2 = W.copy()
W2[0] *= 5.0
print("row-scale invariance:", np.isclose(sf_objective(W2, X), value))
