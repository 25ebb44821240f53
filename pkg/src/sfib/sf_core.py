"""Sparse filtering transform, l1 objective and analytical gradient.

Data follow the ``d x N`` convention (columns are samples) and weights are
``k x d``, so the representation is ``T = col_normalize(row_normalize(|W X|))``
with shape ``k x N``.
"""

import numpy as np

from .errors import DegenerateError, DimensionError, InvalidInputError

DEFAULT_EPSILON = 1e-8
_MIN_NORM = 1e-300


def _as_matrix(m, name):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return m


def soft_abs(m, epsilon=DEFAULT_EPSILON):
    """Smooth absolute value ``sqrt(m**2 + epsilon)``, elementwise."""
    if not epsilon > 0:
        raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("soft_abs input contains non-finite entries")
    return np.sqrt(m * m + epsilon)


def _l2_norms(m, axis):
    norms = np.sqrt(np.sum(m * m, axis=axis))
    if np.any(norms < _MIN_NORM):
        which = "row" if axis == 1 else "column"
        raise DegenerateError(f"{which} with zero l2 norm cannot be normalized")
    return norms


def row_normalize(m):
    """Divide each row by its l2 norm."""
    m = np.asarray(m, dtype=float)
    return m / _l2_norms(m, axis=1)[:, None]


def col_normalize(m):
    """Divide each column by its l2 norm."""
    m = np.asarray(m, dtype=float)
    return m / _l2_norms(m, axis=0)[None, :]


def _check_shapes(W, X):
    W = _as_matrix(W, "W")
    X = _as_matrix(X, "X")
    if W.shape[1] != X.shape[0]:
        raise DimensionError(
            f"W has {W.shape[1]} columns but X has {X.shape[0]} rows"
        )
    return W, X


def sf_forward(W, X, epsilon=DEFAULT_EPSILON):
    """Map data ``X`` (d x N) to the sparse filtering representation (k x N).

    Every output column has unit l2 norm and all entries lie in [0, 1].
    """
    W, X = _check_shapes(W, X)
    return col_normalize(row_normalize(soft_abs(W @ X, epsilon)))


def sf_objective_and_gradient(W, X, epsilon=DEFAULT_EPSILON):
    """l1 sparsity of the representation and its gradient with respect to W.

    Parameters
    ----------
    W : ndarray, shape (k, d)
    X : ndarray, shape (d, N)
    epsilon : float
        Smoothing constant of the absolute value.

    Returns
    -------
    value : float
        Sum of all entries of ``sf_forward(W, X)``.
    grad : ndarray, shape (k, d)
        Exact derivative of ``value``, backpropagated by hand through the
        column normalization, the row normalization and ``soft_abs``.
    """
    W, X = _check_shapes(W, X)
    F = W @ X
    S = soft_abs(F, epsilon)
    r = _l2_norms(S, axis=1)
    R = S / r[:, None]
    c = _l2_norms(R, axis=0)
    T = R / c[None, :]
    value = float(T.sum())

    # d/dR of sum(T): column-wise projection (G - T <T, G>) / c with G = 1
    G = np.ones_like(T)
    dR = (G - T * np.sum(T * G, axis=0)[None, :]) / c[None, :]
    # row-wise projection through the row normalization
    dS = (dR - R * np.sum(R * dR, axis=1)[:, None]) / r[:, None]
    dF = dS * (F / S)
    return value, dF @ X.T


def sf_objective(W, X, epsilon=DEFAULT_EPSILON):
    return sf_objective_and_gradient(W, X, epsilon)[0]


def init_weights(k, d, seed):
    """Standard-normal ``k x d`` weights from a seeded generator.

    ``seed`` may be an int, a ``numpy.random.SeedSequence`` or a ``Generator``.
    """
    if k < 1 or d < 1:
        raise DimensionError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.standard_normal((k, d))
