"""Plug-in (binning) estimators of entropy, mutual information and KL divergence.

Continuous samples are discretized into equal-width bins per dimension; each
sample's column of bin indices becomes one symbol (a tuple), and all
quantities are computed from the empirical symbol frequencies. Logarithms are
base 2 throughout, so every quantity is in bits.
"""

from collections import Counter
from dataclasses import dataclass
from math import log2

import numpy as np

from .errors import AbsoluteContinuityError, ConfigError, DimensionError

DEFAULT_BINS = 30
_RANGE_PAD = 1e-12


@dataclass(frozen=True)
class BinSpec:
    lower: np.ndarray
    upper: np.ndarray
    bin_count: int = DEFAULT_BINS

    def __post_init__(self):
        if self.bin_count < 2:
            raise ConfigError(f"bin_count must be >= 2, got {self.bin_count}")
        if np.any(np.asarray(self.upper) <= np.asarray(self.lower)):
            raise ConfigError("every upper bound must exceed its lower bound")

    @property
    def dims(self):
        return len(self.lower)

    def edges(self, dim):
        return np.linspace(self.lower[dim], self.upper[dim], self.bin_count + 1)


def make_bin_spec(data, bin_count=DEFAULT_BINS, fixed_range=None):
    """Bin ranges for a ``dims x samples`` matrix.

    With ``fixed_range=(low, high)`` every dimension uses that range. Otherwise
    each dimension spans its observed [min, max], with the top widened by 1e-12
    so the maximum lands inside the last bin (constant dimensions get
    ``[v, v + 1e-12]``).
    """
    if bin_count < 2:
        raise ConfigError(f"bin_count must be >= 2, got {bin_count}")
    data = np.atleast_2d(np.asarray(data, dtype=float))
    d = data.shape[0]
    if fixed_range is not None:
        low, high = fixed_range
        return BinSpec(np.full(d, float(low)), np.full(d, float(high)), int(bin_count))
    lower = data.min(axis=1)
    upper = data.max(axis=1) + _RANGE_PAD
    return BinSpec(lower, upper, int(bin_count))


def discretize(data, spec):
    """Equal-width bin indices, right-open intervals, last bin closed.

    Values outside the range are clamped into the edge bins.
    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if data.shape[0] != spec.dims:
        raise DimensionError(
            f"data has {data.shape[0]} dimensions, bin spec has {spec.dims}"
        )
    lo = np.asarray(spec.lower)[:, None]
    width = (np.asarray(spec.upper) - np.asarray(spec.lower))[:, None]
    idx = np.floor(spec.bin_count * (data - lo) / width)
    return np.clip(idx, 0, spec.bin_count - 1).astype(np.int64)


def _keys(binned):
    binned = np.atleast_2d(np.asarray(binned))
    return [tuple(int(v) for v in col) for col in binned.T]


class DiscreteDistribution:
    """Probability mass over hashable symbols; zero-mass symbols are not stored."""

    __slots__ = ("_p",)

    def __init__(self, probs):
        p = {k: float(v) for k, v in dict(probs).items() if v > 0}
        total = sum(p.values())
        if not p or abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {total}")
        self._p = p

    @classmethod
    def from_counts(cls, counts):
        total = sum(counts.values())
        return cls({k: c / total for k, c in counts.items()})

    @classmethod
    def uniform(cls, symbols):
        symbols = list(symbols)
        return cls({s: 1.0 / len(symbols) for s in symbols})

    @property
    def support(self):
        return tuple(self._p)

    @property
    def probabilities(self):
        return np.array(list(self._p.values()))

    def __getitem__(self, key):
        return self._p.get(key, 0.0)

    def __contains__(self, key):
        return key in self._p

    def __len__(self):
        return len(self._p)

    def items(self):
        return self._p.items()

    def __repr__(self):
        return f"DiscreteDistribution({self._p!r})"


@dataclass(frozen=True)
class JointCounts:
    counts: dict
    total: int

    def marginal_a(self):
        m = Counter()
        for (a, _), c in self.counts.items():
            m[a] += c
        return m

    def marginal_b(self):
        m = Counter()
        for (_, b), c in self.counts.items():
            m[b] += c
        return m

    def swapped(self):
        return JointCounts({(b, a): c for (a, b), c in self.counts.items()}, self.total)


def empirical_distribution(binned):
    """Empirical distribution of the columns of a binned matrix."""
    keys = _keys(binned)
    if not keys:
        raise DimensionError("need at least one sample")
    return DiscreteDistribution.from_counts(Counter(keys))


def _entropy_from_counts(counts, total):
    h = 0.0
    for c in counts:
        p = c / total
        h -= p * log2(p)
    return max(h, 0.0)


def entropy(p):
    """Shannon entropy in bits."""
    h = 0.0
    for _, q in p.items():
        h -= q * log2(q)
    return max(h, 0.0)


def joint_counts(a, b):
    """Tally co-occurring (key_a, key_b) symbol pairs, sample by sample."""
    ka, kb = _keys(a), _keys(b)
    if len(ka) != len(kb):
        raise DimensionError(f"sample counts differ: {len(ka)} vs {len(kb)}")
    return JointCounts(dict(Counter(zip(ka, kb))), len(ka))


def mutual_information(j):
    """``H(A) + H(B) - H(A, B)`` in bits, clamped at 0 and at min(H(A), H(B))."""
    n = j.total
    ha = _entropy_from_counts(j.marginal_a().values(), n)
    hb = _entropy_from_counts(j.marginal_b().values(), n)
    hab = _entropy_from_counts(j.counts.values(), n)
    mi = ha + hb - hab
    return min(max(mi, 0.0), ha, hb)


def kl_divergence(p, q):
    """``sum p log2(p / q)`` over the support of p.

    ``q`` may be a DiscreteDistribution or any callable returning the mass
    of a symbol (handy for reference distributions too large to enumerate).
    """
    qf = q if callable(q) else q.__getitem__
    d = 0.0
    for key, pk in p.items():
        qk = qf(key)
        if qk <= 0:
            raise AbsoluteContinuityError(f"q has no mass on symbol {key!r}")
        d += pk * log2(pk / qk)
    return max(d, 0.0)


def kl_joint_vs_product(j):
    """KL divergence of the empirical joint from the product of its marginals."""
    n = j.total
    ma, mb = j.marginal_a(), j.marginal_b()
    d = 0.0
    for (a, b), c in j.counts.items():
        d += (c / n) * log2(c * n / (ma[a] * mb[b]))
    return max(d, 0.0)


def fdl_objective_terms(x_binned, t_binned, t_bin_count, t_dims):
    """Terms of the feature-distribution-learning objective.

    Returns
    -------
    mi_term : float
        KL(p(X,T) || p(X)p(T)), i.e. I[X;T].
    kl_uniform_term : float
        KL(p(T) || uniform over ``t_bin_count ** t_dims`` cells)
        ``= t_dims * log2(t_bin_count) - H[T]``.
    entropy_term : float
        H[T].
    """
    j = joint_counts(x_binned, t_binned)
    mi_term = kl_joint_vs_product(j)
    entropy_term = entropy(empirical_distribution(t_binned))
    kl_uniform_term = max(t_dims * log2(t_bin_count) - entropy_term, 0.0)
    return mi_term, kl_uniform_term, entropy_term


def information_plane_point(x, t, bin_count=DEFAULT_BINS, x_spec=None, t_range=(0.0, 1.0)):
    """Estimate ``(I[X;T], H[T])`` from continuous ``dims x samples`` matrices.

    ``x`` is binned with ``x_spec`` (observed range when omitted), ``t`` over
    ``t_range`` for every dimension (observed range when ``t_range`` is None).
    """
    if x_spec is None:
        x_spec = make_bin_spec(x, bin_count)
    xb = discretize(x, x_spec)
    tb = discretize(t, make_bin_spec(t, bin_count, t_range))
    mi = mutual_information(joint_counts(xb, tb))
    return mi, entropy(empirical_distribution(tb))
