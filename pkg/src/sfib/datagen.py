"""Seeded synthetic data for the four simulations.

All randomness comes from numpy's PCG64 bit generator (``default_rng``);
normal variates use numpy's ziggurat ``standard_normal``. A seed is either an
int or a ``numpy.random.SeedSequence``; independent substreams are obtained
with ``SeedSequence.spawn`` so that, for instance, the train and test splits
never share random numbers.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError, NotPositiveDefiniteError

N_TRAIN = 900
N_TEST = 100
SIM1_SIGMA = 0.5
MEAN_LOW, MEAN_HIGH = -5.0, 5.0
SPD_RIDGE = 0.1

# sim_id -> (input dim, output dim)
SIMULATION_DIMS = {1: (2, 2), 2: (4, 2), 3: (4, 8), 4: (10, 4)}


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def _rng(seed):
    return np.random.default_rng(_seed_sequence(seed))


@dataclass(frozen=True)
class MvnSpec:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.covariance, dtype=float)
        d = mean.shape[0]
        if cov.shape != (d, d):
            raise DimensionError(f"covariance shape {cov.shape} does not match mean length {d}")
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-12):
            raise NotPositiveDefiniteError("covariance is not symmetric")

    def cholesky(self):
        try:
            return np.linalg.cholesky(np.asarray(self.covariance, dtype=float))
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("covariance is not positive definite") from exc


@dataclass(frozen=True)
class Dataset:
    train: np.ndarray
    test: np.ndarray

    @property
    def dim(self):
        return self.train.shape[0]


def sample_isotropic_gaussian(d, sigma, n, seed):
    """``d x n`` matrix of i.i.d. N(0, sigma**2) entries."""
    if d < 1 or n < 1 or not sigma > 0:
        raise ConfigError(f"need d >= 1, n >= 1, sigma > 0 (got {d}, {n}, {sigma})")
    return sigma * _rng(seed).standard_normal((d, n))


def random_spd(d, seed):
    """Random SPD matrix ``M^T M / d + 0.1 I`` with standard normal ``M``."""
    if d < 1:
        raise ConfigError(f"need d >= 1, got {d}")
    M = _rng(seed).standard_normal((d, d))
    S = M.T @ M / d + SPD_RIDGE * np.eye(d)
    return 0.5 * (S + S.T)


def random_mvn_spec(d, seed):
    """Mean ~ U(-5, 5) per entry and a random SPD covariance, on separate substreams."""
    mean_seed, cov_seed = _seed_sequence(seed).spawn(2)
    mean = _rng(mean_seed).uniform(MEAN_LOW, MEAN_HIGH, size=d)
    return MvnSpec(mean, random_spd(d, cov_seed))


def sample_mvn(spec, n, seed):
    """``d x n`` samples ``mean + L z`` with ``L`` the lower Cholesky factor."""
    L = spec.cholesky()
    z = _rng(seed).standard_normal((L.shape[0], n))
    return np.asarray(spec.mean, dtype=float)[:, None] + L @ z


def make_simulation_data(sim_id, seed, n_train=N_TRAIN, n_test=N_TEST):
    """Generate the dataset of one simulation.

    Returns ``(Dataset, input_dim, output_dim)``. Simulations 2-4 draw a
    fresh mean and covariance for every seed.
    """
    if sim_id not in SIMULATION_DIMS:
        raise ConfigError(f"unknown simulation {sim_id!r}; valid ids are 1-4")
    d, k = SIMULATION_DIMS[sim_id]
    spec_seed, train_seed, test_seed = _seed_sequence(seed).spawn(3)
    if sim_id == 1:
        train = sample_isotropic_gaussian(d, SIM1_SIGMA, n_train, train_seed)
        test = sample_isotropic_gaussian(d, SIM1_SIGMA, n_test, test_seed)
    else:
        spec = random_mvn_spec(d, spec_seed)
        train = sample_mvn(spec, n_train, train_seed)
        test = sample_mvn(spec, n_test, test_seed)
    return Dataset(train, test), d, k


def write_samples_csv(path, data):
    """Dump a ``d x N`` matrix as CSV, one sample per line, header ``dim_0,...``."""
    data = np.atleast_2d(np.asarray(data, dtype=float))
    header = ",".join(f"dim_{i}" for i in range(data.shape[0]))
    lines = [header] + [",".join(format(v, ".17g") for v in col) for col in data.T]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_samples_csv(path):
    """Inverse of ``write_samples_csv``; returns a ``d x N`` matrix."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if not rows:
        raise ValueError(f"{path}: no samples")
    if any(len(r) != len(header) for r in rows):
        raise ValueError(f"{path}: ragged rows (expected {len(header)} columns)")
    data = np.array([[float(v) for v in r] for r in rows]).T
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite values")
    return data
