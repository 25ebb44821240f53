"""Instrumented training runs and their aggregation.

At every accepted optimizer iterate the current weights are applied to the
evaluation split and the binned I[X;T] and H[T] are recorded together with
the objective and the Frobenius norm of the weight change.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .datagen import make_simulation_data
from .errors import ConfigError, NumericalError, RunError
from .infotheory import (
    DEFAULT_BINS,
    discretize,
    empirical_distribution,
    entropy,
    joint_counts,
    make_bin_spec,
    mutual_information,
)
from .optim import OptimizerConfig, TerminationReason, minimize
from .sf_core import DEFAULT_EPSILON, init_weights, sf_forward, sf_objective_and_gradient

T_RANGE = (0.0, 1.0)


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    objective: float
    mi_xt: float
    entropy_t: float
    weight_delta: float


@dataclass
class RunTrajectory:
    sim_id: object
    repetition_index: int
    seed: int
    records: list
    termination: TerminationReason
    final_weights: np.ndarray = field(default=None, compare=False, repr=False)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])

    def __len__(self):
        return len(self.records)


@dataclass(frozen=True)
class AggregateTrajectory:
    length: int
    mean_mi: np.ndarray
    mean_entropy: np.ndarray
    mean_objective: np.ndarray
    sim_id: object = None


@dataclass(frozen=True)
class SimulationConfig:
    sim_id: int
    repetitions: int = 10
    base_seed: int = 42
    bin_count: int = DEFAULT_BINS
    epsilon: float = DEFAULT_EPSILON
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    eval_split: str = "test"

    def __post_init__(self):
        if self.sim_id not in (1, 2, 3, 4):
            raise ConfigError(f"sim_id must be one of 1-4, got {self.sim_id!r}")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.bin_count < 2:
            raise ConfigError("bin_count must be >= 2")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.eval_split not in ("test", "train"):
            raise ConfigError(f"eval_split must be 'test' or 'train', got {self.eval_split!r}")


def run_seed(base_seed, sim_id, repetition):
    """Seed of one run, mixed from the batch seed with ``SeedSequence`` spawn keys.

    The returned value is a 64-bit integer (reported in trajectories); the run
    itself uses the full SeedSequence so repetitions never collide.
    """
    ss = np.random.SeedSequence(int(base_seed), spawn_key=(int(sim_id), int(repetition)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def train_sf(X_train, X_eval, W0, bin_count=DEFAULT_BINS, epsilon=DEFAULT_EPSILON,
             optimizer=None):
    """Fit SF weights on ``X_train`` while tracking the information plane on ``X_eval``.

    Returns ``(W_final, records, termination)``.
    """
    W0 = np.asarray(W0, dtype=float)
    k, d = W0.shape
    x_binned = discretize(X_eval, make_bin_spec(X_eval, bin_count))
    t_spec = make_bin_spec(np.zeros((k, 1)), bin_count, T_RANGE)
    records = []
    prev = [W0.ravel()]

    def fn(w):
        value, grad = sf_objective_and_gradient(w.reshape(k, d), X_train, epsilon)
        return value, grad.ravel()

    def observer(event):
        T = sf_forward(event.parameters.reshape(k, d), X_eval, epsilon)
        t_binned = discretize(T, t_spec)
        delta = float(np.linalg.norm(event.parameters - prev[0]))
        prev[0] = event.parameters
        records.append(IterationRecord(
            iteration=event.iteration,
            objective=event.objective,
            mi_xt=mutual_information(joint_counts(x_binned, t_binned)),
            entropy_t=entropy(empirical_distribution(t_binned)),
            weight_delta=delta,
        ))

    w, reason, _ = minimize(fn, W0.ravel(), optimizer or OptimizerConfig(), observer)
    return w.reshape(k, d), records, reason


def _run_inputs(config, repetition):
    seed = run_seed(config.base_seed, config.sim_id, repetition)
    data_seed, weight_seed = np.random.SeedSequence(seed).spawn(2)
    data, d, k = make_simulation_data(config.sim_id, data_seed)
    return seed, data, init_weights(k, d, weight_seed)


def run_data(config, repetition):
    """``(Dataset, evaluation matrix)`` used by ``run_single`` for this repetition."""
    _, data, _ = _run_inputs(config, repetition)
    return data, data.test if config.eval_split == "test" else data.train


def run_single(config, repetition):
    """Generate data, train one SF module and record its trajectory."""
    seed, data, W0 = _run_inputs(config, repetition)
    X_eval = data.test if config.eval_split == "test" else data.train
    try:
        W, records, reason = train_sf(
            data.train, X_eval, W0, config.bin_count, config.epsilon, config.optimizer
        )
    except NumericalError as exc:
        raise RunError(str(exc), config.sim_id, repetition) from exc
    return RunTrajectory(config.sim_id, repetition, seed, records, reason, W)


def _run_one(args):
    return run_single(*args)


def run_batch(config, workers=1):
    """Run all repetitions of a simulation; ``workers > 1`` uses a process pool.

    Results are ordered by repetition index and do not depend on ``workers``.
    """
    jobs = [(config, r) for r in range(config.repetitions)]
    if workers <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def aggregate(runs):
    """Per-iteration means across runs, truncated to the shortest run."""
    runs = list(runs)
    if not runs:
        raise ConfigError("cannot aggregate an empty set of runs")
    n = min(len(r.records) for r in runs)

    def mean(name):
        return np.mean([r.column(name)[:n] for r in runs], axis=0)

    sims = {r.sim_id for r in runs}
    return AggregateTrajectory(
        length=n,
        mean_mi=mean("mi_xt"),
        mean_entropy=mean("entropy_t"),
        mean_objective=mean("objective"),
        sim_id=sims.pop() if len(sims) == 1 else None,
    )


def with_overrides(config, **changes):
    """Copy of ``config`` with the given non-None fields replaced."""
    return replace(config, **{k: v for k, v in changes.items() if v is not None})
