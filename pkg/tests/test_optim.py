import numpy as np
import pytest

from sfib.errors import ConfigError, InvalidInputError, NumericalError
from sfib.optim import OptimizerConfig, TerminationReason, minimize, wolfe_line_search
from sfib.sf_core import init_weights, sf_objective_and_gradient


def rosenbrock(x):
    a, b = x
    value = (1 - a) ** 2 + 100 * (b - a * a) ** 2
    grad = np.array([-2 * (1 - a) - 400 * a * (b - a * a), 200 * (b - a * a)])
    return value, grad


def random_quadratic(d, seed, cond=50.0):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    A = Q @ np.diag(np.geomspace(1.0, cond, d)) @ Q.T
    A = 0.5 * (A + A.T)
    b = rng.standard_normal(d)

    def fn(x):
        return 0.5 * x @ A @ x - b @ x, A @ x - b

    return fn, np.linalg.solve(A, b)


class Recorder:
    def __init__(self):
        self.events = []

    def __call__(self, event):
        self.events.append(event)

    @property
    def objectives(self):
        return np.array([e.objective for e in self.events])


def test_shifted_sphere():
    c = np.array([1.0, 2.0, 3.0])
    fn = lambda x: (0.5 * np.sum((x - c) ** 2), x - c)
    x, reason, its = minimize(fn, np.array([10.0, -4.0, 0.5]))
    np.testing.assert_allclose(x, c, atol=1e-8)
    assert its <= 5
    assert reason == TerminationReason.GRADIENT_CONVERGED


@pytest.mark.parametrize("method", ["lbfgs"])
def test_rosenbrock(method):
    rec = Recorder()
    x, reason, its = minimize(rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(method=method), rec)
    assert np.max(np.abs(x - 1)) < 1e-5
    assert its <= 200
    assert np.all(np.diff(rec.objectives) <= 0)


@pytest.mark.parametrize("d", range(1, 11))
@pytest.mark.parametrize("seed", range(3))
def test_quadratic_finite_termination(d, seed):
    fn, _ = random_quadratic(d, seed)
    cfg = OptimizerConfig(gradient_tolerance=1e-8, relative_objective_tolerance=0.0)
    rec = Recorder()
    x, reason, its = minimize(fn, np.random.default_rng(seed).standard_normal(d), cfg, rec)
    assert reason == TerminationReason.GRADIENT_CONVERGED
    assert its <= d + 2
    assert rec.events[-1].gradient_infnorm < 1e-8


def test_observer_contract():
    fn, _ = random_quadratic(5, 1)
    rec = Recorder()
    _, _, its = minimize(fn, np.ones(5), OptimizerConfig(), rec)
    assert [e.iteration for e in rec.events] == list(range(its + 1))
    assert np.all(np.diff(rec.objectives) <= 0)


def test_determinism():
    runs = []
    for _ in range(2):
        rec = Recorder()
        minimize(rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(), rec)
        runs.append(np.array([e.parameters for e in rec.events]))
    np.testing.assert_array_equal(*runs)


def test_max_iterations():
    _, reason, its = minimize(rosenbrock, np.array([-1.2, 1.0]), OptimizerConfig(max_iterations=3))
    assert reason == TerminationReason.MAX_ITERATIONS and its == 3


def test_gradient_descent():
    fn, xstar = random_quadratic(4, 0, cond=5.0)
    rec = Recorder()
    cfg = OptimizerConfig(method="gd", step_size=0.1, max_iterations=2000,
                          gradient_tolerance=1e-6, relative_objective_tolerance=0.0)
    x, reason, _ = minimize(fn, np.zeros(4), cfg, rec)
    assert reason == TerminationReason.GRADIENT_CONVERGED
    np.testing.assert_allclose(x, xstar, atol=1e-5)
    assert np.all(np.diff(rec.objectives) <= 0)


def test_nonfinite_objective():
    fn = lambda x: (np.nan, x)
    with pytest.raises(NumericalError):
        minimize(fn, np.ones(2))


def test_config_validation():
    with pytest.raises(ConfigError):
        OptimizerConfig(method="newton")
    with pytest.raises(ConfigError):
        OptimizerConfig(wolfe_c1=0.9, wolfe_c2=0.1)
    with pytest.raises(ConfigError):
        OptimizerConfig(max_iterations=0)


class TestLineSearch:
    def _check_wolfe(self, fn, x, d, alpha, c1=1e-4, c2=0.9):
        f0, g0 = fn(x)
        fa, ga = fn(x + alpha * d)
        assert fa <= f0 + c1 * alpha * (g0 @ d)
        assert abs(ga @ d) <= c2 * abs(g0 @ d)

    def test_square(self):
        fn = lambda x: (float(x @ x), 2 * x)
        x, d = np.array([1.0]), np.array([-1.0])
        alpha = wolfe_line_search(fn, x, d, *fn(x))
        self._check_wolfe(fn, x, d, alpha)
        assert fn(x + alpha * d)[0] == pytest.approx(0.0)

    def test_quartic(self):
        fn = lambda x: (float(np.sum(x ** 4)), 4 * x ** 3)
        x, d = np.array([1.0]), np.array([-1.0])
        self._check_wolfe(fn, x, d, wolfe_line_search(fn, x, d, *fn(x)))

    def test_needs_bracketing(self):
        fn = lambda x: (float(np.sum(x ** 4)), 4 * x ** 3)
        x, d = np.array([1.0]), np.array([-1.0])
        for alpha0 in (1e-3, 0.9, 5.0):
            self._check_wolfe(fn, x, d, wolfe_line_search(fn, x, d, *fn(x), alpha0=alpha0))

    def test_rosenbrock_direction(self):
        x = np.array([-1.2, 1.0])
        f, g = rosenbrock(x)
        self._check_wolfe(rosenbrock, x, -g, wolfe_line_search(rosenbrock, x, -g, f, g, alpha0=1.0))

    def test_ascent_direction_rejected(self):
        fn = lambda x: (float(x @ x), 2 * x)
        x = np.array([1.0])
        with pytest.raises(InvalidInputError):
            wolfe_line_search(fn, x, np.array([1.0]), *fn(x))


def test_sf_objective_monotone():
    rng = np.random.default_rng(0)
    X = 0.5 * rng.standard_normal((2, 900))
    W0 = init_weights(2, 2, 0)

    def fn(w):
        v, g = sf_objective_and_gradient(w.reshape(2, 2), X)
        return v, g.ravel()

    rec = Recorder()
    minimize(fn, W0.ravel(), OptimizerConfig(), rec)
    assert len(rec.events) > 1
    assert np.all(np.diff(rec.objectives) <= 0)
