"""Unconstrained minimizers with a per-iteration observer.

Two methods are provided: limited-memory BFGS (two-loop recursion) with a
strong Wolfe line search, and fixed-step batch gradient descent. Both call
``observer`` once for the starting point and once per accepted iterate, never
for line-search trial points.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, InvalidInputError, LineSearchError, NumericalError

MAX_LINE_SEARCH_EVALS = 50


class TerminationReason(str, Enum):
    GRADIENT_CONVERGED = "gradient_converged"
    OBJECTIVE_CONVERGED = "objective_converged"
    MAX_ITERATIONS = "max_iterations"
    LINE_SEARCH_FAILED = "line_search_failed"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "lbfgs"
    max_iterations: int = 200
    gradient_tolerance: float = 1e-5
    relative_objective_tolerance: float = 2.22e-9
    memory: int = 10
    step_size: float = 1e-2
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9

    def __post_init__(self):
        if self.method not in ("lbfgs", "gd"):
            raise ConfigError(f"unknown optimizer method {self.method!r}; use 'lbfgs' or 'gd'")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if not 0 < self.wolfe_c1 < self.wolfe_c2 < 1:
            raise ConfigError("need 0 < wolfe_c1 < wolfe_c2 < 1")
        if self.memory < 1:
            raise ConfigError("memory must be >= 1")
        if not self.step_size > 0:
            raise ConfigError("step_size must be positive")
        if self.gradient_tolerance < 0 or self.relative_objective_tolerance < 0:
            raise ConfigError("tolerances must be nonnegative")


@dataclass(frozen=True)
class IterationEvent:
    iteration: int
    parameters: np.ndarray
    objective: float
    gradient_infnorm: float


def _evaluate(fn, x, iteration):
    f, g = fn(x)
    f = float(f)
    g = np.asarray(g, dtype=float).ravel()
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise NumericalError("objective or gradient is not finite", iteration)
    return f, g


def _cubic_min(a, fa, da, b, fb, db):
    """Minimizer of the cubic interpolating (f, f') at a and b, or None."""
    d1 = da + db - 3 * (fa - fb) / (a - b)
    rad = d1 * d1 - da * db
    if rad < 0:
        return None
    d2 = np.copysign(np.sqrt(rad), b - a)
    denom = db - da + 2 * d2
    if denom == 0:
        return None
    return b - (b - a) * (db + d2 - d1) / denom


def _strong_wolfe(fn, x, d, f0, g0, c1, c2, alpha0, iteration=None):
    """Strong Wolfe bracketing + zoom; returns ``(alpha, f, g)`` at the step."""
    dphi0 = float(g0 @ d)
    if not dphi0 < 0:
        raise InvalidInputError(f"not a descent direction (g.d = {dphi0})")
    evals = 0

    def phi(alpha):
        nonlocal evals
        evals += 1
        f, g = _evaluate(fn, x + alpha * d, iteration)
        return f, g, float(g @ d)

    def sufficient(a, fa, da):
        # Armijo, or its derivative form once the decrease is below rounding
        # (approximate Wolfe); both keep the objective from increasing.
        if fa <= f0 + c1 * a * dphi0:
            return True
        return fa <= f0 and da <= (2 * c1 - 1) * dphi0

    def zoom(lo, f_lo, dlo, g_lo, hi, f_hi, dhi):
        while evals < MAX_LINE_SEARCH_EVALS:
            width = hi - lo
            if abs(width) <= 1e-16 * max(abs(lo), abs(hi), 1e-300):
                break
            a = _cubic_min(lo, f_lo, dlo, hi, f_hi, dhi)
            left, right = min(lo, hi), max(lo, hi)
            margin = 0.1 * (right - left)
            if a is None or not (left + margin <= a <= right - margin):
                a = 0.5 * (lo + hi)
            fa, ga, da = phi(a)
            if not sufficient(a, fa, da) or fa >= f_lo:
                hi, f_hi, dhi = a, fa, da
            else:
                if abs(da) <= -c2 * dphi0:
                    return _refine(a, fa, ga, da)
                if da * (hi - lo) >= 0:
                    hi, f_hi, dhi = lo, f_lo, dlo
                lo, f_lo, dlo, g_lo = a, fa, da, ga
        raise LineSearchError("zoom phase did not find a strong Wolfe step")

    def _refine(a, fa, ga, da):
        # One secant step on phi' toward the line minimum. It uses only
        # directional derivatives, so it stays exact on quadratics even when
        # objective differences are lost to rounding; this is what gives
        # L-BFGS its finite termination there.
        if da == 0 or da <= dphi0 or evals >= MAX_LINE_SEARCH_EVALS:
            return a, fa, ga
        a_star = a * dphi0 / (dphi0 - da)
        if not (0 < a_star <= 100 * a) or abs(a_star - a) <= 1e-12 * a:
            return a, fa, ga
        try:
            fs, gs, ds = phi(a_star)
        except NumericalError:
            return a, fa, ga
        if sufficient(a_star, fs, ds) and abs(ds) <= -c2 * dphi0 and abs(ds) < abs(da):
            return a_star, fs, gs
        return a, fa, ga

    a_prev, f_prev, d_prev, g_prev = 0.0, f0, dphi0, g0
    a = alpha0
    while evals < MAX_LINE_SEARCH_EVALS:
        fa, ga, da = phi(a)
        if not sufficient(a, fa, da) or (a_prev > 0 and fa >= f_prev):
            return zoom(a_prev, f_prev, d_prev, g_prev, a, fa, da)
        if abs(da) <= -c2 * dphi0:
            return _refine(a, fa, ga, da)
        if da >= 0:
            return zoom(a, fa, da, ga, a_prev, f_prev, d_prev)
        a_prev, f_prev, d_prev, g_prev = a, fa, da, ga
        a = 2.0 * a
    raise LineSearchError("bracketing phase exhausted its evaluation budget")


def wolfe_line_search(objective_fn, x, direction, f0, g0, c1=1e-4, c2=0.9, alpha0=1.0):
    """Step length satisfying the strong Wolfe conditions along ``direction``.

    Uses at most 50 evaluations of ``objective_fn`` (which returns
    ``(value, gradient)``). Raises ``InvalidInputError`` for a non-descent
    direction and ``LineSearchError`` when no acceptable step is found.
    """
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    g0 = np.asarray(g0, dtype=float)
    return _strong_wolfe(objective_fn, x, direction, float(f0), g0, c1, c2, alpha0)[0]


def _two_loop(g, s_hist, y_hist):
    q = g.copy()
    alphas = []
    for s, y in zip(reversed(s_hist), reversed(y_hist)):
        rho = 1.0 / (y @ s)
        a = rho * (s @ q)
        q -= a * y
        alphas.append((rho, a))
    s, y = s_hist[-1], y_hist[-1]
    q *= (s @ y) / (y @ y)
    for (s, y), (rho, a) in zip(zip(s_hist, y_hist), reversed(alphas)):
        b = rho * (y @ q)
        q += (a - b) * s
    return -q


def minimize(objective_fn, x0, config=None, observer=None):
    """Minimize ``objective_fn`` (vector -> (value, gradient)) from ``x0``.

    Returns
    -------
    x : ndarray
        Final (last accepted) iterate.
    reason : TerminationReason
    iterations : int
        Number of accepted iterates after the starting point; the observer
        has received ``iterations + 1`` events.
    """
    config = config or OptimizerConfig()
    x = np.array(x0, dtype=float).ravel()
    f, g = _evaluate(objective_fn, x, 0)

    def notify(k):
        if observer is not None:
            observer(IterationEvent(k, x.copy(), f, float(np.max(np.abs(g)))))

    notify(0)
    if np.max(np.abs(g)) < config.gradient_tolerance:
        return x, TerminationReason.GRADIENT_CONVERGED, 0

    s_hist, y_hist = [], []
    k = 0
    while True:
        if config.method == "gd":
            x_new = x - config.step_size * g
            f_new, g_new = _evaluate(objective_fn, x_new, k + 1)
        else:
            if s_hist:
                d = _two_loop(g, s_hist, y_hist)
                alpha0 = 1.0
                if not g @ d < 0:
                    s_hist.clear()
                    y_hist.clear()
            if not s_hist:
                d = -g
                alpha0 = 1.0 / np.linalg.norm(g)
            try:
                alpha, f_new, g_new = _strong_wolfe(
                    objective_fn, x, d, f, g, config.wolfe_c1, config.wolfe_c2,
                    alpha0, iteration=k + 1,
                )
            except LineSearchError:
                return x, TerminationReason.LINE_SEARCH_FAILED, k
            x_new = x + alpha * d
            s, y = x_new - x, g_new - g
            if s @ y > 1e-10 * (y @ y):
                s_hist.append(s)
                y_hist.append(y)
                if len(s_hist) > config.memory:
                    s_hist.pop(0)
                    y_hist.pop(0)

        f_old = f
        x, f, g = x_new, f_new, g_new
        k += 1
        notify(k)

        if np.max(np.abs(g)) < config.gradient_tolerance:
            return x, TerminationReason.GRADIENT_CONVERGED, k
        rel = (f_old - f) / max(abs(f_old), abs(f), 1.0)
        if rel < config.relative_objective_tolerance:
            return x, TerminationReason.OBJECTIVE_CONVERGED, k
        if k >= config.max_iterations:
            return x, TerminationReason.MAX_ITERATIONS, k
