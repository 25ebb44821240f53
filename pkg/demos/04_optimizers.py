# coding: utf-8

# # L-BFGS and gradient descent
#
# minimize() takes a function returning (value, gradient) and an optional
# observer that sees the start point and every accepted iterate.

import numpy as np

from sfib import OptimizerConfig, minimize


def rosenbrock(x):
    a, b = x
    return ((1 - a) ** 2 + 100 * (b - a * a) ** 2,
            np.array([-2 * (1 - a) - 400 * a * (b - a * a), 200 * (b - a * a)]))


trace = []
x, reason, iterations = minimize(rosenbrock, np.array([-1.2, 1.0]), observer=trace.append)
print(f"L-BFGS: {x} after {iterations} iterations ({reason})")
print("objective never increases:", all(b.objective <= a.objective for a, b in zip(trace, trace[1:])))

# On a strictly convex quadratic, L-BFGS with an exact line search stops in about d steps.

rng = np.random.default_rng(3)
Q, _ = np.linalg.qr(rng.standard_normal((10, 10)))
A = Q @ np.diag(np.geomspace(1, 100, 10)) @ Q.T
c = rng.standard_normal(10)
_, reason, iterations = minimize(lambda v: (0.5 * v @ A @ v - c @ v, A @ v - c), np.zeros(10),
                                 OptimizerConfig(gradient_tolerance=1e-8, relative_objective_tolerance=0.0))
print(f"10-D quadratic: {iterations} iterations ({reason})")

# Fixed-step gradient descent is much slower on the same problem.

cfg = OptimizerConfig(method="gd", step_size=0.01, max_iterations=2000)
_, reason, iterations = minimize(lambda v: (0.5 * v @ A @ v - c @ v, A @ v - c), np.zeros(10), cfg)
print(f"gradient descent: {iterations} iterations ({reason})")
