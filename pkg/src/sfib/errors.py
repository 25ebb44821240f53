"""Exception hierarchy shared by all modules."""


class SFError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(SFError, ValueError):
    """Input contains non-finite values or otherwise violates a precondition."""


class DimensionError(SFError, ValueError):
    """Array shapes are incompatible."""


class DegenerateError(SFError, ValueError):
    """A row or column has (numerically) zero norm and cannot be normalized."""


class ConfigError(SFError, ValueError):
    """Invalid configuration value."""


class AbsoluteContinuityError(SFError, ValueError):
    """p assigns mass to a symbol where q has none."""


class NotPositiveDefiniteError(SFError, ValueError):
    """Covariance matrix failed Cholesky factorization."""


class NumericalError(SFError, ArithmeticError):
    """Objective or gradient became non-finite during optimization."""

    def __init__(self, message, iteration=None):
        super().__init__(message if iteration is None else f"iteration {iteration}: {message}")
        self.iteration = iteration


class LineSearchError(SFError, RuntimeError):
    """No step satisfying the strong Wolfe conditions was found."""


class RunError(SFError, RuntimeError):
    """A simulation run failed; carries the run context."""

    def __init__(self, message, sim_id=None, repetition=None):
        super().__init__(f"sim {sim_id} repetition {repetition}: {message}")
        self.sim_id = sim_id
        self.repetition = repetition


class ReportIOError(SFError, OSError):
    """Writing a report file failed."""

    def __init__(self, path, cause):
        super().__init__(f"cannot write {path}: {cause}")
        self.path = path
