"""Exceptions raised by the verification lab."""


class LabError(Exception):
    """Base class for every error the lab raises on purpose."""


class ConfigError(LabError, ValueError):
    """A setting from the environment could not be parsed."""


class PreconditionError(LabError, ValueError):
    """An operation was called outside its domain (bad n, k, shapes, ...)."""


class MatrixSizeError(LabError):
    """A matrix would exceed the configured entry cap."""

    def __init__(self, rows, cols, cap):
        self.rows = rows
        self.cols = cols
        self.cap = cap
        super().__init__(
            f"matrix of {rows} x {cols} = {rows * cols} entries exceeds the cap of {cap}"
        )


class Singular(LabError):
    """Exact solve hit a singular system."""


class RankDeficient(LabError):
    """Matrix does not have full column rank."""

    def __init__(self, rank, cols):
        self.rank = rank
        self.cols = cols
        super().__init__(f"rank {rank} < {cols} columns")


class NonConvergence(LabError):
    """An iterative float method ran out of iterations."""


class IterationCap(LabError):
    """The simplex method exhausted its pivot budget."""


class IllConditionedWarning(UserWarning):
    """Float normal equations were badly conditioned; intervals were widened."""
