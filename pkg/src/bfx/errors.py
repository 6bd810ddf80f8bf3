"""Exception types shared across the package.

The CLI maps these onto exit codes: DomainError -> 3, NumericalError -> 4.
"""


class DomainError(ValueError):
    """A parameter lies outside the mathematical validity region of a formula."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""


class ToleranceNotMet(NumericalError):
    """Adaptive integration exhausted its subdivision budget."""


class NonConvergence(NumericalError):
    """A series hit its term cap before the truncation tolerance."""


class IllConditioned(NumericalError):
    """Two large terms cancelled beyond the trustworthy number of digits."""


class NonFiniteSample(NumericalError):
    """A Monte Carlo sampler produced inf/nan."""

    def __init__(self, message: str, path_index: int | None = None):
        super().__init__(message)
        self.path_index = path_index
