"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input failed a structural precondition."""


class UnsupportedDimsError(ValidationError):
    """The operation does not support the given subsystem dimensions."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its budget without converging."""
