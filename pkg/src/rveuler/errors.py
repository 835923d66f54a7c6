"""Exception hierarchy shared by the library and the CLI."""


class RvEulerError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(RvEulerError, ValueError):
    """An argument violates an operation's precondition."""


class DegenerateGeometryError(InvalidInputError):
    """Geometry is too degenerate to define a frame (parallel r and v, pole, ...)."""


class DomainError(RvEulerError, ArithmeticError):
    """A state lies outside the domain on which the equations are defined."""


class SingularityError(DomainError):
    """A coordinate singularity of the spherical formulation was hit."""


class ConfigError(RvEulerError):
    """Scenario configuration is malformed. ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class PropagationError(RvEulerError):
    """Derivative evaluation failed part way through an integration."""

    def __init__(self, time: float, cause: Exception):
        super().__init__(f"integration aborted at t = {time:.9g} s: {cause}")
        self.time = time
        self.cause = cause
