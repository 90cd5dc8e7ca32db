"""Exception hierarchy shared by all modules."""


class FusionError(Exception):
    """Base class for errors raised by this package."""


class InputError(FusionError, ValueError):
    """Malformed input: non-finite entries, wrong shape, bad file."""


class DimensionError(InputError):
    """Operands with incompatible dimensions."""


class ParameterError(FusionError, ValueError):
    """Scalar or matrix parameter outside its admissible range."""


class NotPositiveDefiniteError(FusionError, ValueError):
    """A matrix required to be positive (semi-)definite is not."""


class RankDeficiencyError(NotPositiveDefiniteError):
    """A matrix that must be inverted is numerically singular."""
