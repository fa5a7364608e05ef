"""Exception hierarchy.

Every error raised by the package derives from ``MixmultError``.  The CLI
maps ``InputError`` subclasses to exit status 2 and ``ResourceError``
subclasses to exit status 3.
"""


class MixmultError(Exception):
    pass


class InputError(MixmultError, ValueError):
    """A precondition on the caller's data is violated."""


class DimensionMismatch(InputError):
    pass


class NotMPrimary(InputError):
    pass


class UnitIdealError(InputError):
    """Operation undefined on the unit ideal (e.g. dimension of the zero module)."""


class ZeroModuleError(InputError):
    pass


class UndefinedMultiplicity(InputError):
    """I is contained in the radical of Ann M."""


class NotMinimalPrime(InputError):
    pass


class InvalidWindow(InputError):
    pass


class ResourceError(MixmultError, RuntimeError):
    """A configured search bound was exhausted."""


class InfiniteLength(ResourceError):
    """No finiteness certificate within t_max."""


class StabilizationError(ResourceError):
    pass


class ProfileTooShort(ResourceError):
    pass


class OverflowGuard(ResourceError):
    """Exponent or count exceeds the exact fixed-width range."""


class HeightCondition(InputError):
    """ht (I + Ann M)/Ann M = 0 where positivity is required."""


class DegenerateProfile(InputError):
    """A length profile with no positive leading difference."""
