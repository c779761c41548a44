"""Exception hierarchy.

The CLI maps each family onto an exit code, so library callers can rely on
the same classification.
"""


class DiversityError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(DiversityError, ValueError):
    """Point sets, vectors or kernels disagree on the ambient dimension."""


class DomainError(DiversityError, ValueError):
    """Input outside the supported domain (caps, negative scalings, ...)."""


class CapExceededError(DomainError):
    """Ground set too large for explicit subset enumeration."""


class PreconditionError(DiversityError, ValueError):
    """A mathematical precondition of a construction does not hold."""


class NotExtremalError(PreconditionError):
    """Support atoms or kernel normals are affinely dependent."""


class UnboundedSliceError(PreconditionError):
    """The origin is not in the relative interior of the normals' hull."""


class InsufficientDirectionsError(PreconditionError):
    """Zonotope directions do not span the affine hull of the point set."""


class SpecParseError(DiversityError, ValueError):
    """A JSON document does not match the expected schema."""
