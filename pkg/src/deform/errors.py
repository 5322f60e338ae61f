"""Exception hierarchy for the deformation engine.

Validators raise subclasses of DeformError naming the offending basis
elements, so a failed structure check always points at a concrete pair or
triple that can be re-checked by hand.
"""


class DeformError(Exception):
    """Base class for all engine errors."""


class ShapeError(DeformError):
    """Matrix or graded-component shapes are inconsistent."""


class DegreeMismatch(DeformError):
    """An element was supplied in the wrong (co)chain degree."""


class NotCommutative(DeformError):
    """Graded commutativity x*y = (-1)^{|x||y|} y*x fails for a basis pair."""


class NotAssociative(DeformError):
    """Associativity fails for a basis triple."""


class NotLeibniz(DeformError):
    """The differential is not a derivation for a basis pair."""


class NotNilpotent(DeformError):
    """The augmentation ideal is not nilpotent (within the probed bound)."""


class AugmentationNotDg(DeformError):
    """The augmentation is not a dg ring map onto the ground field."""


class NotMaurerCartan(DeformError):
    """A purported Maurer-Cartan element has nonzero residual."""


class NotClosed(DeformError):
    """A morphism required to be closed has nonzero differential."""


class RingNotSquareZero(DeformError):
    """An operation requiring m^2 = 0 was called on a deeper ring."""


class TruncationTooSmall(DeformError):
    """A polynomial-form product exceeded the declared t-degree bound."""


class CutoffTooSmall(DeformError):
    """An arity cutoff is too small for the requested computation."""


class ValidationFailed(DeformError):
    """A problem file referenced or declared an invalid object."""


class ResourceLimit(DeformError):
    """An exact-linear-algebra object exceeded the configured memory cap."""
