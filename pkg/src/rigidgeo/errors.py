"""Exception types shared across the package."""


class RigidgeoError(Exception):
    """Base class for all package-specific errors."""


class CapExceeded(RigidgeoError):
    """Circuit enumeration found more circuits than the configured cap."""


class ScaleExceeded(RigidgeoError):
    """Input is larger than the desk-scale bounds the algorithms support."""


class NotA2Separation(RigidgeoError):
    """The given vertex pair / side does not describe a 2-separation."""


class DimensionTooSmall(RigidgeoError):
    """Vertex count is below the minimum the requested test assumes."""


class NotLocallyRigid(RigidgeoError):
    """Operation requires a generically locally rigid graph."""


class DeficientSpan(RigidgeoError):
    """Configuration does not affinely span the ambient space."""


class PreconditionFailed(RigidgeoError):
    """A rank/flex precondition of the requested construction fails."""


class NonGenericInput(RigidgeoError):
    """Input values collide and fail the genericity proxy."""


class ShapeMismatch(RigidgeoError):
    """Dimensions or counts of the inputs are inconsistent."""
