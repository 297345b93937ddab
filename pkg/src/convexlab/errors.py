"""Exception types shared across the library."""


class ConvexLabError(Exception):
    """Base class for all library errors."""


class ConvexityViolation(ConvexLabError):
    """Input data does not describe a convex body."""


class OriginNotInterior(ConvexLabError):
    """Operation requires the origin strictly inside the body."""


class SingularMap(ConvexLabError):
    """Affine map has a singular linear part."""


class NonConvex(ConvexLabError):
    """Curvature function is not strictly positive."""


class SolvabilityViolation(ConvexLabError):
    """Prescribed curvature data has a nonzero first harmonic."""


class NonConvexSolution(ConvexLabError):
    """Curvature-problem solution failed convexity validation."""


class SpectralTailError(ConvexLabError):
    """Grid too coarse for the data: spectral tail energy above the cap."""


class NoConvergence(ConvexLabError):
    """Iterative solver exhausted its iteration budget."""


class NotSymmetric(ConvexLabError):
    """Operation requires an origin-symmetric body."""


class NotJohnNormalizable(ConvexLabError):
    """John normalization did not produce the expected sandwich."""


class InsufficientData(ConvexLabError):
    """Not enough usable records for a fit."""
