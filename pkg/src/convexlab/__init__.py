"""Planar convex-geometry lab.

Bodies, polar duality, Santalo points, volume products, Minkowski's
problem, Banach-Mazur distance, Steiner symmetrization, and the sweep
machinery that measures stability of the planar volume-product bound.
"""

__version__ = "0.1.0"

from .bodies import (
    AffineMap,
    AngleGrid,
    Body,
    BodyStats,
    FourierBody,
    Polygon,
    SupportVector,
    SurfaceMeasure,
    affine_image,
    area,
    disk,
    ellipse_body,
    is_origin_symmetric,
    mixed_area,
    polar,
    polygon_from_points,
    rectangle_body,
    regular_polygon,
    square_body,
    stats,
    steiner_point,
    support_eval,
    support_values,
    surface_measure,
    to_polygon,
    translate,
)
from .chain import ChainCheck, ChainReport, verify_proof_chain
from .errors import (
    ConvexityViolation,
    ConvexLabError,
    InsufficientData,
    NoConvergence,
    NonConvex,
    NonConvexSolution,
    NotJohnNormalizable,
    NotSymmetric,
    OriginNotInterior,
    SingularMap,
    SolvabilityViolation,
    SpectralTailError,
)
from .families import FamilySpec, generate_family, parse_family_spec
from .fileio import read_body, read_records, write_body, write_records
from .metrics import (
    BmEstimate,
    EllipseParams,
    JohnResult,
    asymmetry,
    bm_distance_disk,
    bm_distance_pair,
    john_ellipse,
    john_position,
)
from .minkowski import (
    LutwakBound,
    PinchBounds,
    lambda_body,
    lutwak_gap,
    mollify,
    pinch_bounds,
    solve_minkowski,
)
from .santalo import (
    BLASCHKE_SANTALO_BOUND,
    SantaloResult,
    groemer_gap,
    polar_area,
    santalo_deficit,
    santalo_point,
    volume_product,
)
from .steiner import (
    FlowHistory,
    meyer_pajor_gap,
    steiner_symmetral,
    symmetrization_flow,
)
from .sweep import (
    DeficitRecord,
    ExponentFit,
    SweepResult,
    exponent_fit,
    stability_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
