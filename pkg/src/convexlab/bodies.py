"""Planar convex bodies and their fundamental functionals.

Three interchangeable representations are supported:

* ``Polygon``        -- exact vertex list, counterclockwise, strictly convex;
* ``SupportVector``  -- support-function samples on a uniform angle grid,
                        interpreted as the circumscribed polygon of the
                        sampled supporting lines;
* ``FourierBody``    -- band-limited support function, the smooth class.

All operations are pure functions over immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvexityViolation, NonConvex, OriginNotInterior, SingularMap

DEFAULT_GRID_N = 1024

# Relative tolerance for the discrete convexity test (edge-length formula).
CONVEXITY_RTOL = 1e-12


@lru_cache(maxsize=32)
def _grid_arrays(n: int):
    theta = 2.0 * np.pi * np.arange(n) / n
    units = np.column_stack([np.cos(theta), np.sin(theta)])
    theta.flags.writeable = False
    units.flags.writeable = False
    return theta, units


@dataclass(frozen=True)
class AngleGrid:
    """Uniform grid theta_i = 2*pi*i/n on the circle."""

    n: int = DEFAULT_GRID_N

    def __post_init__(self):
        if self.n < 4 or self.n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 4, got {self.n}")

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.n

    @property
    def theta(self) -> np.ndarray:
        return _grid_arrays(self.n)[0]

    @property
    def units(self) -> np.ndarray:
        """Unit vectors (cos theta_i, sin theta_i), shape (n, 2)."""
        return _grid_arrays(self.n)[1]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=float))
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Polygon:
    """Strictly convex polygon, vertices counterclockwise."""

    vertices: np.ndarray
    label: str | None = None

    def __post_init__(self):
        v = _freeze(self.vertices)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ConvexityViolation("polygon needs >= 3 planar vertices")
        e = np.roll(v, -1, axis=0) - v
        if np.any(np.hypot(e[:, 0], e[:, 1]) == 0.0):
            raise ConvexityViolation("repeated polygon vertex")
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        if np.any(cross <= 0.0):
            raise ConvexityViolation("polygon is not strictly convex CCW")
        object.__setattr__(self, "vertices", v)


@dataclass(frozen=True, eq=False)
class SupportVector:
    """Support samples h_i on an AngleGrid.

    The represented body is the circumscribed polygon of the supporting
    lines <x, u_i> = h_i; validity requires every edge length of that
    polygon to be nonnegative (discrete convexity). Positivity of the
    samples is not required: the origin may sit outside the body.
    """

    grid: AngleGrid
    values: np.ndarray
    label: str | None = None

    def __post_init__(self):
        h = _freeze(self.values)
        if h.shape != (self.grid.n,):
            raise ConvexityViolation("support values do not match the grid")
        object.__setattr__(self, "values", h)
        scale = float(np.max(np.abs(h)))
        if edge_gaps(self.grid, h).min() < -CONVEXITY_RTOL * scale:
            raise ConvexityViolation("support samples violate discrete convexity")


@dataclass(frozen=True, eq=False)
class FourierBody:
    """Band-limited support function a0 + sum_k (a_k cos k*theta + b_k sin k*theta).

    Construction validates h > 0 and curvature f = h + h'' > 0 on a dense
    grid, the numerical surrogate for the smooth strictly convex class.
    """

    a0: float
    cos: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sin: np.ndarray = field(default_factory=lambda: np.zeros(0))
    label: str | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.cos, dtype=float))
        s = np.atleast_1d(np.asarray(self.sin, dtype=float))
        k = max(len(c), len(s))
        c = _freeze(np.pad(c, (0, k - len(c))))
        s = _freeze(np.pad(s, (0, k - len(s))))
        if c.ndim != 1 or s.ndim != 1:
            raise ConvexityViolation("cos/sin coefficient arrays must be 1-d")
        object.__setattr__(self, "cos", c)
        object.__setattr__(self, "sin", s)
        n_val = max(DEFAULT_GRID_N, 8 * (self.k_max + 1))
        theta = 2.0 * np.pi * np.arange(n_val) / n_val
        h = self.eval(theta)
        if np.min(h) <= 0.0:
            raise ConvexityViolation("support function is not positive")
        if np.min(self.eval_curvature(theta)) <= 0.0:
            raise ConvexityViolation("curvature h + h'' is not positive")

    @property
    def k_max(self) -> int:
        return len(self.cos)

    def _k(self) -> np.ndarray:
        return np.arange(1, self.k_max + 1)

    def eval(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.k_max == 0:
            return np.full_like(theta, self.a0)
        kt = np.multiply.outer(theta, self._k())
        return self.a0 + np.cos(kt) @ self.cos + np.sin(kt) @ self.sin

    def eval_derivative(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.k_max == 0:
            return np.zeros_like(theta)
        k = self._k()
        kt = np.multiply.outer(theta, k)
        return -np.sin(kt) @ (k * self.cos) + np.cos(kt) @ (k * self.sin)

    def eval_curvature(self, theta) -> np.ndarray:
        """Curvature function f = h + h''; mode k scales by (1 - k^2)."""
        theta = np.asarray(theta, dtype=float)
        if self.k_max == 0:
            return np.full_like(theta, self.a0)
        k = self._k()
        fac = 1.0 - k.astype(float) ** 2
        kt = np.multiply.outer(theta, k)
        return self.a0 + np.cos(kt) @ (fac * self.cos) + np.sin(kt) @ (fac * self.sin)


Body = Polygon | SupportVector | FourierBody


@dataclass(frozen=True, eq=False)
class SurfaceMeasure:
    """Atomic measure on normal angles; weights are boundary lengths."""

    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        a = _freeze(self.angles)
        w = _freeze(self.weights)
        if a.shape != w.shape or a.ndim != 1:
            raise ValueError("angles/weights must be matching 1-d arrays")
        if np.any(w < 0.0):
            raise ConvexityViolation("negative surface-measure weight")
        total = float(np.sum(w))
        cx = float(np.sum(w * np.cos(a)))
        cy = float(np.sum(w * np.sin(a)))
        if math.hypot(cx, cy) > 1e-9 * total:
            raise ConvexityViolation("surface measure does not close up")
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "weights", w)

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Invertible affine map x -> m @ x + t."""

    m: np.ndarray
    t: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        m = _freeze(self.m)
        t = _freeze(self.t)
        if m.shape != (2, 2) or t.shape != (2,):
            raise SingularMap("affine map needs a 2x2 matrix and a 2-vector")
        scale = float(np.max(np.abs(m)))
        if abs(float(np.linalg.det(m))) <= 1e-14 * max(scale, 1.0) ** 2:
            raise SingularMap("linear part is singular")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "t", t)

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(np.eye(2), np.zeros(2))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.m))

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.m.T + self.t

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: x -> self(other(x))."""
        return AffineMap(self.m @ other.m, self.m @ other.t + self.t)

    def inverse(self) -> "AffineMap":
        minv = np.linalg.inv(self.m)
        return AffineMap(minv, -minv @ self.t)


@dataclass(frozen=True)
class BodyStats:
    area: float
    perimeter: float
    d_groemer: float
    h_min: float
    h_max: float

    def __post_init__(self):
        if self.area <= 0.0:
            raise ConvexityViolation("nonpositive area")
        if 2.0 * self.h_max < self.d_groemer - 1e-12:
            raise ConvexityViolation("d_groemer exceeds 2*h_max")
        if self.perimeter**2 < 4.0 * np.pi * self.area - 1e-9 * self.perimeter**2:
            raise ConvexityViolation("isoperimetric inequality violated")


# ---------------------------------------------------------------------------
# construction helpers


def _clean_vertices(v: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Drop repeated and collinear vertices from a CCW convex chain."""
    v = np.asarray(v, dtype=float)
    scale = max(float(np.max(np.abs(v))), 1e-300)
    for _ in range(3):
        n = len(v)
        if n < 3:
            break
        e = np.roll(v, -1, axis=0) - v
        keep = np.hypot(e[:, 0], e[:, 1]) > rtol * scale
        v = v[keep]
        n = len(v)
        if n < 3:
            break
        e = np.roll(v, -1, axis=0) - v
        prev = np.roll(e, 1, axis=0)
        cross = prev[:, 0] * e[:, 1] - prev[:, 1] * e[:, 0]
        keep = cross > rtol * scale**2
        if keep.all():
            break
        v = v[keep]
    return v


def polygon_from_points(points, label: str | None = None) -> Polygon:
    """Polygon from a CCW convex chain, dropping degenerate vertices."""
    return Polygon(_clean_vertices(np.asarray(points, dtype=float)), label=label)


def disk(radius: float = 1.0, label: str | None = "disk") -> FourierBody:
    return FourierBody(radius, label=label)


def ellipse_body(a: float, b: float, label: str | None = None) -> FourierBody:
    """Axis-aligned ellipse with semi-axes a, b as a smooth body."""
    return affine_image(disk(), AffineMap(np.diag([a, b])), label=label)


def square_body(half_width: float = 1.0, label: str | None = "square") -> Polygon:
    w = half_width
    return Polygon(np.array([[w, w], [-w, w], [-w, -w], [w, -w]]), label=label)


def rectangle_body(hx: float, hy: float, label: str | None = None) -> Polygon:
    return Polygon(np.array([[hx, hy], [-hx, hy], [-hx, -hy], [hx, -hy]]), label=label)


def regular_polygon(sides: int, circumradius: float = 1.0, phase: float = 0.0,
                    label: str | None = None) -> Polygon:
    ang = phase + 2.0 * np.pi * np.arange(sides) / sides
    v = circumradius * np.column_stack([np.cos(ang), np.sin(ang)])
    return Polygon(v, label=label)


# ---------------------------------------------------------------------------
# support evaluation


def support_eval(body: Body, theta):
    """Support function of the body at angle(s) theta.

    Exact for polygons (max over vertices) and Fourier bodies (series).
    SupportVector data is evaluated as its circumscribed polygon, never
    by interpolating the samples.
    """
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    if isinstance(body, FourierBody):
        out = body.eval(theta_arr)
    elif isinstance(body, Polygon):
        u = np.column_stack([np.cos(theta_arr), np.sin(theta_arr)])
        out = np.max(body.vertices @ u.T, axis=0)
    elif isinstance(body, SupportVector):
        out = support_eval(to_polygon(body), theta_arr)
    else:
        raise TypeError(f"not a body: {type(body)!r}")
    return out if np.ndim(theta) else float(out[0])


def support_values(body: Body, grid: AngleGrid) -> np.ndarray:
    """Support samples on the grid; returns stored values for matching grids."""
    if isinstance(body, SupportVector) and body.grid.n == grid.n:
        return body.values
    return support_eval(body, grid.theta)


def edge_gaps(grid: AngleGrid, values: np.ndarray) -> np.ndarray:
    """h_{i-1} + h_{i+1} - 2 h_i cos(step); >= 0 iff samples are convex."""
    h = np.asarray(values, dtype=float)
    return np.roll(h, 1) + np.roll(h, -1) - 2.0 * np.cos(grid.step) * h


def edge_lengths(grid: AngleGrid, values: np.ndarray) -> np.ndarray:
    """Edge lengths of the circumscribed polygon, clipped at zero."""
    return np.clip(edge_gaps(grid, values), 0.0, None) / np.sin(grid.step)


def to_support_vector(body: Body, grid: AngleGrid | None = None) -> SupportVector:
    """Sample the support function on the grid (validates convexity)."""
    grid = grid or AngleGrid()
    if isinstance(body, SupportVector) and body.grid.n == grid.n:
        return body
    return SupportVector(grid, support_values(body, grid), label=body.label)


def to_polygon(body: Body, grid: AngleGrid | None = None) -> Polygon:
    """Polygon form of any body.

    SupportVector turns into its circumscribed polygon (exact); smooth
    bodies into the inscribed polygon with vertices on the boundary at
    grid normals.
    """
    if isinstance(body, Polygon):
        return body
    grid = grid or AngleGrid()
    if isinstance(body, SupportVector):
        g, h = body.grid, body.values
        un = g.units
        u_next = np.roll(un, -1, axis=0)
        h_next = np.roll(h, -1)
        s = np.sin(g.step)
        # intersection of supporting lines i and i+1
        vx = (h * u_next[:, 1] - h_next * un[:, 1]) / s
        vy = (h_next * un[:, 0] - h * u_next[:, 0]) / s
        return polygon_from_points(np.column_stack([vx, vy]), label=body.label)
    if isinstance(body, FourierBody):
        theta = grid.theta
        h = body.eval(theta)
        hp = body.eval_derivative(theta)
        x = h * np.cos(theta) - hp * np.sin(theta)
        y = h * np.sin(theta) + hp * np.cos(theta)
        return polygon_from_points(np.column_stack([x, y]), label=body.label)
    raise TypeError(f"not a body: {type(body)!r}")


# ---------------------------------------------------------------------------
# fundamental functionals


def area(body: Body) -> float:
    """Enclosed area; exact for every representation."""
    if isinstance(body, Polygon):
        v = body.vertices
        w = np.roll(v, -1, axis=0)
        return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]))
    if isinstance(body, FourierBody):
        k = np.arange(1, body.k_max + 1, dtype=float)
        quad = np.sum((1.0 - k**2) * (body.cos**2 + body.sin**2))
        return float(np.pi * body.a0**2 + 0.5 * np.pi * quad)
    if isinstance(body, SupportVector):
        lengths = edge_lengths(body.grid, body.values)
        return 0.5 * float(np.sum(body.values * lengths))
    raise TypeError(f"not a body: {type(body)!r}")


def surface_measure(body: Body, grid: AngleGrid | None = None) -> SurfaceMeasure:
    """Surface area measure: edge lengths at edge normals.

    Polygons give one atom per edge (exact); smooth bodies the density
    f = h + h'' sampled on the grid with weight f * step.
    """
    if isinstance(body, Polygon):
        v = body.vertices
        e = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(e[:, 0], e[:, 1])
        ang = np.mod(np.arctan2(-e[:, 0], e[:, 1]), 2.0 * np.pi)
        return SurfaceMeasure(ang, lengths)
    if isinstance(body, SupportVector):
        return SurfaceMeasure(body.grid.theta, edge_lengths(body.grid, body.values))
    if isinstance(body, FourierBody):
        grid = grid or AngleGrid()
        f = body.eval_curvature(grid.theta)
        return SurfaceMeasure(grid.theta, f * grid.step)
    raise TypeError(f"not a body: {type(body)!r}")


def mixed_area(k: Body, l: Body, grid: AngleGrid | None = None) -> float:
    """Mixed area V(K, L) = (1/2) integral of h_L against dS_K.

    When exactly one argument is smooth, the polygonal side supplies the
    measure: its atoms are exact and the smooth support evaluates exactly
    at them, so no quadrature error enters. Otherwise both orders are
    exact (or equally accurate) and the result is symmetrized.
    """

    def one_way(a: Body, b: Body) -> float:
        mu = surface_measure(a, grid)
        return 0.5 * float(np.sum(support_eval(b, mu.angles) * mu.weights))

    k_smooth = isinstance(k, FourierBody)
    l_smooth = isinstance(l, FourierBody)
    if k_smooth and not l_smooth:
        return one_way(l, k)
    if l_smooth and not k_smooth:
        return one_way(k, l)
    return 0.5 * (one_way(k, l) + one_way(l, k))


def polar(body: Body, grid: AngleGrid | None = None) -> Body:
    """Polar body; requires the origin strictly interior.

    Polygons dualize exactly (edge at offset h with normal u maps to the
    vertex u/h). Smooth bodies return the inscribed polygon of the polar
    on the grid; the exact polar area of a smooth body is available via
    ``santalo.polar_area`` and is what area-sensitive callers use.
    """
    if isinstance(body, Polygon):
        v = body.vertices
        e = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(e[:, 0], e[:, 1])
        normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
        offsets = np.sum(v * normals, axis=1)
        if np.min(offsets) <= 0.0:
            raise OriginNotInterior("polar needs the origin inside the body")
        return Polygon(normals / offsets[:, None])
    if isinstance(body, SupportVector):
        h = body.values
        if np.min(h) <= 0.0:
            raise OriginNotInterior("polar needs the origin inside the body")
        return polygon_from_points(body.grid.units / h[:, None])
    if isinstance(body, FourierBody):
        grid = grid or AngleGrid()
        h = body.eval(grid.theta)
        if np.min(h) <= 0.0:
            raise OriginNotInterior("polar needs the origin inside the body")
        return polygon_from_points(grid.units / h[:, None])
    raise TypeError(f"not a body: {type(body)!r}")


def fourier_from_samples(values: np.ndarray, k_max: int, label: str | None = None,
                         trim: float = 1e-15) -> FourierBody:
    """Project uniform support samples onto Fourier degree <= k_max."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    spec = np.fft.rfft(values) / n
    a0 = float(spec[0].real)
    k_max = min(k_max, len(spec) - 1)
    a = 2.0 * spec[1 : k_max + 1].real
    b = -2.0 * spec[1 : k_max + 1].imag
    # drop the numerically empty tail so later evaluations stay cheap
    mag = np.maximum(np.abs(a), np.abs(b))
    keep = np.nonzero(mag > trim * max(abs(a0), float(mag.max(initial=0.0))))[0]
    k_eff = int(keep[-1]) + 1 if len(keep) else 0
    return FourierBody(a0, a[:k_eff], b[:k_eff], label=label)


def affine_image(body: Body, amap: AffineMap, grid: AngleGrid | None = None,
                 label: str | None = None) -> Body:
    """Image of the body under an invertible affine map.

    Polygons map exactly. Support-based representations use the
    1-homogeneous extension h(x) = |x| h(x/|x|): the image support is
    h_K(m^T u) + <t, u>, resampled and (for Fourier bodies) re-projected
    with degree capped at grid n/4 and convexity re-validated.
    """
    label = label or body.label
    if isinstance(body, Polygon):
        v = amap.apply(body.vertices)
        if amap.det < 0.0:
            v = v[::-1]
        return Polygon(v, label=label)
    if isinstance(body, SupportVector):
        mapped = affine_image(to_polygon(body), amap)
        return to_support_vector(mapped, body.grid)
    if isinstance(body, FourierBody):
        grid = grid or AngleGrid()
        w = grid.units @ amap.m  # row i holds m^T u_i
        r = np.hypot(w[:, 0], w[:, 1])
        h = r * body.eval(np.arctan2(w[:, 1], w[:, 0])) + grid.units @ amap.t
        return fourier_from_samples(h, grid.n // 4, label=label)
    raise TypeError(f"not a body: {type(body)!r}")


def translate(body: Body, t, grid: AngleGrid | None = None) -> Body:
    return affine_image(body, AffineMap(np.eye(2), np.asarray(t, dtype=float)), grid)


def curvature_samples(body: FourierBody, grid: AngleGrid | None = None) -> np.ndarray:
    """Curvature function f = h + h'' on the grid; must be positive."""
    if not isinstance(body, FourierBody):
        raise TypeError("curvature samples exist only for smooth bodies")
    grid = grid or AngleGrid()
    f = body.eval_curvature(grid.theta)
    if np.min(f) <= 0.0:
        raise NonConvex("curvature function is not positive")
    return f


def stats(body: Body, grid: AngleGrid | None = None) -> BodyStats:
    """Area, perimeter, 2*max h (Groemer's D), and the support range."""
    grid = grid or AngleGrid()
    h = support_values(body, grid)
    h_min = float(np.min(h))
    h_max = float(np.max(h))
    if isinstance(body, Polygon):
        # the true extremes of a polygon support function are attained at
        # vertex directions (max) and edge normals (min)
        h_max = max(h_max, float(np.max(np.hypot(*body.vertices.T))))
        mu = surface_measure(body)
        h_min = min(h_min, float(np.min(support_eval(body, mu.angles))))
    elif isinstance(body, SupportVector):
        return stats(to_polygon(body), grid)
    else:
        mu = surface_measure(body, grid)
    return BodyStats(
        area=area(body),
        perimeter=mu.total,
        d_groemer=2.0 * h_max,
        h_min=h_min,
        h_max=h_max,
    )


def steiner_point(body: Body, grid: AngleGrid | None = None) -> np.ndarray:
    """Steiner point (1/pi) integral of h(u) u; exact for band-limited h."""
    grid = grid or AngleGrid()
    h = support_values(body, grid)
    return (grid.step / np.pi) * (h @ grid.units)


def is_origin_symmetric(body: Body, grid: AngleGrid | None = None,
                        rtol: float = 1e-9) -> bool:
    """Check h(theta) == h(theta + pi) on the grid."""
    grid = grid or AngleGrid()
    h = support_values(body, grid)
    dev = np.max(np.abs(h - np.roll(h, grid.n // 2)))
    return bool(dev <= rtol * np.max(np.abs(h)))
