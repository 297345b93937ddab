"""Minkowski's problem on the circle, mollification, and the Lambda body.

The planar Minkowski problem asks for a support function h with
prescribed curvature f = h + h''. In Fourier space mode k of h is mode k
of f divided by (1 - k^2), so the problem is solvable iff f has no first
harmonic, and the solution is unique once that harmonic of h is pinned
(here: to zero, placing the Steiner point at the origin).

The Lambda body of K is the convex body whose curvature function is

    f = (V(K) / V(K^s)) * h^{-3},

with h the support of K about its Santalo point. Its first harmonic
vanishes exactly because the Santalo point kills the gradient of the
polar area, which is the same integral.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import (
    AngleGrid,
    Body,
    FourierBody,
    Polygon,
    SupportVector,
    area,
    curvature_samples,
    surface_measure,
)
from .errors import NonConvex, NonConvexSolution, SolvabilityViolation, SpectralTailError
from .santalo import SantaloResult, santalo_point

TAIL_RTOL = 1e-5
SOLVABILITY_RTOL = 1e-8


@dataclass(frozen=True)
class PinchBounds:
    """Range of h f^(1/3) and the resulting round-ness certificate.

    If the cube-root pinch lies in [lower, upper] then the Banach-Mazur
    distance to the disk is at most (upper / lower)^(3/2).
    """

    lower: float
    upper: float

    @property
    def bm_bound(self) -> float:
        return (self.upper / self.lower) ** 1.5


@dataclass(frozen=True)
class LutwakBound:
    """Volume-product upper bound through the Lambda-body volume drop:
    V(K) V(K^s) <= pi^2 * V(LK) / V(K)."""

    volume_product: float
    bound: float

    @property
    def gap(self) -> float:
        return self.bound - self.volume_product


def _coefficients_from_spectrum(spec: np.ndarray, trim: float = 1e-15):
    a0 = float(spec[0].real)
    a = 2.0 * spec[1:].real
    b = -2.0 * spec[1:].imag
    mag = np.maximum(np.abs(a), np.abs(b))
    keep = np.nonzero(mag > trim * max(abs(a0), float(mag.max(initial=0.0))))[0]
    k_eff = int(keep[-1]) + 1 if len(keep) else 0
    return a0, a[:k_eff], b[:k_eff]


def solve_minkowski(f_samples: np.ndarray, grid: AngleGrid | None = None,
                    k_cap: int | None = None, label: str | None = None) -> FourierBody:
    """Support function with prescribed curvature samples f = h + h''.

    Raises NonConvex if f is not strictly positive, SolvabilityViolation
    if the first harmonic of f is not negligible, and SpectralTailError
    if f carries significant energy above k_cap (grid too coarse for the
    data; mollify first or refine the grid).
    """
    grid = grid or AngleGrid()
    f = np.asarray(f_samples, dtype=float)
    if f.shape != (grid.n,):
        raise ValueError("curvature samples do not match the grid")
    if np.min(f) <= 0.0:
        raise NonConvex("curvature samples must be strictly positive")
    k_cap = k_cap if k_cap is not None else grid.n // 4
    spec = np.fft.rfft(f) / grid.n
    scale = float(np.linalg.norm(spec))
    if abs(spec[1]) > SOLVABILITY_RTOL * scale:
        raise SolvabilityViolation(
            "first harmonic of the curvature data is nonzero; "
            "no convex body has this surface measure")
    tail = float(np.linalg.norm(spec[k_cap + 1 :]))
    if tail > TAIL_RTOL * scale:
        raise SpectralTailError(
            f"curvature data has relative tail {tail / scale:.2e} above "
            f"mode {k_cap}; refine the grid or mollify the input")
    spec = spec[: k_cap + 1].copy()
    spec[1] = 0.0
    k = np.arange(k_cap + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h_spec = spec / (1.0 - k**2)
    h_spec[1] = 0.0
    a0, a, b = _coefficients_from_spectrum(h_spec)
    try:
        return FourierBody(a0, a, b, label=label)
    except Exception as exc:
        raise NonConvexSolution(f"solved support function is invalid: {exc}") from exc


def mollify(body: Body, grid: AngleGrid | None = None, k_cap: int | None = None,
            tau: float | None = None, rho_rel: float = 1e-6,
            label: str | None = None) -> FourierBody:
    """Smooth replacement of a body via heat-damped surface measure.

    The surface measure is convolved with a circular Gaussian of variance
    tau (default 36 / k_cap^2, which damps mode k_cap to 2e-16) and a
    disk of radius rho_rel times the mean support level is added, so the
    result lies in the strictly convex smooth class by construction.
    Polygons become admissible Lambda-body inputs this way.

    Unlike the solver, mollification can use the full grid spectrum, so
    k_cap defaults to the Nyquist limit and the smoothing scale is as
    small as the grid supports.
    """
    grid = grid or AngleGrid()
    k_cap = k_cap if k_cap is not None else grid.n // 2 - 1
    tau = tau if tau is not None else 36.0 / k_cap**2
    mu = surface_measure(body, grid)
    k = np.arange(k_cap + 1, dtype=float)
    phase = np.exp(-1j * np.outer(k, mu.angles))
    f_spec = (phase @ mu.weights) / (2.0 * np.pi) * np.exp(-tau * k**2)
    f_spec[1] = 0.0  # closure of the measure makes this roundoff only
    with np.errstate(divide="ignore", invalid="ignore"):
        h_spec = f_spec / (1.0 - k**2)
    h_spec[1] = 0.0
    a0, a, b = _coefficients_from_spectrum(h_spec)
    a0 += rho_rel * a0
    return FourierBody(a0, a, b, label=label or body.label)


def lambda_body(body: Body, grid: AngleGrid | None = None,
                santalo: SantaloResult | None = None,
                label: str | None = None) -> FourierBody:
    """The Lambda body, Steiner point at the origin.

    Polygonal input is mollified first (the construction needs a smooth
    curvature function); pass a FourierBody to control the smoothing.
    """
    grid = grid or AngleGrid()
    if isinstance(body, (Polygon, SupportVector)):
        body = mollify(body, grid)
        santalo = None
    res = santalo or santalo_point(body, grid)
    h = body.eval(grid.theta) - grid.units @ res.point
    f = (area(body) / res.polar_area) * h**-3
    return solve_minkowski(f, grid, label=label or body.label)


def lutwak_gap(body: Body, grid: AngleGrid | None = None) -> LutwakBound:
    """Slack in the Lambda-volume bound on the volume product.

    Polygons are mollified once and all three volumes are taken on the
    smooth replacement, so the comparison is internally consistent.
    """
    grid = grid or AngleGrid()
    if isinstance(body, (Polygon, SupportVector)):
        body = mollify(body, grid)
    res = santalo_point(body, grid)
    v = area(body)
    vp = v * res.polar_area
    lam = lambda_body(body, grid, santalo=res)
    return LutwakBound(volume_product=vp, bound=np.pi**2 * area(lam) / v)


def pinch_bounds(body: FourierBody, grid: AngleGrid | None = None) -> PinchBounds:
    """Extremes of h f^(1/3) for the body as positioned.

    The quantity is constant exactly on centered ellipses; its spread
    certifies Banach-Mazur closeness to the disk via bm_bound.
    """
    grid = grid or AngleGrid()
    vals = body.eval(grid.theta) * curvature_samples(body, grid) ** (1.0 / 3.0)
    return PinchBounds(lower=float(np.min(vals)), upper=float(np.max(vals)))
