"""Deficit-versus-distance sweeps and stability exponent fits.

For each body the sweep measures the volume-product deficit
epsilon = pi^2 / (V(K) V(K^s)) - 1 and the distance deficit
delta = d_BM(K, disk) - 1, then fits log delta against log epsilon.
The empirical stability constant gamma is the largest delta / eps^p
over the fit window, with p = 1/2 for origin-symmetric corpora and
p = 1/4 in general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import AngleGrid, Body, is_origin_symmetric
from .errors import InsufficientData
from .families import FamilySpec
from .metrics import bm_distance_disk
from .santalo import santalo_point, volume_product

# deficits this small are numerical noise; larger ones leave the
# small-deficit regime the exponent statement is about
EPS_FLOOR = 1e-9
EPS_CEIL = 0.05


@dataclass(frozen=True)
class DeficitRecord:
    body_id: str
    epsilon: float
    delta: float
    volume_product: float
    bm_spread: float
    family_param: float


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    gamma: float
    residual: float  # max abs log-log fit residual


@dataclass(frozen=True)
class SweepResult:
    records: tuple[DeficitRecord, ...]
    fitted_slope: float
    fitted_gamma: float
    symmetric: bool
    family: FamilySpec | None = None


def _fit_window(records) -> list[DeficitRecord]:
    return [r for r in records
            if EPS_FLOOR < r.epsilon <= EPS_CEIL and r.delta > 0.0]


def exponent_fit(records, symmetric: bool = True) -> ExponentFit:
    """Least-squares log-log fit over the deficit window.

    Needs at least three records with usable deficits; the gamma is the
    honest uniform constant, a max ratio rather than an intercept.
    """
    pts = _fit_window(records)
    if len(pts) < 3:
        raise InsufficientData(
            f"{len(pts)} usable records in ({EPS_FLOOR:g}, {EPS_CEIL:g}]; "
            "need 3 for a fit")
    x = np.log([r.epsilon for r in pts])
    y = np.log([r.delta for r in pts])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    power = 0.5 if symmetric else 0.25
    gamma = max(r.delta / r.epsilon**power for r in pts)
    return ExponentFit(float(slope), float(intercept), float(gamma), residual)


def stability_sweep(family, symmetric: bool | None = None,
                    grid: AngleGrid | None = None, seed: int = 0,
                    params=None, spec: FamilySpec | None = None,
                    restarts: int = 8) -> SweepResult:
    """Measure (epsilon, delta) per body and fit the exponent.

    The translation of the comparison disk is searched exactly when the
    corpus is not origin-symmetric. Records are sorted by body id, and
    each body gets its own derived seed, so reruns are bit-identical.
    """
    bodies: list[Body] = list(family)
    if not bodies:
        raise InsufficientData("empty family")
    grid = grid or AngleGrid()
    if symmetric is None:
        symmetric = all(is_origin_symmetric(b, grid) for b in bodies)
    if params is None:
        params = [float(i) for i in range(len(bodies))]

    records = []
    for i, (body, param) in enumerate(zip(bodies, params)):
        res = santalo_point(body, grid)
        vp = volume_product(body, grid, res)
        eps = math.pi**2 / vp - 1.0
        est = bm_distance_disk(body, grid, seed=seed + i, restarts=restarts,
                               symmetric=symmetric)
        records.append(DeficitRecord(
            body_id=body.label or f"body-{i:03d}",
            epsilon=eps,
            delta=est.distance - 1.0,
            volume_product=vp,
            bm_spread=est.multistart_spread,
            family_param=float(param)))
    records.sort(key=lambda r: r.body_id)

    fit = exponent_fit(records, symmetric)
    return SweepResult(records=tuple(records), fitted_slope=fit.slope,
                       fitted_gamma=fit.gamma, symmetric=symmetric,
                       family=spec)
