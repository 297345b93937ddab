"""Deterministic body families for sweeps and corpus experiments.

A family spec is a compact string, ``kind:key=value,key=value``:

    mode:k=4,lo=0.002,hi=0.02,count=10   cos-mode perturbations of the disk
    mode:k=3,t=0.01                      single amplitude
    random-polygon:vertices=10,count=20,seed=7
    smoothed-ngon:lo=3,hi=12             regular n-gons, spectrally smoothed

Generation is deterministic given the spec (seeds are part of it), and
every body is validated convex on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull

from .bodies import (
    AngleGrid,
    Body,
    FourierBody,
    polygon_from_points,
    regular_polygon,
)
from .errors import ConvexityViolation
from .minkowski import mollify

KINDS = ("mode", "random-polygon", "smoothed-ngon")

_REQUIRED = {
    "mode": {"k"},
    "random-polygon": {"vertices", "count", "seed"},
    "smoothed-ngon": {"lo", "hi"},
}
_ALLOWED = {
    "mode": {"k", "t", "lo", "hi", "count"},
    "random-polygon": {"vertices", "count", "seed"},
    "smoothed-ngon": {"lo", "hi"},
}


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        keys = set(self.params)
        missing = _REQUIRED[self.kind] - keys
        extra = keys - _ALLOWED[self.kind]
        if missing:
            raise ValueError(f"{self.kind} family needs {sorted(missing)}")
        if extra:
            raise ValueError(f"{self.kind} family got unknown "
                             f"{sorted(extra)}")
        if self.kind == "mode" and not ({"t"} <= keys or {"lo", "hi"} <= keys):
            raise ValueError("mode family needs t or lo and hi")

    @property
    def text(self) -> str:
        inner = ",".join(f"{k}={self.params[k]:g}" for k in sorted(self.params))
        return f"{self.kind}:{inner}"

    def param_values(self) -> list[float]:
        """The varying parameter of each body, in generation order."""
        p = self.params
        if self.kind == "mode":
            if "t" in p:
                return [float(p["t"])]
            count = int(p.get("count", 8))
            return [float(v) for v in
                    np.linspace(p["lo"], p["hi"], count)]
        if self.kind == "random-polygon":
            return [float(i) for i in range(int(p["count"]))]
        return [float(s) for s in
                range(int(p["lo"]), int(p["hi"]) + 1)]

    def body_ids(self) -> list[str]:
        p = self.params
        if self.kind == "mode":
            k = int(p["k"])
            return [f"mode{k}-{i:03d}"
                    for i in range(len(self.param_values()))]
        if self.kind == "random-polygon":
            v = int(p["vertices"])
            return [f"poly{v}-{i:03d}" for i in range(int(p["count"]))]
        return [f"ngon-{s:03d}"
                for s in range(int(p["lo"]), int(p["hi"]) + 1)]


def parse_family_spec(text: str) -> FamilySpec:
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    params: dict[str, float] = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"bad family parameter {item!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise ValueError(f"bad family value {item!r}") from None
    return FamilySpec(kind, params)


def _mode_body(k: int, t: float, label: str) -> FourierBody:
    limit = 1.0 / (k**2 - 1.0)
    if abs(t) >= limit:
        raise ConvexityViolation(
            f"mode-{k} amplitude {t:g} is outside (-{limit:g}, {limit:g})")
    a = np.zeros(k)
    a[k - 1] = t
    return FourierBody(1.0, a, np.zeros(k), label=label)


def _random_polygon(rng: np.random.Generator, vertices: int,
                    label: str) -> Body:
    pts = rng.normal(size=(vertices, 2))
    hull = ConvexHull(pts)
    v = pts[hull.vertices]
    return polygon_from_points(v - v.mean(axis=0), label=label)


def generate_family(spec: FamilySpec,
                    grid: AngleGrid | None = None) -> list[Body]:
    """Instantiate the family; deterministic given the spec."""
    grid = grid or AngleGrid()
    ids = spec.body_ids()
    if spec.kind == "mode":
        k = int(spec.params["k"])
        if k < 2:
            raise ValueError("mode index must be at least 2")
        return [_mode_body(k, t, bid)
                for t, bid in zip(spec.param_values(), ids)]
    if spec.kind == "random-polygon":
        rng = np.random.default_rng(int(spec.params["seed"]))
        v = int(spec.params["vertices"])
        if v < 3:
            raise ValueError("polygons need at least 3 vertices")
        return [_random_polygon(rng, v, bid) for bid in ids]
    sides = [int(s) for s in spec.param_values()]
    if min(sides) < 3:
        raise ValueError("n-gons need at least 3 sides")
    # cap the spectrum at the degree affine images preserve, so these
    # bodies survive John normalization without re-smoothing
    return [mollify(regular_polygon(s), grid, k_cap=grid.n // 4, label=bid)
            for s, bid in zip(sides, ids)]
