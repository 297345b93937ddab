import numpy as np
import pytest
from scipy.spatial import ConvexHull

from convexlab.bodies import (
    AngleGrid,
    FourierBody,
    Polygon,
    disk,
    polygon_from_points,
    square_body,
)


@pytest.fixture
def grid() -> AngleGrid:
    return AngleGrid(1024)


@pytest.fixture
def square() -> Polygon:
    return square_body(1.0)


@pytest.fixture
def triangle() -> Polygon:
    return Polygon(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), label="triangle")


@pytest.fixture
def unit_disk() -> FourierBody:
    return disk(1.0)


def random_polygon(rng: np.random.Generator, n_points: int = 12,
                   center=(0.0, 0.0)) -> Polygon:
    """Convex hull of gaussian points, shifted so the origin is interior."""
    pts = rng.normal(size=(n_points, 2))
    hull = ConvexHull(pts)
    v = pts[hull.vertices]  # counterclockwise
    return polygon_from_points(v - v.mean(axis=0) + np.asarray(center))


def random_fourier(rng: np.random.Generator, k_max: int = 6,
                   roughness: float = 0.5) -> FourierBody:
    """Random smooth body; coefficients scaled to keep curvature positive."""
    k = np.arange(1, k_max + 1)
    a = rng.normal(size=k_max) / (1.0 + k**2)
    b = rng.normal(size=k_max) / (1.0 + k**2)
    budget = np.sum((k**2 + 1.0) * (np.abs(a) + np.abs(b)))
    scale = roughness / max(budget, 1e-12)
    return FourierBody(1.0, scale * a, scale * b)
