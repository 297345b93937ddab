import numpy as np
import pytest

from convexlab.bodies import (
    AffineMap,
    AngleGrid,
    FourierBody,
    affine_image,
    area,
    disk,
    ellipse_body,
    polar,
    to_support_vector,
    translate,
)
from convexlab.errors import OriginNotInterior
from convexlab.santalo import (
    BLASCHKE_SANTALO_BOUND,
    centered_support,
    groemer_gap,
    polar_area,
    polar_body_at,
    santalo_deficit,
    santalo_point,
    volume_product,
)

from conftest import random_fourier, random_polygon


def polygon_centroid(p):
    v = p.vertices
    w = np.roll(v, -1, axis=0)
    cross = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
    return (v + w).T @ cross / (3.0 * np.sum(cross))


def test_square_santalo(square):
    res = santalo_point(square)
    np.testing.assert_allclose(res.point, 0.0, atol=1e-12)
    assert res.polar_area == pytest.approx(2.0, rel=1e-12)
    assert volume_product(square) == pytest.approx(8.0, rel=1e-12)
    assert santalo_deficit(square) == pytest.approx(np.pi**2 / 8.0 - 1.0, rel=1e-12)


def test_triangle_santalo(triangle):
    res = santalo_point(triangle)
    np.testing.assert_allclose(res.point, [1.0 / 3.0, 1.0 / 3.0], atol=1e-10)
    assert res.polar_area == pytest.approx(13.5, rel=1e-10)
    assert volume_product(triangle) == pytest.approx(27.0 / 4.0, rel=1e-10)
    assert res.iterations <= 30


def test_round_bodies_have_zero_deficit(unit_disk):
    assert abs(santalo_deficit(unit_disk)) <= 1e-12
    e = ellipse_body(2.0, 0.5)
    assert abs(santalo_deficit(e)) <= 1e-10
    rot = AffineMap(np.array([[np.cos(0.7), -np.sin(0.7)],
                              [np.sin(0.7), np.cos(0.7)]]), np.array([0.3, -0.2]))
    assert abs(santalo_deficit(affine_image(e, rot))) <= 1e-10


def test_polar_area_matches_vertex_duality():
    rng = np.random.default_rng(42)
    for _ in range(15):
        p = random_polygon(rng)
        x = polygon_centroid(p) + 0.05 * rng.normal(size=2)
        direct = polar_area(p, x)
        dual = area(polar(translate(p, -x)))
        assert direct == pytest.approx(dual, rel=1e-12)


def test_polar_area_needs_interior_point(square):
    with pytest.raises(OriginNotInterior):
        polar_area(square, np.array([2.0, 0.0]))
    with pytest.raises(OriginNotInterior):
        polar_area(disk(1.0), np.array([0.0, 1.5]))


def test_santalo_centers_the_polar_body():
    rng = np.random.default_rng(9)
    for _ in range(10):
        p = random_polygon(rng, center=(0.4, -0.2))
        res = santalo_point(p)
        dual = polar_body_at(p, res.point)
        c = polygon_centroid(dual)
        assert np.hypot(*c) <= 1e-9 * np.max(np.abs(dual.vertices))


def test_santalo_affine_equivariance():
    rng = np.random.default_rng(21)
    for _ in range(10):
        p = random_polygon(rng)
        amap = AffineMap(rng.normal(size=(2, 2)) + 2.0 * np.eye(2),
                         rng.normal(size=2))
        s_img = santalo_point(affine_image(p, amap)).point
        np.testing.assert_allclose(s_img, amap.apply(santalo_point(p).point),
                                   atol=1e-9)
        assert volume_product(affine_image(p, amap)) == pytest.approx(
            volume_product(p), rel=1e-9)


def test_volume_product_bounds():
    rng = np.random.default_rng(33)
    for _ in range(20):
        body = random_polygon(rng) if rng.random() < 0.5 else random_fourier(rng)
        vp = volume_product(body)
        assert vp <= BLASCHKE_SANTALO_BOUND * (1.0 + 1e-9)
        assert vp >= 27.0 / 4.0 * (1.0 - 1e-9)


def test_mode2_deficit_quartic_scaling():
    # h = 1 + t cos(2 theta): epsilon = (3/8) t^4 + O(t^6)
    def ratio(t):
        return santalo_deficit(FourierBody(1.0, np.array([0.0, t]))) / t**4

    assert ratio(0.025) == pytest.approx(0.375, rel=0.01)
    assert abs(ratio(0.025) - 0.375) < abs(ratio(0.1) - 0.375)


def test_groemer_disk_square(square, unit_disk):
    bound = groemer_gap(unit_disk, square)
    assert bound.lhs == pytest.approx(4.0 / np.pi - 1.0, rel=1e-12)
    dev = np.sqrt(2.0) / 2.0 - 1.0 / np.sqrt(np.pi)
    assert bound.deviation == pytest.approx(dev, rel=1e-12)
    assert bound.rhs == pytest.approx(np.pi / 16.0 * dev**2, rel=1e-12)
    assert bound.gap == pytest.approx(
        (4.0 / np.pi - 1.0) - np.pi / 16.0 * dev**2, rel=1e-12)


def test_groemer_inequality_random_pairs():
    rng = np.random.default_rng(17)
    for _ in range(20):
        k = random_polygon(rng) if rng.random() < 0.5 else random_fourier(rng)
        l = random_polygon(rng) if rng.random() < 0.5 else random_fourier(rng)
        assert groemer_gap(k, l).gap >= -1e-9
    body = random_fourier(rng)
    self_bound = groemer_gap(body, body)
    assert abs(self_bound.lhs) <= 1e-12 and abs(self_bound.rhs) <= 1e-12


def test_centered_support_positive(triangle, grid):
    h = centered_support(triangle, grid)
    assert np.min(h) > 0.0
    sv = to_support_vector(triangle, grid)
    h2 = centered_support(sv, grid)
    np.testing.assert_allclose(h2, h, atol=1e-10)
