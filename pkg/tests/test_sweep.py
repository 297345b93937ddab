import numpy as np
import pytest

from convexlab.bodies import ellipse_body
from convexlab.errors import InsufficientData
from convexlab.families import generate_family, parse_family_spec
from convexlab.sweep import DeficitRecord, exponent_fit, stability_sweep


def _synthetic(eps_values, power):
    return [DeficitRecord(body_id=f"b{i:02d}", epsilon=e, delta=e**power,
                          volume_product=np.pi**2 / (1 + e), bm_spread=0.0,
                          family_param=float(i))
            for i, e in enumerate(eps_values)]


def test_exponent_fit_recovers_square_root_law():
    fit = exponent_fit(_synthetic([1e-6, 1e-5, 1e-4, 1e-3], 0.5))
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    assert fit.gamma == pytest.approx(1.0, abs=1e-12)
    assert fit.residual <= 1e-12


def test_exponent_fit_general_branch_power():
    fit = exponent_fit(_synthetic([1e-6, 1e-5, 1e-4], 0.25), symmetric=False)
    assert fit.slope == pytest.approx(0.25, abs=1e-12)
    assert fit.gamma == pytest.approx(1.0, abs=1e-12)


def test_exponent_fit_needs_three_records():
    with pytest.raises(InsufficientData):
        exponent_fit(_synthetic([1e-4, 1e-3], 0.5))


def test_exponent_fit_window_excludes_noise_and_large_deficits():
    # two in-window points cannot carry a fit once the rest fall out
    records = _synthetic([1e-12, 1e-10, 0.2, 1e-4, 1e-3], 0.5)
    with pytest.raises(InsufficientData):
        exponent_fit(records)


def test_sweep_of_ellipses_has_no_usable_deficit(grid):
    family = [ellipse_body(1.0 + 0.2 * i, 1.0 / (1.0 + 0.2 * i),
                           label=f"ell-{i}") for i in range(3)]
    with pytest.raises(InsufficientData):
        stability_sweep(family, grid=grid)


def test_sweep_mode2_matches_quartic_series(grid):
    spec = parse_family_spec("mode:k=2,lo=0.03,hi=0.05,count=3")
    res = stability_sweep(generate_family(spec, grid), grid=grid,
                          params=spec.param_values(), spec=spec)
    assert res.symmetric
    for rec in res.records:
        t = rec.family_param
        assert rec.epsilon == pytest.approx(0.375 * t**4, rel=0.15)


def test_sweep_mode4_series_and_slope(grid):
    spec = parse_family_spec("mode:k=4,lo=0.002,hi=0.02,count=6")
    res = stability_sweep(generate_family(spec, grid), grid=grid,
                          params=spec.param_values(), spec=spec)
    by_param = {rec.family_param: rec for rec in res.records}
    rec = by_param[0.02]
    assert rec.epsilon == pytest.approx(6 * 0.02**2, rel=0.1)
    assert rec.delta == pytest.approx(2 * 0.02, rel=0.1)
    assert 0.45 <= res.fitted_slope <= 0.55
    assert res.fitted_gamma <= 10.0
    assert res.family == spec


def test_sweep_records_sorted_and_deterministic(grid):
    # random polygons sit far above the fit ceiling, so the non-symmetric
    # determinism check runs on an odd-mode family instead
    spec = parse_family_spec("mode:k=3,lo=0.02,hi=0.05,count=4")
    kwargs = dict(grid=grid, params=spec.param_values(), spec=spec, seed=11)
    first = stability_sweep(generate_family(spec, grid), **kwargs)
    second = stability_sweep(generate_family(spec, grid), **kwargs)
    assert not first.symmetric
    ids = [r.body_id for r in first.records]
    assert ids == sorted(ids)
    assert first.records == second.records


def test_sweep_mode3_general_branch(grid):
    spec = parse_family_spec("mode:k=3,lo=0.02,hi=0.05,count=3")
    res = stability_sweep(generate_family(spec, grid), grid=grid,
                          params=spec.param_values(), spec=spec)
    assert not res.symmetric
    assert res.fitted_gamma <= 10.0
    for rec in res.records:
        assert rec.epsilon > 0.0
        assert rec.delta > 0.0


def test_sweep_empty_family_raises(grid):
    with pytest.raises(InsufficientData):
        stability_sweep([], grid=grid)
