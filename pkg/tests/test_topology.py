import math

import numpy as np
import pytest

from znmap.geometry import TWO_PI, from_polar, rotate, to_polar
from znmap.maps import MapSpec
from znmap.topology import (
    basin_raster,
    estimate_rotation,
    image_curve,
    sector_cycle_check,
    transversality_det,
    transversality_det_numeric,
)

K = 1.1
P_RADIUS = 1.0 / math.sqrt(K - 1.0)
F4 = MapSpec("f4", k=K)


# ---------------------------------------------------------------------------
# basin rasterization
# ---------------------------------------------------------------------------

def test_basin_all_converged_inside_contraction_disk():
    raster = basin_raster(F4, (-0.9, 0.9, -0.9, 0.9), 48, 48, budget=200)
    counts = raster.counts()
    assert counts["converged"] == 48 * 48


def test_basin_saturated_family_never_escapes():
    raster = basin_raster(MapSpec("hn", k=K, n=5), (-20.0, 20.0, -20.0, 20.0),
                          64, 64, budget=400, r_escape=1e3)
    assert raster.counts()["escaped"] == 0


def test_basin_pixel_at_periodic_point_undecided():
    window = (P_RADIUS - 0.5, P_RADIUS + 0.5, -0.5, 0.5)
    raster = basin_raster(F4, window, 1, 1, budget=100)
    assert raster.kinds[0, 0] == 0  # undecided


def test_basin_partition_invariance():
    window = (-1.0, 1.0, -1.0, 1.0)
    full = basin_raster(F4, window, 32, 32, budget=150)
    top = basin_raster(F4, (-1.0, 1.0, 0.0, 1.0), 32, 16, budget=150)
    bottom = basin_raster(F4, (-1.0, 1.0, -1.0, 0.0), 32, 16, budget=150)
    stitched = np.vstack([top.kinds, bottom.kinds])
    assert (stitched == full.kinds).all()


def test_basin_row_zero_is_top_of_window():
    # window straddling the contraction disk: top row far from origin
    raster = basin_raster(F4, (-0.2, 0.2, -8.0, 8.0), 4, 64, budget=40,
                          eps_in=1e-8, r_escape=1e6)
    ys = 8.0 - (np.arange(64) + 0.5) * 16.0 / 64
    assert abs(ys[0] - 7.875) < 1e-12
    # center pixels (|y| small) converge within the tiny budget, edge rows do not
    assert raster.kinds[32, 2] == 1
    assert raster.kinds[0, 2] == 0


# ---------------------------------------------------------------------------
# image curves and transversality
# ---------------------------------------------------------------------------

def test_image_curve_matches_closed_form():
    curve = image_curve(F4, 1.0, 360)
    for th, (px, py) in zip(curve.thetas, curve.points):
        assert math.hypot(px + 0.5 * K * math.sin(th) ** 3,
                          py - 0.5 * K * math.cos(th) ** 3) <= 1e-12


def test_image_curve_endpoints():
    curve = image_curve(F4, 1.0, 360)
    assert math.hypot(curve.points[0][0], curve.points[0][1] - 0.5 * K) <= 1e-12
    assert math.hypot(curve.points[90][0] + 0.5 * K, curve.points[90][1]) <= 1e-12


def test_image_curve_quarter_turn_symmetry():
    curve = image_curve(F4, 1.0, 360)
    for i in range(360):
        j = (i + 90) % 360
        rotated = rotate(tuple(curve.points[i]), 1, 4)
        assert math.hypot(curve.points[j][0] - rotated[0],
                          curve.points[j][1] - rotated[1]) <= 1e-12


def test_image_curve_order_five_cusps():
    n = 5
    curve = image_curve(MapSpec("fn", k=K, n=n), 1.0, 5 * 144)
    radii = np.hypot(curve.points[:, 0], curve.points[:, 1])
    # cusp parameters 2*m*pi/5 map onto the boundary rays with maximal radius
    for m in range(n):
        idx = m * 144
        assert abs(radii[idx] - 0.5 * K) <= 1e-12
        angle = to_polar(tuple(curve.points[idx]))[1]
        gap = abs(math.remainder(angle - TWO_PI * (m + 1) / n, TWO_PI))
        assert gap <= 1e-10
    assert radii.max() <= 0.5 * K + 1e-12


def test_image_curve_needs_samples():
    with pytest.raises(ValueError):
        image_curve(F4, 1.0, 3)


def test_transversality_values():
    assert transversality_det(K, 0.0) == 0.0
    assert abs(transversality_det(K, math.pi / 4) - 0.226875) <= 1e-12
    assert abs(transversality_det(K, math.pi / 2)) <= 1e-30


def test_transversality_positive_off_cusps():
    for th in np.linspace(0.05, TWO_PI - 0.05, 500):
        if min(abs(th - m * math.pi / 2) for m in range(5)) > 1e-2:
            assert transversality_det(K, th) > 0.0


def test_transversality_numeric_agrees():
    for th in (0.3, 0.8, 2.0, 4.5):
        assert abs(transversality_det(K, th)
                   - transversality_det_numeric(K, th)) <= 1e-8


# ---------------------------------------------------------------------------
# rotation numbers
# ---------------------------------------------------------------------------

def test_rotation_rigid_adapter():
    rot5 = lambda p: rotate(p, 1, 5)
    est = estimate_rotation(rot5, (1.0, 0.0), max_iters=50)
    assert abs(est.slope - 0.2) <= 1e-12
    assert est.rational == (1, 5)


def test_rotation_base_family():
    est = estimate_rotation(F4, (2.0, 0.0))
    assert est.rational == (1, 4)
    assert abs(est.slope - 0.25) <= 0.01


def test_rotation_order_six():
    est = estimate_rotation(MapSpec("fn", k=K, n=6), (2.0, 0.0))
    assert est.rational == (1, 6)
    assert abs(est.slope - 1.0 / 6.0) <= 0.01


def test_rotation_all_orders_both_families():
    offsets = (0.05, 0.10, 0.15, 0.20, 0.25)
    for n in range(2, 9):
        for family in ("fn", "hn"):
            spec = MapSpec(family, k=K, n=n)
            for j, off in enumerate(offsets):
                p0 = from_polar((6.0 + 0.5 * j,
                                 (j % n) * TWO_PI / n + off * TWO_PI / n))
                est = estimate_rotation(spec, p0, max_iters=200)
                assert est.rational == (1, n)
                assert abs(est.slope - 1.0 / n) <= 0.01


def test_rotation_rejects_origin_and_fast_collapse():
    with pytest.raises(ValueError):
        estimate_rotation(F4, (0.0, 0.0))
    with pytest.raises(RuntimeError, match="too fast"):
        estimate_rotation(F4, (0.01, 0.01))


# ---------------------------------------------------------------------------
# sector cycling
# ---------------------------------------------------------------------------

def test_sector_cycle_base_family():
    rep = sector_cycle_check(F4, 4, (1.0, 1.0), 12)
    assert rep["passed"]
    assert rep["sectors"][:4] == [1, 2, 3, 4]


def test_sector_cycle_order_six_from_periodic_point():
    rep = sector_cycle_check(MapSpec("fn", k=K, n=6), 6, (P_RADIUS, 0.0), 18)
    assert rep["passed"]
    assert rep["sectors"][:6] == [1, 2, 3, 4, 5, 6]


def test_sector_cycle_saturated_family():
    rep = sector_cycle_check(MapSpec("hn", k=K, n=5), 5, (7.0, 1.0), 40)
    assert rep["passed"]
