import numpy as np
import pytest
from hypothesis import given, strategies as st

from aniso_solitons.anisotropy import (
    Tabulated,
    dual_eval,
    euclidean,
    l1,
    linf,
    polyhedral_from_wulff,
    smooth_norm,
    wulff_boundary,
)
from aniso_solitons.bowl import AbstractXi, EuclideanXi
from aniso_solitons.crystalline import (
    crystal_bowl_cone,
    crystal_bowl_cylinder,
    crystal_reaper,
    facet_speed_check,
)

from conftest import symmetric_polygons


def regular_wulff(n, offset):
    a = offset + 2 * np.pi * np.arange(n) / n
    return polyhedral_from_wulff(np.stack([np.cos(a), np.sin(a)], axis=1))


SQUARE = l1()
HEXAGON = regular_wulff(6, 0.0)  # bottom edge between 240 and 300 degrees is horizontal
OCTAGON = regular_wulff(8, np.pi / 8)


# -- polygonal reaper ------------------------------------------------------------------


def test_square_single_facet():
    R = crystal_reaper(phi=SQUARE)
    assert R.k == 1
    np.testing.assert_array_equal(R.normals, [[0.0, -1.0]])
    assert R.lengths[0] == 2.0
    assert R.width == 2.0
    np.testing.assert_array_equal(facet_speed_check(R), [1.0])


@pytest.mark.parametrize("phi, k", [(SQUARE, 1), (HEXAGON, 3), (OCTAGON, 3)], ids=["square", "hexagon", "octagon"])
def test_speeds_are_one(phi, k):
    R = crystal_reaper(phi=phi)
    assert R.k == k
    np.testing.assert_allclose(facet_speed_check(R), 1.0, rtol=0, atol=1e-12)
    np.testing.assert_allclose(facet_speed_check(R, phi), 1.0, rtol=0, atol=1e-12)
    assert R.is_convex()


def test_octagon_normals():
    R = crystal_reaper(phi=OCTAGON)
    angles = np.degrees(np.arctan2(R.normals[:, 1], R.normals[:, 0])) % 360
    np.testing.assert_allclose(angles, [225, 270, 315], atol=1e-9)


def test_hexagon_bottom_is_horizontal():
    R = crystal_reaper(phi=HEXAGON)
    np.testing.assert_allclose(R.normals[1], [0.0, -1.0], atol=1e-12)
    bottom = R.vertices[2:4]
    assert bottom[0, 1] == pytest.approx(0.0, abs=1e-12) and bottom[1, 1] == pytest.approx(0.0, abs=1e-12)


@given(symmetric_polygons(min_sides=2, max_sides=6))
def test_random_polygon_reaper(phi):
    R = crystal_reaper(phi=phi)
    L = -phi(R.normals) * R.deltas / R.normals[:, 1]
    np.testing.assert_allclose(R.lengths, L, rtol=1e-14)
    assert np.all(R.lengths > 0)
    np.testing.assert_allclose(facet_speed_check(R), 1.0, atol=1e-12)
    assert R.is_convex()
    # segments carry the normals in order
    seg = np.diff(R.vertices[1:-1], axis=0)
    length = np.linalg.norm(seg, axis=1)
    seg /= length[:, None]
    # near-vertical facets are very long, so short neighbours lose digits
    tol = 1e-12 + 16 * np.finfo(float).eps * np.abs(R.vertices).max() / length[:, None]
    assert np.all(np.abs(seg @ np.array([[0, -1], [1, 0]]) - R.normals) <= tol)
    # the polyline spans its width, lowest point at height 0, half-lines vertical
    assert R.vertices[1:-1, 1].min() == pytest.approx(0.0, abs=1e-12)
    assert R.vertices[-2, 0] - R.vertices[1, 0] == pytest.approx(R.width)
    assert R.vertices[0, 0] == R.vertices[1, 0] and R.vertices[-1, 0] == R.vertices[-2, 0]


def test_speed_scaling():
    R = crystal_reaper(phi=OCTAGON)
    L = R.lengths.copy()
    L[1] *= 2
    speeds = facet_speed_check(R.with_lengths(L))
    assert speeds[1] == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(speeds[[0, 2]], 1.0, atol=1e-12)
    np.testing.assert_allclose(facet_speed_check(R.with_lengths(3.0 * R.lengths)), 1 / 3, atol=1e-12)


def test_rejects_smooth_phi():
    with pytest.raises(ValueError):
        crystal_reaper(phi=euclidean())
    with pytest.raises(ValueError):
        crystal_reaper(phi=smooth_norm(l1(), 0.1))


def test_explicit_wulff_argument():
    W = wulff_boundary(OCTAGON)
    R1 = crystal_reaper(W, OCTAGON)
    R2 = crystal_reaper(phi=OCTAGON)
    np.testing.assert_array_equal(R1.vertices, R2.vertices)


def test_facet_table():
    rows = crystal_reaper(phi=HEXAGON).facet_table()
    assert len(rows) == 3
    assert set(rows[0]) == {"nu", "Delta", "L", "speed"}


# -- crystalline bowls ------------------------------------------------------------------


@pytest.mark.parametrize("N", range(2, 7))
def test_cone_radius(N):
    B = crystal_bowl_cone(None, N)
    assert B.r0 == N
    # Wulff curvature N / r0 of the core equals the speed
    assert N / B.r0 == 1


@pytest.mark.parametrize("N", range(2, 7))
def test_cylinder_radius(N):
    B = crystal_bowl_cylinder(None, N)
    assert B.r0 == pytest.approx(N, abs=1e-8)
    assert B.condition_residual <= 1e-8


@pytest.mark.parametrize("xi", [l1(), linf(), HEXAGON, Tabulated([0.0, 0.7, 1.9], [1.0, 1.3, 0.8])], ids=repr)
def test_cylinder_radius_polygon_xi(xi):
    B = crystal_bowl_cylinder(xi, 2)
    assert B.r0 == pytest.approx(2.0, abs=1e-8)


def test_cylinder_radius_abstract_xi():
    d = AbstractXi(4, np.linalg.norm, np.linalg.norm, EuclideanXi(4).wulff_volume * 2.5)
    assert crystal_bowl_cylinder(d, 4).r0 == pytest.approx(4.0, abs=1e-8)


def test_cylinder_profile_value():
    B = crystal_bowl_cylinder(None, 2)
    r0 = B.r0
    assert B.u(2 * r0) == pytest.approx(1.5 * r0**2 - r0, rel=1e-12)
    assert B.u(0.5 * r0) == 0.0


def test_cone_profile_values():
    B = crystal_bowl_cone(None, 3)
    assert B.u(1.5) == 1.5
    assert B.u(5.0) == pytest.approx((25 - 9) / 4 + 3)


@pytest.mark.parametrize("case", ["cylinder", "cone"])
@pytest.mark.parametrize("N", range(2, 7))
def test_junction(case, N):
    B = crystal_bowl_cylinder(None, N) if case == "cylinder" else crystal_bowl_cone(None, N)
    checks = B.junction_checks()
    assert checks["continuous"] and checks["convex"]
    inner, outer = B.slopes_at_junction()
    if case == "cone":
        assert inner == 1.0 and outer == pytest.approx(N / (N - 1))
    s = np.linspace(0, 3 * B.r0, 3001)
    u = B.u(s)
    assert np.all(np.diff(u, 2) >= -1e-12)
    # one-sided slopes from the formula
    h = 1e-7
    assert (B.u(B.r0 + h) - B.u(B.r0)) / h == pytest.approx(outer, abs=1e-5)
    assert (B.u(B.r0) - B.u(B.r0 - h)) / h == pytest.approx(inner, abs=1e-5)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_quadratic_coefficient(N):
    for B in (crystal_bowl_cylinder(None, N), crystal_bowl_cone(None, N)):
        assert B.quadratic_coefficient == 1 / (2 * (N - 1))
        s = 1e6
        assert B.u(s) / s**2 == pytest.approx(B.quadratic_coefficient, rel=1e-5)


def test_bowl_validation():
    with pytest.raises(ValueError):
        crystal_bowl_cone(None, 1)
    with pytest.raises(ValueError):
        crystal_bowl_cylinder(l1(), 3)


def test_cylinder_wulff_is_product():
    # F = |t| + |s| has dual max(|t|, |s|): the Wulff shape is W_xi x [-1, 1]
    q = np.array([[0.3, 1.0], [1.0, -0.2], [1.0, 1.0]])
    np.testing.assert_allclose(dual_eval(l1(), q), 1.0)
