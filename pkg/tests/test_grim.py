import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aniso_solitons._kernels import BACKENDS
from aniso_solitons.anisotropy import NonSmoothNormError, Scaled, circle_min, euclidean, l1, pnorm, smooth_norm
from aniso_solitons.bowl import CylindricalAnisotropy
from aniso_solitons.grim import (
    GrimProfile,
    OutOfDomainError,
    approx_limit,
    f_values,
    interval_bound,
    profile_from_samples,
    reaper_nd_eval,
    reaper_profile,
    reaper_residual,
    sandwich_check,
    tilted_eval,
    tilted_slice_residual,
    wulff_inscription_check,
)

from conftest import smooth_norms

E = euclidean()


@pytest.fixture(scope="module")
def iso():
    return reaper_profile(E, E)


# -- isotropic closed forms ----------------------------------------------------------


def test_isotropic_v_is_tan(iso):
    s = np.linspace(-1.2, 1.2, 241)
    np.testing.assert_allclose(iso.v_at(s), np.tan(s), atol=1e-6)


def test_isotropic_u_is_log_cos(iso):
    s = np.linspace(-1.2, 1.2, 241)
    np.testing.assert_allclose(iso.u_at(s), -np.log(np.cos(s)), atol=1e-6)


def test_isotropic_interval(iso):
    assert iso.a == pytest.approx(-np.pi / 2, abs=1e-4)
    assert iso.b == pytest.approx(np.pi / 2, abs=1e-4)
    assert iso.interval_length == pytest.approx(np.pi, abs=1e-4)


@pytest.mark.parametrize("lam", [0.5, 1.7, 3.0])
def test_scaled_mobility_interval(lam):
    p = reaper_profile(E, Scaled(E, lam))
    assert p.interval_length == pytest.approx(lam * np.pi, abs=1e-4 * lam)


def test_f_is_one_for_isotropic():
    v = np.array([-1e5, -3.0, 0.0, 0.5, 40.0])
    np.testing.assert_allclose(f_values(E, E, v), 1.0, rtol=1e-10)


def test_initial_conditions(iso):
    i0 = np.nonzero(iso.x == 0)[0]
    assert len(i0) == 1
    assert iso.u[i0[0]] == 0.0 and iso.v[i0[0]] == 0.0


def test_out_of_domain(iso):
    with pytest.raises(OutOfDomainError):
        iso.u_at(2.0)


# -- preconditions -------------------------------------------------------------------


def test_rejects_nonsmooth():
    with pytest.raises(NonSmoothNormError):
        reaper_profile(l1(), l1())


@pytest.mark.parametrize("tol", [1e-13, 1e-2])
def test_rejects_tolerance(tol):
    with pytest.raises(ValueError):
        reaper_profile(E, E, tol=tol)


def test_rejects_zero_speed():
    with pytest.raises(ValueError):
        reaper_profile(E, E, 0.0)


# -- interval bound ----------------------------------------------------------------


def test_interval_bound_examples():
    assert interval_bound(E, E) == pytest.approx(8.0)
    assert interval_bound(l1(), l1()) == pytest.approx(8 * np.sqrt(2), rel=1e-10)


# -- invariants on random smooth pairs -------------------------------------------------


@settings(max_examples=12)
@given(smooth_norms(), smooth_norms())
def test_profile_invariants(phi, psi):
    p = reaper_profile(phi, psi)
    assert np.all(np.diff(p.v) > 0)
    slopes = np.diff(p.u) / np.diff(p.x)
    assert np.all(np.diff(slopes) >= -1e-8)
    assert p.a < 0 < p.b
    assert p.interval_length <= interval_bound(phi, psi) + 1e-6
    assert sandwich_check(p)
    res = reaper_residual(p, phi, psi)
    assert res.passed(1e-4, 1e-7), (res.max_residual, res.max_defect)
    assert len(res.spacing) == len(p.x) - 1


@settings(max_examples=8)
@given(smooth_norms(), st.floats(0.25, 4.0))
def test_dilation_covariance(phi, c):
    p1 = reaper_profile(phi, phi)
    pc = reaper_profile(phi, phi, c)
    s = np.linspace(0.9 * p1.x[0], 0.9 * p1.x[-1], 101)
    s = s[np.abs(p1.v_at(s)) < 50]
    np.testing.assert_allclose(pc.u_at(s / c), p1.u_at(s) / c, atol=1e-6)
    assert pc.interval_length == pytest.approx(p1.interval_length / c, rel=1e-9)


def test_dilation_c2_closed_form():
    p = reaper_profile(E, E, 2.0)
    s = np.linspace(-0.6, 0.6, 61)
    np.testing.assert_allclose(p.u_at(s), -np.log(np.cos(2 * s)) / 2, atol=1e-6)


def test_negative_speed_is_reflection(iso):
    p = reaper_profile(E, E, -1.0)
    s = np.linspace(-1.2, 1.2, 61)
    np.testing.assert_allclose(p.u_at(s), np.log(np.cos(s)), atol=1e-6)
    res = reaper_residual(p, E, E)
    assert res.max_residual <= 1e-4


@pytest.mark.parametrize("norm", [smooth_norm(pnorm(4), 0.2), smooth_norm(l1(), 0.1), Scaled(E, 2.0)], ids=repr)
def test_symmetry(norm):
    p = reaper_profile(norm, norm)
    s = np.linspace(0, 0.95 * min(-p.x[0], p.x[-1]), 51)
    s = s[np.abs(p.v_at(s)) < 1e3]
    np.testing.assert_allclose(p.v_at(-s), -p.v_at(s), atol=1e-8 * (1 + np.abs(p.v_at(s))).max())
    np.testing.assert_allclose(p.u_at(-s), p.u_at(s), atol=1e-8 * (1 + p.u_at(s).max()))


@pytest.mark.skipif(len(BACKENDS) < 2, reason="extension not built")
def test_backends_give_same_profile():
    phi = smooth_norm(pnorm(3), 0.3)
    a = reaper_profile(phi, phi, backend="python")
    b = reaper_profile(phi, phi, backend="compiled")
    np.testing.assert_allclose(a.x, b.x, rtol=1e-13)
    np.testing.assert_allclose(a.u, b.u, rtol=1e-12, atol=1e-15)


# -- residual --------------------------------------------------------------------------


def flat_profile(c):
    x = np.linspace(-1, 1, 41)
    z = np.zeros_like(x)
    return GrimProfile(x, z, z, -1.0, 1.0, c, z)


def test_residual_flat_plane():
    assert reaper_residual(flat_profile(0.0), E, E).max_residual == 0.0
    r = reaper_residual(flat_profile(1.0), E, E)
    np.testing.assert_allclose(r.residual, 1.0)


def test_residual_rejects_coarse_grid():
    x = np.linspace(-1, 1, 10)
    z = np.zeros_like(x)
    with pytest.raises(ValueError):
        reaper_residual(GrimProfile(x, z, z, -1.0, 1.0), E, E)


def test_residual_detects_perturbation(iso):
    u = iso.u.copy()
    u[len(u) // 3] += 0.1
    p = profile_from_samples(E, E, iso.x, iso.v, u)
    assert not reaper_residual(p, E, E).passed()


def test_profile_from_samples_roundtrip(iso):
    p = profile_from_samples(E, E, iso.x, iso.v, iso.u)
    assert p.interval_length == pytest.approx(iso.interval_length, abs=1e-9)
    assert reaper_residual(p, E, E).passed()


# -- Wulff inscription ------------------------------------------------------------


def test_inscription_isotropic(iso):
    rep = wulff_inscription_check(iso, E, 0.5, psi=E)
    assert rep.all_passed
    apex = np.argmin(np.abs(rep.x))
    assert rep.x[apex] == pytest.approx(0.0, abs=1e-12) and rep.passed[apex]


def test_inscription_degenerate(iso):
    assert wulff_inscription_check(iso, E, 0.0).all_passed


@pytest.mark.parametrize("c", [-0.1, 1.0, 2.0])
def test_inscription_rejects_scale(iso, c):
    with pytest.raises(ValueError):
        wulff_inscription_check(iso, E, c, psi=E)


@settings(max_examples=6)
@given(smooth_norms(), st.floats(0.1, 0.9))
def test_inscription_random(phi, frac):
    p = reaper_profile(phi, phi)
    assert wulff_inscription_check(p, phi, frac * circle_min(phi), psi=phi).all_passed


def test_inscription_fails_for_large_body(iso):
    # a disk of radius 3 cannot touch the isotropic reaper from inside
    assert not wulff_inscription_check(iso, E, 3.0).all_passed


# -- lifts ----------------------------------------------------------------------------


def test_nd_apex():
    e = np.array([0.6, 0.8, 0.0])
    assert reaper_nd_eval(E, E, e, np.array([0.8, -0.6, 5.0])) == pytest.approx(0.0, abs=1e-15)


def test_nd_closed_form():
    val = reaper_nd_eval(E, E, np.array([1.0, 0, 0]), np.array([0.5, 7, -3]))
    assert val == pytest.approx(-np.log(np.cos(0.5)), abs=1e-6)


ND_A = CylindricalAnisotropy(smooth_norm(pnorm(4), 0.3), E, 3)


@given(st.floats(-1.2, 1.2), st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_nd_ignores_orthogonal_part(s, a, b, c, d):
    # along a coordinate axis x.e is computed exactly, so the values agree bitwise
    e = np.array([1.0, 0.0, 0.0])
    assert reaper_nd_eval(ND_A, None, e, np.array([s, a, b])) == reaper_nd_eval(ND_A, None, e, np.array([s, c, d]))


@given(st.floats(-1.0, 1.0), st.floats(-10, 10), st.floats(-10, 10))
def test_nd_general_direction(s, a, b):
    e = np.array([1.0, 2.0, 2.0]) / 3
    w1 = np.array([2.0, -1.0, 0.0]) / np.sqrt(5)
    w2 = np.cross(e, w1)
    v1 = reaper_nd_eval(ND_A, None, e, s * e + a * w1 + b * w2)
    v2 = reaper_nd_eval(ND_A, None, e, s * e - b * w1 + a * w2)
    assert v1 == pytest.approx(v2, abs=1e-12)


def test_nd_out_of_domain():
    with pytest.raises(OutOfDomainError):
        reaper_nd_eval(E, E, np.array([1.0, 0.0]), np.array([2.0, 0.0]))


def test_tilted_zero_matches_nd():
    e, t = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    x = np.array([0.7, -2.0])
    assert tilted_eval(E, E, e, t, 0.0, x) == reaper_nd_eval(E, E, e, x)


@settings(max_examples=10)
@given(st.floats(-1.5, 1.5), st.floats(-5, 5))
def test_tilted_linear_term(lam, mu):
    e, t = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    x = np.array([0.3, 0.4])
    base = tilted_eval(E, E, e, t, lam, x)
    assert tilted_eval(E, E, e, t, lam, x + mu * t) == pytest.approx(base + lam * mu, abs=1e-12 * (1 + abs(base)))


@pytest.mark.parametrize("lam", [0.0, 0.5, -1.2])
def test_tilted_slice_residual(lam):
    phi = smooth_norm(pnorm(4), 0.3)
    e = np.array([1.0, 0.0, 0.0])
    t = np.array([0.6, 0.8, 0.0])
    rep = tilted_slice_residual(phi, phi, e, t, lam)
    assert rep.max_residual <= 1e-3


def test_tilted_cylindrical():
    A = CylindricalAnisotropy(smooth_norm(pnorm(3), 0.3), E, 2)
    rep = tilted_slice_residual(A, None, np.array([0.0, 1.0]), np.array([1.0, 0.0]), 0.8)
    assert rep.max_residual <= 1e-3


# -- smoothing sweep ------------------------------------------------------------------


def test_approx_smooth_input_is_stable():
    _, rep = approx_limit(E, E, [0.04, 0.02, 0.01])
    assert max(rep.hausdorff_diffs) < 0.02
    assert rep.within_bound
    assert all(L == pytest.approx(np.pi, rel=0.05) for L in rep.interval_lengths)


@pytest.mark.parametrize("eps", [[0.2, 0.1], [0.1, 0.2, 0.05], [0.2, 0.1, 0.0]])
def test_approx_rejects_sequences(eps):
    with pytest.raises(ValueError):
        approx_limit(l1(), l1(), eps)
