import numpy as np
import pytest
from hypothesis import given, strategies as st

from aniso_solitons.anisotropy import (
    NonSmoothNormError,
    Polyhedral,
    Scaled,
    Smoothed,
    Tabulated,
    circle_max,
    circle_min,
    dual_eval,
    euclidean,
    h_lemma_checks,
    h_profile,
    l1,
    linf,
    norm_eval,
    norm_from_spec,
    norm_grad,
    phi_xx,
    pnorm,
    polyhedral_from_wulff,
    smooth_norm,
    wulff_boundary,
)

from conftest import TEST_NORMS, dual_as_norm, plane_vectors, smooth_norms, symmetric_polygons

any_norms = st.one_of(
    smooth_norms(),
    symmetric_polygons(),
    st.sampled_from([euclidean(), l1(), linf(), pnorm(3.0)]),
)


# -- evaluation ----------------------------------------------------------------


def test_eval_examples():
    assert norm_eval(euclidean(), (3, 4)) == pytest.approx(5.0, abs=1e-15)
    assert norm_eval(l1(), (1, 1)) == pytest.approx(2.0, abs=1e-15)
    assert norm_eval(euclidean(), (6, 8)) == pytest.approx(2 * norm_eval(euclidean(), (3, 4)))
    assert norm_eval(linf(), (-2, 1.5)) == 2.0
    assert norm_eval(pnorm(3), (1, 1)) == pytest.approx(2 ** (1 / 3))


def test_eval_vectorised():
    p = np.random.default_rng(0).normal(size=(7, 3, 2))
    out = norm_eval(euclidean(), p)
    assert out.shape == (7, 3)
    np.testing.assert_allclose(out, np.linalg.norm(p, axis=-1), rtol=1e-14)


@given(any_norms, plane_vectors(), st.floats(-50, 50))
def test_homogeneity(norm, p, lam):
    p = np.asarray(p)
    lhs = norm_eval(norm, lam * p)
    rhs = abs(lam) * norm_eval(norm, p)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


@given(any_norms, plane_vectors(), plane_vectors())
def test_midpoint_convexity(norm, p, q):
    p, q = np.asarray(p), np.asarray(q)
    mid = norm_eval(norm, (p + q) / 2)
    assert mid <= (norm_eval(norm, p) + norm_eval(norm, q)) / 2 + 1e-12 * (1 + abs(mid))


@given(any_norms, plane_vectors())
def test_positivity(norm, p):
    assert norm_eval(norm, p) > 0
    assert norm_eval(norm, (0.0, 0.0)) == 0.0


# -- gradients -----------------------------------------------------------------


def test_grad_examples():
    np.testing.assert_allclose(norm_grad(euclidean(), (3, 4)), [0.6, 0.8], atol=1e-15)
    # centroid of the subdifferential {1} x [-1, 1]
    np.testing.assert_allclose(norm_grad(l1(), (2, 0)), [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(norm_grad(linf(), (1, 1)), [0.5, 0.5], atol=1e-15)


def test_grad_rejects_origin():
    for norm in (euclidean(), l1(), smooth_norm(pnorm(3), 0.2)):
        with pytest.raises(ValueError):
            norm_grad(norm, (0.0, 0.0))


@given(any_norms, plane_vectors())
def test_grad_odd(norm, p):
    p = np.asarray(p)
    np.testing.assert_allclose(norm_grad(norm, -p), -norm_grad(norm, p), atol=1e-12)


@given(any_norms, plane_vectors())
def test_euler_identity(norm, p):
    p = np.asarray(p)
    assert np.dot(norm_grad(norm, p), p) == pytest.approx(norm_eval(norm, p), rel=1e-8, abs=1e-8)


@given(smooth_norms(), plane_vectors(-3, 3))
def test_grad_matches_finite_differences(norm, p):
    p = np.asarray(p)
    h = 1e-6 * max(1.0, np.linalg.norm(p))
    fd = [
        (norm_eval(norm, p + h * e) - norm_eval(norm, p - h * e)) / (2 * h)
        for e in np.eye(2)
    ]
    np.testing.assert_allclose(norm_grad(norm, p), fd, atol=1e-5)


# -- phi_xx and the h-function -------------------------------------------------------


def test_phi_xx_euclidean():
    assert phi_xx(euclidean(), 0.0) == pytest.approx(1.0, rel=1e-12)
    assert phi_xx(euclidean(), 1.0) == pytest.approx(2 ** -1.5, rel=1e-12)
    t = np.linspace(-50, 50, 101)
    np.testing.assert_allclose(phi_xx(euclidean(), t), (1 + t * t) ** -1.5, rtol=1e-12)


def test_phi_xx_rejects_crystalline():
    for norm in (l1(), linf(), Tabulated([0.0, 1.0, 2.0], [1.0, 1.2, 0.9])):
        with pytest.raises(NonSmoothNormError):
            phi_xx(norm, 0.3)


@given(smooth_norms(), st.floats(-20, 20))
def test_phi_xx_matches_finite_differences(norm, t):
    h = 1e-3 * (1 + abs(t))
    fd = (norm_eval(norm, (t + h, 1)) - 2 * norm_eval(norm, (t, 1)) + norm_eval(norm, (t - h, 1))) / h**2
    assert phi_xx(norm, t) == pytest.approx(fd, rel=1e-4, abs=1e-8)


def test_lemma_bounds(test_norm):
    hp = h_profile(test_norm, t_max=100.0, n=4001)
    t = hp.t
    scaled = phi_xx(test_norm, t) * norm_eval(test_norm, np.stack([t, np.ones_like(t)], axis=1)) ** 3
    assert 0 < hp.c1 <= hp.c2
    assert np.all(scaled >= hp.c1 * (1 - 1e-12)) and np.all(scaled <= hp.c2 * (1 + 1e-12))
    assert all(h_lemma_checks(hp).values())


def test_h_profile_examples():
    hp = h_profile(euclidean(), t_max=10.0, n=201)
    i0 = np.argmin(np.abs(hp.t))
    assert hp.h[i0] == pytest.approx(1.0)
    assert hp.h[-1] / hp.t[-1] < 2 / hp.t[-1]
    np.testing.assert_allclose(hp.h, np.sqrt(1 + hp.t**2) - np.abs(hp.t), atol=1e-14)


def test_h_profile_preconditions():
    with pytest.raises(NonSmoothNormError):
        h_profile(l1())
    with pytest.raises(ValueError):
        h_profile(euclidean(), t_max=5.0)
    with pytest.raises(ValueError):
        h_profile(euclidean(), n=50)


@given(smooth_norms())
def test_h_lemma_properties(norm):
    hp = h_profile(norm, t_max=20.0, n=801)
    checks = h_lemma_checks(hp)
    assert all(checks.values()), checks


# -- duality and Wulff shapes --------------------------------------------------------


def test_dual_examples():
    assert dual_eval(euclidean(), (3, 4)) == pytest.approx(5.0, rel=1e-12)
    assert dual_eval(l1(), (2, -3)) == pytest.approx(3.0, rel=1e-12)
    assert dual_eval(linf(), (2, -3)) == pytest.approx(5.0, rel=1e-12)
    assert dual_eval(pnorm(3), (1, 1)) == pytest.approx(2 ** (2 / 3), rel=1e-9)


@given(any_norms, plane_vectors())
def test_dual_is_support_function(norm, q):
    # phi0(q) >= p.q / phi(p) for any p, with equality at the gradient direction
    q = np.asarray(q)
    theta = np.linspace(0, 2 * np.pi, 721)
    p = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    if isinstance(norm, Polyhedral):
        p = np.vstack([p, norm.ball_vertices])
    lower = np.max(p @ q / norm_eval(norm, p))
    d = dual_eval(norm, q)
    assert d >= lower * (1 - 1e-12)
    assert d <= lower * (1 + 1e-3)


INVOLUTION_NORMS = {**TEST_NORMS, "l1": l1(), "linf": linf(), "hexagon": Tabulated([0, 1.0472, 2.0944], [1, 1, 1])}


@pytest.mark.parametrize("name", sorted(INVOLUTION_NORMS))
def test_dual_involution(name):
    norm = INVOLUTION_NORMS[name]
    check = np.linspace(0, 2 * np.pi, 97)
    p = np.stack([np.cos(check), np.sin(check)], axis=1)
    np.testing.assert_allclose(dual_eval(dual_as_norm(norm), p), norm_eval(norm, p), rtol=1e-6)


def test_wulff_boundary_euclidean():
    W = wulff_boundary(euclidean(), 360)
    np.testing.assert_allclose(np.linalg.norm(W.points, axis=1), 1.0, atol=1e-12)
    assert W.area() == pytest.approx(np.pi, abs=1e-3)
    assert W.closed and W.is_convex()


def test_wulff_boundary_l1_is_exact_square():
    W = wulff_boundary(l1(), 8)
    corners = {tuple(np.round(p, 12)) for p in W.points}
    assert corners == {(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)}
    np.testing.assert_allclose(W.edge_lengths, 2.0)
    assert W.area() == pytest.approx(4.0)


def test_wulff_area_converges():
    norm = smooth_norm(pnorm(3), 0.2)
    areas = [wulff_boundary(norm, n).area() for n in (32, 128, 512)]
    assert abs(areas[2] - areas[1]) < abs(areas[1] - areas[0])


@given(any_norms)
def test_wulff_points_on_dual_sphere(norm):
    W = wulff_boundary(norm, 64)
    np.testing.assert_allclose(dual_eval(norm, W.points), 1.0, atol=1e-8)
    assert W.is_convex()


def test_polyhedral_from_wulff_roundtrip():
    hexagon = [(np.cos(a), np.sin(a)) for a in np.pi / 6 + np.arange(6) * np.pi / 3]
    phi = polyhedral_from_wulff(hexagon)
    W = wulff_boundary(phi)
    assert len(W.points) == 6
    np.testing.assert_allclose(dual_eval(phi, np.asarray(hexagon)), 1.0, atol=1e-12)


def test_polyhedral_validation():
    with pytest.raises(ValueError):
        Polyhedral([(1, 0), (0, 1), (-1, 0.2)])
    with pytest.raises(ValueError):
        Polyhedral([(1, 0), (2, 1)])


def test_tabulated_repairs_input():
    # a dent at angle 0.5 is removed by the hull
    norm = Tabulated([0.0, 0.5, 1.0, 2.0], [1.0, 0.3, 1.0, 1.0])
    p = np.array([np.cos(0.5), np.sin(0.5)])
    assert norm_eval(norm, p) < 1 / 0.3


# -- smoothing ---------------------------------------------------------------------


def circle_gap(a, b, n=4096):
    theta = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return np.max(np.abs(a.radial(theta) - b.radial(theta)))


@pytest.mark.parametrize("eps", [0.3, 0.1, 0.02])
def test_smoothing_euclidean_is_close(eps):
    assert circle_gap(smooth_norm(euclidean(), eps), euclidean()) <= 2 * eps


def test_smoothing_l1_converges():
    gaps = [circle_gap(smooth_norm(l1(), e), l1()) for e in (0.1, 0.05, 0.025)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_smoothing_rejects_bad_eps():
    for eps in (0.0, -0.1, 1.0):
        with pytest.raises(ValueError):
            smooth_norm(l1(), eps)


@given(symmetric_polygons(), st.floats(0.05, 0.5))
def test_smoothed_is_uniformly_convex(poly, eps):
    norm = smooth_norm(poly, eps)
    assert isinstance(norm, Smoothed) and norm.smooth
    theta = np.linspace(0, 2 * np.pi, 2001)
    assert np.all(norm.curvature(theta) > 0)


def test_circle_extremes():
    assert circle_max(l1()) == pytest.approx(np.sqrt(2), rel=1e-10)
    assert circle_min(l1()) == pytest.approx(1.0, rel=1e-10)
    assert circle_max(Scaled(euclidean(), 2.5)) == pytest.approx(2.5)


# -- JSON specs ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    [
        "euclidean",
        {"kind": "pnorm", "p": 3},
        {"kind": "scaled", "base": "euclidean", "lambda": 2},
        {"kind": "polyhedral", "vertices": [[1, 0], [0, 1], [-1, 0], [0, -1]]},
        {"kind": "tabulated", "angles": [0, 1, 2], "radii": [1, 1.1, 0.9]},
        {"kind": "pnorm", "p": 4, "smooth_eps": 0.2},
    ],
)
def test_norm_json_roundtrip(spec):
    norm = norm_from_spec(spec)
    again = norm_from_spec(norm.to_dict())
    p = np.random.default_rng(3).normal(size=(50, 2))
    np.testing.assert_allclose(norm_eval(again, p), norm_eval(norm, p), rtol=1e-14)


@pytest.mark.parametrize("spec", ["nope", {"kind": "weird"}, {"p": 2}, 3])
def test_norm_json_rejects(spec):
    with pytest.raises(ValueError):
        norm_from_spec(spec)
