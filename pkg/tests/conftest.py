import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from aniso_solitons.anisotropy import (
    Polyhedral,
    Scaled,
    Tabulated,
    euclidean,
    l1,
    linf,
    dual_eval,
    pnorm,
    smooth_norm,
    wulff_boundary,
)

settings.register_profile(
    "default",
    max_examples=20,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def polygon_norm(angles, radii):
    return Tabulated(np.asarray(angles), np.asarray(radii))


@st.composite
def symmetric_polygons(draw, min_sides=2, max_sides=5):
    """Centrally symmetric polygon norms from random radial samples."""
    k = draw(st.integers(min_sides, max_sides))
    gaps = draw(st.lists(st.floats(0.2, 1.0), min_size=k, max_size=k))
    start = draw(st.floats(0.0, np.pi / k))
    angles = start + np.pi * np.cumsum(gaps) / np.sum(gaps) - np.pi * gaps[0] / np.sum(gaps)
    radii = draw(st.lists(st.floats(0.6, 1.5), min_size=k, max_size=k))
    return polygon_norm(angles, radii)


@st.composite
def even_polygons(draw, max_sides=3, radii=(0.6, 1.5), axes=False):
    """Polygon norms symmetric under both axis reflections.

    With ``axes`` the unit ball also has vertices on both coordinate axes,
    which bounds the ratio of the norm's extremes on the circle.
    """
    k = draw(st.integers(1, max_sides))
    angles = np.sort(draw(st.lists(st.floats(0.1, np.pi / 2 - 0.1), min_size=k, max_size=k, unique=True)))
    r = draw(st.lists(st.floats(*radii), min_size=k, max_size=k))
    angles = np.concatenate([angles, np.pi - angles])
    r = np.concatenate([r, r])
    if axes:
        angles = np.concatenate([angles, [0.0, np.pi / 2]])
        r = np.concatenate([r, draw(st.lists(st.floats(*radii), min_size=2, max_size=2))])
    return polygon_norm(angles, r)


@st.composite
def smooth_norms(draw):
    """Smooth, uniformly convex norms: smoothed polygons, p-norms, scaled euclidean."""
    kind = draw(st.sampled_from(["polygon", "pnorm", "scaled"]))
    eps = draw(st.floats(0.15, 0.4))
    if kind == "polygon":
        return smooth_norm(draw(symmetric_polygons()), eps)
    if kind == "pnorm":
        return smooth_norm(pnorm(draw(st.floats(1.2, 6.0))), eps)
    return Scaled(euclidean(), draw(st.floats(0.5, 2.0)))


@st.composite
def even_smooth_norms(draw, moderate=False):
    """Smooth norms even in each argument.

    ``moderate`` limits the anisotropy contrast.  The bowl slope reaches
    its asymptote on a radius scale that grows with the contrast, so
    fixed-radius asymptotic checks use the moderate family.
    """
    kind = draw(st.sampled_from(["polygon", "pnorm", "scaled"]))
    eps = draw(st.floats(0.2, 0.4))
    if kind == "polygon":
        radii = (0.8, 1.25) if moderate else (0.6, 1.5)
        return smooth_norm(draw(even_polygons(radii=radii, axes=moderate)), eps)
    if kind == "pnorm":
        return smooth_norm(pnorm(draw(st.floats(1.5, 4.0) if moderate else st.floats(1.2, 6.0))), eps)
    return Scaled(euclidean(), draw(st.floats(0.7, 1.4) if moderate else st.floats(0.5, 2.0)))


def plane_vectors(lo=-10.0, hi=10.0):
    return st.tuples(st.floats(lo, hi), st.floats(lo, hi)).filter(lambda p: np.hypot(*p) > 1e-3)


def dual_as_norm(norm):
    """The dual norm as a norm object: exact polygon or chord tabulation."""
    if isinstance(norm, Polyhedral):
        return Polyhedral(wulff_boundary(norm).points)
    theta = np.linspace(0, np.pi, 8192, endpoint=False)
    q = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return Tabulated(theta, 1.0 / dual_eval(norm, q))


TEST_NORMS = {
    "euclidean": euclidean(),
    "p3_smoothed": smooth_norm(pnorm(3), 0.2),
    "l1_smoothed": smooth_norm(l1(), 0.2),
    "linf_smoothed": smooth_norm(linf(), 0.2),
    "scaled": Scaled(euclidean(), 1.7),
    "hexagon_smoothed": smooth_norm(
        Tabulated(np.arange(3) * np.pi / 3, np.ones(3)), 0.25
    ),
}


@pytest.fixture(params=sorted(TEST_NORMS))
def test_norm(request):
    return TEST_NORMS[request.param]
