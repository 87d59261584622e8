"""Norm calculus on the plane.

A planar norm is handled through its restriction to the unit circle,
``H(theta) = phi(cos theta, sin theta)``.  For a positively 1-homogeneous
function ``phi(p) = |p| H(theta)`` one has

* ``grad phi = H e_r + H' e_theta``,
* ``Hess phi = (H + H'') / |p| * e_theta (x) e_theta``,

so every second derivative is carried by the single angular density
``kappa = H + H''`` (the "curvature" of the norm).  In particular
``phi_xx(x, z) = kappa * z**2 / |p|**3``.

Points are arrays whose last axis has length 2, ordered ``(x, z)``.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, cKDTree

__all__ = [
    "NonSmoothNormError",
    "PlanarNorm",
    "Euclidean",
    "PNorm",
    "Scaled",
    "Polyhedral",
    "Tabulated",
    "Stretched",
    "FunctionNorm",
    "Smoothed",
    "WulffPolyline",
    "HProfile",
    "euclidean",
    "pnorm",
    "l1",
    "linf",
    "polyhedral_from_wulff",
    "norm_eval",
    "norm_grad",
    "phi_xx",
    "dual_eval",
    "wulff_boundary",
    "smooth_norm",
    "h_profile",
    "h_lemma_checks",
    "circle_max",
    "circle_min",
    "norm_from_spec",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SCAN = 1024
_ANGLE_TOL = 1e-10


class NonSmoothNormError(ValueError):
    """A second-order quantity was requested from a norm that lacks one."""


def _unit(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _polar(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 2:
        raise ValueError("points must have a trailing axis of length 2")
    r = np.hypot(p[..., 0], p[..., 1])
    theta = np.arctan2(p[..., 1], p[..., 0])
    return r, theta


class PlanarNorm:
    """Base class.  Subclasses implement ``radial`` at minimum."""

    kind = "abstract"
    smooth = False

    # -- evaluation -------------------------------------------------------
    def radial(self, theta):
        raise NotImplementedError

    def __call__(self, p):
        r, theta = _polar(p)
        return r * self.radial(theta)

    # -- derivatives ------------------------------------------------------
    def radial_d1(self, theta):
        h = 1e-6
        theta = np.asarray(theta, dtype=float)
        return (self.radial(theta + h) - self.radial(theta - h)) / (2 * h)

    def curvature(self, theta):
        """Angular density ``H + H''`` of the Hessian on the unit circle."""
        h = 2e-4
        theta = np.asarray(theta, dtype=float)
        H = self.radial(theta)
        d2 = (self.radial(theta + h) - 2 * H + self.radial(theta - h)) / h**2
        return H + d2

    def grad(self, p):
        r, theta = _polar(p)
        if np.any(r == 0):
            raise ValueError("the subdifferential at the origin is the whole dual unit ball")
        H = self.radial(theta)
        dH = self.radial_d1(theta)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([H * c - dH * s, H * s + dH * c], axis=-1)

    def hessian_xx(self, p):
        r, theta = _polar(p)
        z = np.asarray(p, dtype=float)[..., 1]
        return self.curvature(theta) * z**2 / r**3

    def phi_xx(self, t):
        """Second derivative of ``s -> phi(s, 1)`` at ``s = t``."""
        t = np.asarray(t, dtype=float)
        r = np.hypot(t, 1.0)
        return self.curvature(np.arctan2(1.0, t)) / r**3

    # -- misc -------------------------------------------------------------
    def to_dict(self):
        raise TypeError(f"{type(self).__name__} has no JSON representation")

    def __repr__(self):
        return f"{type(self).__name__}()"

    @cached_property
    def _ball_scan(self):
        theta = np.linspace(0.0, 2 * np.pi, _SCAN, endpoint=False)
        return theta, _unit(theta) / self.radial(theta)[:, None]


class Euclidean(PlanarNorm):
    kind = "euclidean"
    smooth = True

    def radial(self, theta):
        return np.ones_like(np.asarray(theta, dtype=float))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        return np.hypot(p[..., 0], p[..., 1])

    def radial_d1(self, theta):
        return np.zeros_like(np.asarray(theta, dtype=float))

    def curvature(self, theta):
        return np.ones_like(np.asarray(theta, dtype=float))

    def grad(self, p):
        p = np.asarray(p, dtype=float)
        r = self(p)
        if np.any(r == 0):
            raise ValueError("the subdifferential at the origin is the whole dual unit ball")
        return p / r[..., None]

    def phi_xx(self, t):
        t = np.asarray(t, dtype=float)
        return (1.0 + t * t) ** -1.5

    def to_dict(self):
        return {"kind": "euclidean"}


class PNorm(PlanarNorm):
    """``(|x|^p + |z|^p)^(1/p)`` for ``1 < p < inf``.

    Only ``p = 2`` satisfies the uniform-convexity requirement of the
    solvers; other exponents are flagged non-smooth and have to be routed
    through :func:`smooth_norm`.
    """

    kind = "pnorm"

    def __init__(self, p):
        p = float(p)
        if not 1.0 < p < math.inf:
            raise ValueError("PNorm needs 1 < p < inf; use l1() or linf() for the endpoints")
        self.p = p
        self.smooth = p == 2.0

    def radial(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self(_unit(theta))

    def __call__(self, p):
        p = np.abs(np.asarray(p, dtype=float))
        m = np.max(p, axis=-1)
        safe = np.where(m > 0, m, 1.0)
        q = p / safe[..., None]
        return m * np.sum(q**self.p, axis=-1) ** (1.0 / self.p)

    def grad(self, p):
        p = np.asarray(p, dtype=float)
        phi = self(p)
        if np.any(phi == 0):
            raise ValueError("the subdifferential at the origin is the whole dual unit ball")
        return np.sign(p) * (np.abs(p) / phi[..., None]) ** (self.p - 1.0)

    def to_dict(self):
        return {"kind": "pnorm", "p": self.p}

    def __repr__(self):
        return f"PNorm({self.p:g})"


class Scaled(PlanarNorm):
    kind = "scaled"

    def __init__(self, base, lam):
        lam = float(lam)
        if not lam > 0:
            raise ValueError("scale factor must be positive")
        self.base = base
        self.lam = lam
        self.smooth = base.smooth

    def radial(self, theta):
        return self.lam * self.base.radial(theta)

    def __call__(self, p):
        return self.lam * self.base(p)

    def radial_d1(self, theta):
        return self.lam * self.base.radial_d1(theta)

    def curvature(self, theta):
        return self.lam * self.base.curvature(theta)

    def grad(self, p):
        return self.lam * self.base.grad(p)

    def phi_xx(self, t):
        return self.lam * self.base.phi_xx(t)

    def to_dict(self):
        return {"kind": "scaled", "base": self.base.to_dict(), "lambda": self.lam}

    def __repr__(self):
        return f"Scaled({self.base!r}, {self.lam:g})"


class Polyhedral(PlanarNorm):
    """Norm whose unit ball is a centrally symmetric convex polygon.

    ``phi(p) = max_j a_j . p`` where the ``a_j`` are the vertices of the
    polar polygon, i.e. of the Wulff shape.  At a corner of ``phi`` the
    subgradient returned is the centroid of the active ``a_j``.
    """

    kind = "polyhedral"

    def __init__(self, vertices, *, symmetric_tol=1e-9):
        pts = np.asarray(vertices, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise ValueError("need at least three unit-ball vertices as (x, z) pairs")
        ball = self._hull(pts)
        self._check_symmetric(ball, symmetric_tol)
        self.ball_vertices = ball
        self.dual_vertices = self._polar_vertices(ball)

    @staticmethod
    def _hull(pts):
        hull = ConvexHull(pts)
        ball = pts[hull.vertices]
        # the origin must be strictly inside
        eq = hull.equations
        if not np.all(eq[:, 2] < -1e-12):
            raise ValueError("the origin must lie in the interior of the unit ball")
        return ball

    @staticmethod
    def _check_symmetric(ball, tol):
        if np.isinf(tol):
            return
        scale = np.max(np.abs(ball))
        dist, _ = cKDTree(ball).query(-ball)
        if np.max(dist) > tol * scale:
            raise ValueError("unit ball must be centrally symmetric")

    @staticmethod
    def _polar_vertices(ball):
        nxt = np.roll(ball, -1, axis=0)
        # a . b0 = a . b1 = 1, solved by Cramer's rule for every edge
        det = ball[:, 0] * nxt[:, 1] - ball[:, 1] * nxt[:, 0]
        return np.stack([nxt[:, 1] - ball[:, 1], ball[:, 0] - nxt[:, 0]], axis=1) / det[:, None]

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        return np.max(p @ self.dual_vertices.T, axis=-1)

    def radial(self, theta):
        return self(_unit(theta))

    def radial_d1(self, theta):
        theta = np.asarray(theta, dtype=float)
        g = self.grad(_unit(theta))
        return -g[..., 0] * np.sin(theta) + g[..., 1] * np.cos(theta)

    def grad(self, p):
        p = np.asarray(p, dtype=float)
        vals = p @ self.dual_vertices.T
        m = np.max(vals, axis=-1, keepdims=True)
        if np.any(m <= 0):
            raise ValueError("the subdifferential at the origin is the whole dual unit ball")
        active = vals >= m - 1e-12 * m
        weights = active / np.sum(active, axis=-1, keepdims=True)
        return weights @ self.dual_vertices

    def curvature(self, theta):
        raise NonSmoothNormError(
            f"{self.kind} norm has a measure-valued second derivative; smooth it first"
        )

    def phi_xx(self, t):
        return self.curvature(t)

    def hessian_xx(self, p):
        return self.curvature(p)

    def to_dict(self):
        return {"kind": "polyhedral", "vertices": self.ball_vertices.tolist()}

    def __repr__(self):
        return f"Polyhedral({len(self.ball_vertices)} vertices)"


class Tabulated(Polyhedral):
    """Unit ball given by radial samples ``(angle, radius)``.

    The ball is taken to be the convex hull of the samples and their
    reflections through the origin, which repairs non-convex or
    asymmetric input.  Between samples the boundary is the chord.
    """

    kind = "tabulated"

    def __init__(self, angles, radii):
        angles = np.asarray(angles, dtype=float)
        radii = np.asarray(radii, dtype=float)
        if angles.shape != radii.shape or angles.ndim != 1:
            raise ValueError("angles and radii must be 1-d arrays of equal length")
        if np.any(radii <= 0):
            raise ValueError("radii must be positive")
        self.angles = angles
        self.radii = radii
        pts = radii[:, None] * _unit(angles)
        super().__init__(np.vstack([pts, -pts]), symmetric_tol=np.inf)

    def to_dict(self):
        return {"kind": "tabulated", "angles": self.angles.tolist(), "radii": self.radii.tolist()}

    def __repr__(self):
        return f"Tabulated({len(self.angles)} samples)"


class Stretched(PlanarNorm):
    """``phi(x, z) = base(sx * x, sz * z)``."""

    kind = "stretched"

    def __init__(self, base, sx=1.0, sz=1.0):
        if not (sx > 0 and sz > 0):
            raise ValueError("stretch factors must be positive")
        self.base = base
        self.sx = float(sx)
        self.sz = float(sz)
        self.smooth = base.smooth

    def _map(self, p):
        p = np.asarray(p, dtype=float)
        return np.stack([self.sx * p[..., 0], self.sz * p[..., 1]], axis=-1)

    def __call__(self, p):
        return self.base(self._map(p))

    def radial(self, theta):
        return self(_unit(theta))

    def grad(self, p):
        g = self.base.grad(self._map(p))
        return np.stack([self.sx * g[..., 0], self.sz * g[..., 1]], axis=-1)

    def radial_d1(self, theta):
        theta = np.asarray(theta, dtype=float)
        g = self.grad(_unit(theta))
        return -g[..., 0] * np.sin(theta) + g[..., 1] * np.cos(theta)

    def curvature(self, theta):
        theta = np.asarray(theta, dtype=float)
        q = self._map(_unit(theta))
        rq, tq = _polar(q)
        tx, tz = -self.sx * np.sin(theta), self.sz * np.cos(theta)
        proj = -tx * np.sin(tq) + tz * np.cos(tq)
        return self.base.curvature(tq) / rq * proj**2

    def __repr__(self):
        return f"Stretched({self.base!r}, {self.sx:g}, {self.sz:g})"


class FunctionNorm(PlanarNorm):
    """Norm given by a vectorised callable; derivatives by finite differences."""

    kind = "function"

    def __init__(self, func, *, smooth=False, label="function"):
        self.func = func
        self.smooth = bool(smooth)
        self.label = label

    def __call__(self, p):
        return np.asarray(self.func(np.asarray(p, dtype=float)), dtype=float)

    def radial(self, theta):
        return self(_unit(theta))

    def __repr__(self):
        return f"FunctionNorm({self.label})"


class Smoothed(PlanarNorm):
    """Smooth, uniformly convex approximation of a planar norm.

    The restriction of ``base`` to the unit circle is convolved with a
    wrapped Gaussian of angular standard deviation ``eps`` (exactly, in
    Fourier space) giving ``m``; the result is
    ``sqrt((1 - eps) m^2 + eps |p|^2)``.  Convolution with a positive
    kernel keeps ``m + m''`` non-negative, and the added ``eps |p|^2``
    makes the square uniformly convex.
    """

    kind = "smoothed"
    smooth = True

    def __init__(self, base, eps, *, samples=None):
        eps = float(eps)
        if not 0.0 < eps < 1.0:
            raise ValueError("smoothing parameter must lie in (0, 1)")
        self.base = base
        self.eps = eps
        kmax = int(math.ceil(math.sqrt(2 * 40.0) / eps))
        if samples is None:
            samples = max(2**15, 1 << int(math.ceil(math.log2(8 * kmax))))
        theta = 2 * np.pi * np.arange(samples) / samples
        coef = np.fft.rfft(base.radial(theta)) / samples
        kmax = min(kmax, samples // 2 - 1)
        k = np.arange(kmax + 1)
        damp = np.exp(-0.5 * (eps * k) ** 2)
        self._k = k[1:].astype(float)
        self._a0 = coef[0].real
        self._A = 2 * coef[1 : kmax + 1].real * damp[1:]
        self._B = -2 * coef[1 : kmax + 1].imag * damp[1:]

    def _series(self, theta, chunk=4096):
        theta = np.asarray(theta, dtype=float)
        flat = theta.reshape(-1)
        m = np.empty_like(flat)
        m1 = np.empty_like(flat)
        m2 = np.empty_like(flat)
        k, A, B = self._k, self._A, self._B
        for i in range(0, flat.size, chunk):
            ph = np.outer(flat[i : i + chunk], k)
            c, s = np.cos(ph), np.sin(ph)
            m[i : i + chunk] = self._a0 + c @ A + s @ B
            m1[i : i + chunk] = (c @ (k * B)) - (s @ (k * A))
            m2[i : i + chunk] = -(c @ (k * k * A)) - (s @ (k * k * B))
        return m.reshape(theta.shape), m1.reshape(theta.shape), m2.reshape(theta.shape)

    def _radial_all(self, theta):
        m, m1, m2 = self._series(theta)
        e = self.eps
        H = np.sqrt((1 - e) * m * m + e)
        H1 = (1 - e) * m * m1 / H
        H2 = ((1 - e) * (m1 * m1 + m * m2) - H1 * H1) / H
        return H, H1, H2

    def radial(self, theta):
        m, _, _ = self._series(theta)
        return np.sqrt((1 - self.eps) * m * m + self.eps)

    def radial_d1(self, theta):
        return self._radial_all(theta)[1]

    def curvature(self, theta):
        H, _, H2 = self._radial_all(theta)
        return H + H2

    def grad(self, p):
        r, theta = _polar(p)
        if np.any(r == 0):
            raise ValueError("the subdifferential at the origin is the whole dual unit ball")
        H, H1, _ = self._radial_all(theta)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([H * c - H1 * s, H * s + H1 * c], axis=-1)

    def to_dict(self):
        d = dict(self.base.to_dict())
        d["smooth_eps"] = self.eps
        return d

    def __repr__(self):
        return f"Smoothed({self.base!r}, eps={self.eps:g})"


# -- constructors -------------------------------------------------------------


def euclidean():
    return Euclidean()


def pnorm(p):
    p = float(p)
    if p == 1.0:
        return l1()
    if math.isinf(p):
        return linf()
    return PNorm(p)


def l1():
    """``|x| + |z|``; its Wulff shape is the square with corners ``(+-1, +-1)``."""
    return Polyhedral([(1, 0), (0, 1), (-1, 0), (0, -1)])


def linf():
    return Polyhedral([(1, 1), (-1, 1), (-1, -1), (1, -1)])


def polyhedral_from_wulff(vertices):
    """The crystalline norm whose Wulff shape is the given polygon."""
    wulff = Polyhedral._hull(np.asarray(vertices, dtype=float))
    return Polyhedral(Polyhedral._polar_vertices(wulff))


# -- operations ---------------------------------------------------------------


def norm_eval(norm, p):
    return norm(p)


def norm_grad(norm, p):
    return norm.grad(p)


def phi_xx(norm, t):
    return norm.phi_xx(t)


def _golden_max(fun, lo, hi, tol=_ANGLE_TOL):
    """Vectorised golden-section maximisation on brackets ``[lo, hi]``."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    while np.max(hi - lo) > tol:
        right = f1 < f2
        lo = np.where(right, x1, lo)
        hi = np.where(right, hi, x2)
        new = np.where(right, lo + _GOLDEN * (hi - lo), hi - _GOLDEN * (hi - lo))
        fn = fun(new)
        x1, x2, f1, f2 = (
            np.where(right, x2, new),
            np.where(right, new, x1),
            np.where(right, f2, fn),
            np.where(right, fn, f1),
        )
    mid = 0.5 * (lo + hi)
    return mid, fun(mid)


def dual_eval(norm, q, *, chunk=2048):
    """Support function of the unit ``norm``-ball, ``sup_{phi(p)<=1} p.q``.

    Polyhedral norms are evaluated exactly over the ball vertices; other
    norms by a 1024-direction scan refined with golden-section search.
    """
    q = np.asarray(q, dtype=float)
    if isinstance(norm, Polyhedral):
        return np.max(q @ norm.ball_vertices.T, axis=-1)
    flat = q.reshape(-1, 2)
    out = np.empty(len(flat))
    theta, pts = norm._ball_scan
    step = theta[1] - theta[0]
    for i in range(0, len(flat), chunk):
        qq = flat[i : i + chunk]
        idx = np.argmax(qq @ pts.T, axis=1)
        t0 = theta[idx]

        def objective(t, qq=qq):
            return (np.cos(t) * qq[:, 0] + np.sin(t) * qq[:, 1]) / norm.radial(t)

        _, best = _golden_max(objective, t0 - step, t0 + step)
        out[i : i + chunk] = np.maximum(best, 0.0)
    return out.reshape(q.shape[:-1])


def circle_max(norm):
    """``max`` of ``norm`` over the Euclidean unit circle."""
    if isinstance(norm, Polyhedral):
        return float(np.max(np.linalg.norm(norm.dual_vertices, axis=1)))
    theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    i = int(np.argmax(norm.radial(theta)))
    d = theta[1] - theta[0]
    _, best = _golden_max(norm.radial, [theta[i] - d], [theta[i] + d])
    return float(max(best[0], norm.radial(theta[i])))


def circle_min(norm):
    """``min`` of ``norm`` over the Euclidean unit circle."""
    if isinstance(norm, Polyhedral):
        return float(1.0 / np.max(np.linalg.norm(norm.ball_vertices, axis=1)))
    theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    i = int(np.argmin(norm.radial(theta)))
    d = theta[1] - theta[0]
    _, best = _golden_max(lambda t: -norm.radial(t), [theta[i] - d], [theta[i] + d])
    return float(min(-best[0], norm.radial(theta[i])))


@dataclass(frozen=True)
class WulffPolyline:
    """Closed boundary of the Wulff shape ``{dual <= 1}``, counterclockwise."""

    points: np.ndarray
    closed: bool = True
    normals: np.ndarray | None = None
    edge_lengths: np.ndarray | None = None

    def area(self):
        x, z = self.points[:, 0], self.points[:, 1]
        return 0.5 * float(np.sum(x * np.roll(z, -1) - np.roll(x, -1) * z))

    def is_convex(self):
        e = np.roll(self.points, -1, axis=0) - self.points
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        return bool(np.all(cross >= -1e-14) or np.all(cross <= 1e-14))


def _polygon_edges(pts):
    e = np.roll(pts, -1, axis=0) - pts
    lengths = np.linalg.norm(e, axis=1)
    normals = np.stack([e[:, 1], -e[:, 0]], axis=1) / lengths[:, None]
    return normals, lengths


def wulff_boundary(norm, n=360):
    """Boundary of ``W = {q : dual(q) <= 1}``.

    Polyhedral norms give the exact polygon (with outward edge normals and
    edge lengths); otherwise ``n`` radial samples.
    """
    if isinstance(norm, Polyhedral):
        pts = norm.dual_vertices.copy()
        normals, lengths = _polygon_edges(pts)
        return WulffPolyline(pts, True, normals, lengths)
    if n < 8:
        raise ValueError("need at least 8 samples")
    u = _unit(np.linspace(0, 2 * np.pi, n, endpoint=False))
    pts = u / dual_eval(norm, u)[:, None]
    return WulffPolyline(pts, True)


def smooth_norm(norm, eps):
    if not eps > 0:
        raise ValueError("smoothing parameter must be positive")
    return Smoothed(norm, eps)


@dataclass(frozen=True)
class HProfile:
    t: np.ndarray
    h: np.ndarray
    dh: np.ndarray
    phi_10: float
    phi_01: float
    dh_plus0: float
    dh_minus0: float
    c1: float
    c2: float


def h_profile(norm, t_max=100.0, n=4001):
    """Tabulate ``h(t) = phi(t,1) - phi(1,0)|t|`` and the constants bounding
    ``phi_xx(t,1) phi(t,1)^3`` on ``[-t_max, t_max]``."""
    if not norm.smooth:
        raise NonSmoothNormError("h_profile needs a smooth norm")
    if t_max < 10 or n < 100:
        raise ValueError("need t_max >= 10 and n >= 100")
    t = np.linspace(-t_max, t_max, n)
    pts = np.stack([t, np.ones_like(t)], axis=1)
    phi10 = float(norm([1.0, 0.0]))
    phi01 = float(norm([0.0, 1.0]))
    h = norm(pts) - phi10 * np.abs(t)
    gx = norm.grad(pts)[:, 0]
    dh = gx - phi10 * np.sign(t)
    gx0 = float(norm.grad([0.0, 1.0])[0])
    w = norm.phi_xx(t) * norm(pts) ** 3
    return HProfile(t, h, dh, phi10, phi01, gx0 - phi10, gx0 + phi10, float(w.min()), float(w.max()))


def h_lemma_checks(hp, tol=1e-8):
    """The three properties of ``h`` plus the two-sided ``phi_xx`` bound.

    Convexity is checked separately on ``t < 0`` and ``t > 0``.
    """
    t, h, dh = hp.t, hp.h, hp.dh
    scale = 1.0 + np.abs(h).max()
    # h has a concave corner at 0 (its maximum), so convexity is per half-line
    second = []
    for side in (t < 0, t > 0):
        hs = h[side]
        second.append(hs[2:] - 2 * hs[1:-1] + hs[:-2])
    second = np.concatenate(second)
    tail = max(abs(h[0] / t[0]), abs(h[-1] / t[-1]))
    return {
        "c1_positive": hp.c1 > 0,
        "c1_le_c2": hp.c1 <= hp.c2,
        "convex": bool(np.all(second >= -tol * scale)),
        "h_over_t_small": bool(tail <= 2 * hp.phi_01 / abs(t[-1]) + tol),
        "dh_sign_pos": bool(np.all(dh[t > 0] <= tol)),
        "dh_sign_neg": bool(np.all(dh[t < 0] >= -tol)),
        "dh_plus0": -2 * hp.phi_10 - tol <= hp.dh_plus0 <= tol,
        "dh_minus0": -tol <= hp.dh_minus0 <= 2 * hp.phi_10 + tol,
        "h_bounds": bool(np.all(h <= hp.phi_01 + tol) and np.all(h >= -hp.phi_01 - tol)),
        "h0": bool(abs(h[np.argmin(np.abs(t))] - hp.phi_01) <= tol * scale),
    }


# -- JSON specs ---------------------------------------------------------------

_SHORTHAND = {"euclidean": euclidean, "l2": euclidean, "l1": l1, "linf": linf}


def norm_from_spec(spec):
    """Build a norm from a shorthand name or a JSON-like dict.

    Dict kinds: ``euclidean``, ``pnorm`` (``p``), ``scaled`` (``base``,
    ``lambda``), ``polyhedral`` (``vertices``, counterclockwise), and
    ``tabulated`` (``angles``, ``radii``).  Any kind accepts an optional
    ``smooth_eps``.
    """
    if isinstance(spec, str):
        try:
            return _SHORTHAND[spec.lower()]()
        except KeyError:
            raise ValueError(f"unknown norm shorthand {spec!r}") from None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("norm spec must be a name or an object with a 'kind'")
    kind = spec["kind"]
    if kind == "euclidean":
        norm = Euclidean()
    elif kind == "pnorm":
        norm = pnorm(spec["p"])
    elif kind == "scaled":
        norm = Scaled(norm_from_spec(spec["base"]), spec["lambda"])
    elif kind == "polyhedral":
        norm = Polyhedral(spec["vertices"])
    elif kind == "tabulated":
        norm = Tabulated(spec["angles"], spec["radii"])
    else:
        raise ValueError(f"unknown norm kind {kind!r}")
    eps = spec.get("smooth_eps")
    if eps is not None:
        norm = smooth_norm(norm, eps)
    return norm
