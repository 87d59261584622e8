"""Bowl solitons for cylindrical anisotropies ``phi(x, z) = F(xi(x), z)``.

With ``r = xi0(x)`` the translator reduces to an ODE for ``w = u'(r)``:

    w' = F_t(w,1) / F_tt(w,1) * (f(w) - (N-1)/r),   f(a) = 1 / (G(a,1) F_t(a,1)).

``f`` decreases from ``+inf`` to ``0``, so ``alpha(r) = f^{-1}((N-1)/r)`` is
well defined and bounds ``w`` from above.  The profile is obtained by
shooting from ``w(rho) = alpha(rho)/2`` and letting ``rho -> 0``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.special import gamma

from . import _kernels
from .anisotropy import (
    NonSmoothNormError,
    PlanarNorm,
    Polyhedral,
    _golden_max,
    _unit,
    dual_eval,
    smooth_norm,
    wulff_boundary,
)
from .tables import DEFAULT_NODES, bowl_table, eval_table

__all__ = [
    "ShootingError",
    "EuclideanXi",
    "PolygonXi",
    "AbstractXi",
    "CylindricalAnisotropy",
    "BowlProfile",
    "f_eval",
    "alpha_of_r",
    "bowl_profile",
    "bowl_rhs",
    "bowl_u_eval",
    "bowl_graph_eval",
    "growth_coefficient",
    "slope_coefficient",
    "polar_factor_check",
    "bowl_approx_limit",
]


class ShootingError(RuntimeError):
    """Shooting did not converge, or a bracket could not be found."""


# -- xi descriptors ------------------------------------------------------------


class EuclideanXi:
    """``xi = |.|`` on ``R^N``."""

    smooth = True

    def __init__(self, N):
        if int(N) != N or N < 2:
            raise ValueError("N must be an integer >= 2")
        self.N = int(N)

    def eval(self, x):
        return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)

    dual = eval

    @property
    def wulff_volume(self):
        return math.pi ** (self.N / 2) / gamma(self.N / 2 + 1)

    def perimeter(self, r):
        """``Per_xi({xi0 <= r})``, i.e. the area of the sphere of radius ``r``."""
        return self.N * self.wulff_volume * r ** (self.N - 1)

    def volume(self, r):
        return self.wulff_volume * r**self.N

    def __repr__(self):
        return f"EuclideanXi(N={self.N})"


class PolygonXi:
    """A planar norm used as ``xi`` (``N = 2``); exact for polygons."""

    N = 2

    def __init__(self, norm):
        self.norm = norm
        self.smooth = norm.smooth

    def eval(self, x):
        return self.norm(x)

    def dual(self, x):
        return dual_eval(self.norm, x)

    @property
    def wulff_volume(self):
        return wulff_boundary(self.norm, 4096).area()

    def perimeter(self, r):
        """``int xi(nu) dH^1`` over the boundary of ``r W``."""
        wb = wulff_boundary(self.norm, 4096)
        if wb.normals is None:
            nxt = np.roll(wb.points, -1, axis=0)
            e = nxt - wb.points
            lengths = np.linalg.norm(e, axis=1)
            normals = np.stack([e[:, 1], -e[:, 0]], axis=1) / lengths[:, None]
        else:
            normals, lengths = wb.normals, wb.edge_lengths
        return float(r * np.sum(self.norm(normals) * lengths))

    def volume(self, r):
        return self.wulff_volume * r * r

    def __repr__(self):
        return f"PolygonXi({self.norm!r})"


class AbstractXi:
    """User-supplied ``xi``, its dual and ``|W_{xi0}|``.

    Perimeter and volume of ``{xi0 <= r}`` follow from the scaling identities
    ``Per = N r^{N-1} |W|`` and ``|rW| = r^N |W|``.
    """

    def __init__(self, N, xi, xi_dual, wulff_volume, *, smooth=False):
        self.N = int(N)
        self._xi = xi
        self._dual = xi_dual
        self.wulff_volume = float(wulff_volume)
        self.smooth = smooth

    def eval(self, x):
        return np.asarray(self._xi(np.asarray(x, dtype=float)), dtype=float)

    def dual(self, x):
        return np.asarray(self._dual(np.asarray(x, dtype=float)), dtype=float)

    def perimeter(self, r):
        return self.N * self.wulff_volume * r ** (self.N - 1)

    def volume(self, r):
        return self.wulff_volume * r**self.N


def _check_even(norm, name):
    rng = np.random.default_rng(0)
    p = rng.normal(size=(64, 2))
    base = norm(p)
    for flip in ([-1, 1], [1, -1]):
        if not np.allclose(norm(p * flip), base, rtol=1e-9, atol=0):
            raise ValueError(f"{name} must be even in each argument")


@dataclass(frozen=True, eq=False)
class CylindricalAnisotropy:
    """``phi(x, z) = F(xi(x), z)`` and ``psi(x, z) = G(xi(x), z)``."""

    F: PlanarNorm
    G: PlanarNorm
    N: int = 2
    xi: object = None

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError("N must be an integer >= 2")
        if self.xi is None:
            object.__setattr__(self, "xi", EuclideanXi(self.N))
        elif isinstance(self.xi, PlanarNorm):
            if self.N != 2:
                raise ValueError("a planar xi needs N = 2")
            object.__setattr__(self, "xi", PolygonXi(self.xi))
        if self.xi.N != self.N:
            raise ValueError("xi descriptor dimension does not match N")
        _check_even(self.F, "F")
        _check_even(self.G, "G")

    def phi(self, x, z):
        x = np.asarray(x, dtype=float)
        return self.F(np.stack([self.xi.eval(x), np.broadcast_to(z, x.shape[:-1])], axis=-1))

    def psi(self, x, z):
        x = np.asarray(x, dtype=float)
        return self.G(np.stack([self.xi.eval(x), np.broadcast_to(z, x.shape[:-1])], axis=-1))


# -- f and alpha -----------------------------------------------------------------


def f_eval(F, G, alpha):
    """``f(alpha) = 1 / (G(alpha,1) F_t(alpha,1))`` for ``alpha > 0``."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise ValueError("f is defined for alpha > 0 only")
    p = np.stack([alpha, np.ones_like(alpha)], axis=-1)
    return 1.0 / (G(p) * F.grad(p)[..., 0])


def alpha_of_r(F, G, N, r, *, rtol=1e-12, max_grow=60):
    """Solve ``f(alpha) = (N-1)/r`` by bisection in ``log alpha``.

    The bracket starts at ``[1e-12, 1]`` and grows geometrically.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    y = (N - 1) / r
    lo = np.full(r.shape, 1e-12)
    hi = np.ones(r.shape)
    for _ in range(max_grow):
        bad = f_eval(F, G, lo) < y
        if not bad.any():
            break
        lo[bad] *= 1e-3
    else:
        raise ShootingError("could not bracket alpha from below")
    for _ in range(max_grow):
        bad = f_eval(F, G, hi) > y
        if not bad.any():
            break
        hi[bad] *= 10.0
    else:
        raise ShootingError("could not bracket alpha from above")
    a, b = np.log(lo), np.log(hi)
    while np.max(b - a) > rtol:
        m = 0.5 * (a + b)
        above = f_eval(F, G, np.exp(m)) > y
        a = np.where(above, m, a)
        b = np.where(above, b, m)
    out = np.exp(0.5 * (a + b))
    return float(out[0]) if scalar else out


def slope_coefficient(F, G, N):
    """Asymptotic slope ``1 / ((N-1) G(1,0) F(1,0))`` of ``w``."""
    return 1.0 / ((N - 1) * float(G([1.0, 0.0])) * float(F([1.0, 0.0])))


def growth_coefficient(F, G, N):
    """Coefficient ``1 / (2 (N-1) G(1,0) F(1,0))`` of the quadratic growth of ``u``."""
    return 0.5 * slope_coefficient(F, G, N)


# -- shooting --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BowlProfile:
    """Bowl profile ``w = u'`` on ``(0, R_max]``.

    ``alpha`` is the comparison curve on the same grid and ``slope`` the
    measured ``w(R_max) / R_max``.
    """

    r: np.ndarray
    w: np.ndarray
    dw: np.ndarray
    alpha: np.ndarray
    N: int
    rho: float
    slope: float
    rhos: list = field(default_factory=list)
    sup_diffs: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def r_max(self):
        return float(self.r[-1])


def _shoot(table, k, rho, w0, r_max, ode_tol, n_sub, integrate):
    r, w, dw, status, n_steps = integrate(
        table.pc, table.qc, table.lo, table.step, float(k),
        rho, w0, r_max, math.inf, ode_tol, 1e-14, n_sub, 1_000_000,
    )
    if status != _kernels.STATUS_DONE:
        raise ShootingError(f"integration from rho={rho:g} stopped with status {status}")
    return r, w, dw


def bowl_rhs(A, r, w, *, table_nodes=DEFAULT_NODES):
    """Right-hand side of the profile equation as integrated (spline tables)."""
    table = bowl_table(A.F, A.G, table_nodes)
    w = np.asarray(w, dtype=float)
    b = np.arctan(w)
    s = 1.0 + w * w
    return s * (eval_table(table, "p", b) - (A.N - 1) / np.asarray(r) * np.sqrt(s) * eval_table(table, "q", b))


def bowl_profile(
    A,
    R_max=100.0,
    tol=1e-6,
    *,
    rho0=1.0,
    max_refine=20,
    ode_tol=1e-10,
    n_sub=4,
    compare_from=1.0,
    w_small=1e-4,
    table_nodes=DEFAULT_NODES,
    backend=None,
):
    """Shoot for the bowl profile of a smooth cylindrical anisotropy.

    Starting points ``rho_k = rho0 2^-k`` with ``w(rho_k) = alpha(rho_k)/2``
    are integrated to ``R_max``.  Refinement stops once consecutive
    profiles differ by less than ``tol`` in sup-norm on
    ``[compare_from, R_max]`` and the first grid value of ``w`` is below
    ``w_small``.

    Returns
    -------
    BowlProfile
    """
    if not A.F.smooth:
        raise NonSmoothNormError("F must be smooth; see bowl_approx_limit")
    if R_max < 10:
        raise ValueError("R_max must be at least 10")
    table = bowl_table(A.F, A.G, table_nodes)
    integrate = _kernels.BACKENDS[backend] if backend else _kernels.integrate
    k = A.N - 1
    rhos, diffs = [], []
    prev = None
    for j in range(max_refine + 1):
        rho = rho0 * 2.0**-j
        w0 = 0.5 * alpha_of_r(A.F, A.G, A.N, rho)
        r, w, dw = _shoot(table, k, rho, w0, float(R_max), ode_tol, n_sub, integrate)
        rhos.append(rho)
        if prev is not None:
            s = r[r >= compare_from]
            d = np.max(np.abs(CubicHermiteSpline(*prev)(s) - CubicHermiteSpline(r, w, dw)(s)))
            diffs.append(float(d))
            if d < tol and w[0] < w_small:
                break
        prev = (r, w, dw)
    else:
        raise ShootingError(
            f"no convergence after {max_refine} refinements; last sup-differences {diffs[-3:]}"
        )
    alpha = alpha_of_r(A.F, A.G, A.N, r)
    diag = {"backend": backend or _kernels.BACKEND, "ode_tol": ode_tol, "tol": tol, "refinements": j}
    return BowlProfile(r, w, dw, alpha, A.N, rho, float(w[-1] / r[-1]), rhos, diffs, diag)


def bowl_u_eval(profile, A, s):
    """``u = int_0^s w(r) dr`` with ``w`` taken as 0 below the first grid point.

    ``s`` stands for ``xi0(x)``; the quadrature is the trapezoid rule with
    the endpoint slope correction (exact integral of the Hermite
    interpolant).
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("s = xi0(x) must be non-negative")
    if np.any(s > profile.r_max * (1 + 1e-12)):
        raise ValueError("s exceeds the computed range R_max")
    anti = CubicHermiteSpline(profile.r, profile.w, profile.dw).antiderivative()
    s_c = np.clip(s, profile.r[0], profile.r[-1])
    out = np.where(s <= profile.r[0], 0.0, anti(s_c) - anti(profile.r[0]))
    return float(out) if out.ndim == 0 else out


def bowl_graph_eval(profile, A, x):
    """``u(x)`` for ``x`` in ``R^N``."""
    return bowl_u_eval(profile, A, A.xi.dual(x))


# -- polar factorisation -----------------------------------------------------------


def _support_points(xi, q):
    """Maximisers of ``y . q`` over the unit ``xi``-ball."""
    q = np.asarray(q, dtype=float)
    if isinstance(xi, Polyhedral):
        v = xi.ball_vertices
        return v[np.argmax(q @ v.T, axis=1)]
    theta, pts = xi._ball_scan
    step = theta[1] - theta[0]
    t0 = theta[np.argmax(q @ pts.T, axis=1)]

    def obj(t):
        return (np.cos(t) * q[:, 0] + np.sin(t) * q[:, 1]) / xi.radial(t)

    t, _ = _golden_max(obj, t0 - step, t0 + step)
    return _unit(t) / xi.radial(t)[:, None]


def _slice_dual(phi3, h, q, scan=1024):
    """``sup { a q_0 + b q_1 : phi3(a h_i, b) <= 1 }`` row by row."""
    theta = np.linspace(0, 2 * np.pi, scan, endpoint=False)
    step = theta[1] - theta[0]

    def radial(t):
        c, s = np.cos(t), np.sin(t)
        if np.ndim(t) == 1:
            return phi3(c[:, None] * h, s)
        return phi3(c[..., None] * h[:, None, :], s)

    vals = (np.cos(theta)[None] * q[:, :1] + np.sin(theta)[None] * q[:, 1:]) / radial(
        np.broadcast_to(theta, (len(h), scan))
    )
    t0 = theta[np.argmax(vals, axis=1)]

    def obj(t):
        return (np.cos(t) * q[:, 0] + np.sin(t) * q[:, 1]) / radial(t)

    _, best = _golden_max(obj, t0 - step, t0 + step)
    return np.maximum(best, vals.max(axis=1))


def polar_factor_check(F, xi, samples=10_000, *, seed=0, chunk=2000):
    """Largest relative gap between ``phi0(x, z)`` and ``F0(xi0(x), z)``.

    For each sample the 3-D dual is evaluated on the vertical plane through
    the ``xi``-support point ``h`` of ``x``: with ``phi(y, s) = F(xi(y), s)``
    the slice norm is ``(a, b) -> phi(a h, b)`` and
    ``phi0(x, z) = sup_{phi(a h, b) <= 1} a xi0(x) + b z``.
    """
    xi_norm = xi if isinstance(xi, PlanarNorm) else xi.norm
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(samples, 2))
    z = rng.normal(size=samples)

    def phi3(y, s):
        return F(np.stack([xi_norm(y), np.broadcast_to(s, y.shape[:-1])], axis=-1))

    worst = 0.0
    for i in range(0, samples, chunk):
        xs, zs = x[i : i + chunk], z[i : i + chunk]
        h = _support_points(xi_norm, xs)
        s0 = dual_eval(xi_norm, xs)
        q = np.stack([s0, zs], axis=1)
        sliced = _slice_dual(phi3, h, q)
        exact = dual_eval(F, q)
        worst = max(worst, float(np.max(np.abs(sliced - exact) / exact)))
    return worst


# -- non-smooth factors --------------------------------------------------------------


def bowl_approx_limit(F, G, N, epsilons, *, R_max=100.0, tol=1e-6, xi=None):
    """Bowl profiles for ``smooth_norm`` approximations of ``F`` and ``G``.

    Returns the finest profile and a report with the measured slopes
    ``w(R)/R``, growth ratios ``u(R)/R^2``, and sup-differences of
    consecutive ``w`` on ``[1, R_max]``.
    """
    eps = [float(e) for e in epsilons]
    if len(eps) < 2 or any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise ValueError("need a decreasing sequence of smoothing parameters")
    profiles, slopes, growth = [], [], []
    for e in eps:
        Fe = F if F.smooth else smooth_norm(F, e)
        Ge = Fe if G is F else (G if G.smooth else smooth_norm(G, e))
        A = CylindricalAnisotropy(Fe, Ge, N, xi)
        p = bowl_profile(A, R_max, tol)
        profiles.append(p)
        slopes.append(p.slope)
        growth.append(bowl_u_eval(p, A, R_max) / R_max**2)
    diffs = []
    for p, q in zip(profiles, profiles[1:]):
        s = np.linspace(1.0, R_max, 4001)
        diffs.append(float(np.max(np.abs(
            CubicHermiteSpline(p.r, p.w, p.dw)(s) - CubicHermiteSpline(q.r, q.w, q.dw)(s)
        ))))
    report = {
        "epsilons": eps,
        "slopes": slopes,
        "growth": growth,
        "sup_diffs": diffs,
        "slope_limit": slope_coefficient(F, G, N),
        "growth_limit": growth_coefficient(F, G, N),
        "cauchy": all(d2 <= 0.9 * d1 for d1, d2 in zip(diffs, diffs[1:])),
    }
    return profiles[-1], report
