"""Grim reapers: planar translators on a bounded interval and their lifts.

The profile ``u`` solves ``psi(-u',1) phi_xx(-u',1) u'' = c`` with
``u(0) = u'(0) = 0``.  Writing ``v = u'`` and
``f(v) = (1 + v^2) psi(-v,1) phi_xx(-v,1)`` this is

    v' = c (1 + v^2) / f(v),

whose solution blows up at both ends of the maximal interval ``(a, b)``.
In the angle ``beta = atan v`` one has ``f = Psi * kappa_phi`` evaluated at
``pi/2 + beta``, a bounded function, so ``|I| = int f dbeta / c`` over
``(-pi/2, pi/2)``.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from . import _kernels
from .anisotropy import (
    FunctionNorm,
    NonSmoothNormError,
    PlanarNorm,
    Stretched,
    circle_max,
    circle_min,
    smooth_norm,
    wulff_boundary,
)
from .tables import DEFAULT_NODES, grim_table

__all__ = [
    "ProfileError",
    "OutOfDomainError",
    "GrimProfile",
    "ResidualReport",
    "InscriptionReport",
    "ConvergenceReport",
    "f_values",
    "reaper_profile",
    "profile_from_samples",
    "interval_bound",
    "sandwich_check",
    "reaper_residual",
    "wulff_inscription_check",
    "planar_slice",
    "reaper_nd_eval",
    "tilted_norms",
    "tilted_eval",
    "tilted_slice_residual",
    "approx_limit",
]

V_MAX = 1e6


class ProfileError(RuntimeError):
    """The integrator did not reach the blow-up threshold."""


class OutOfDomainError(ValueError):
    """Evaluation point outside the maximal interval."""


@dataclass(frozen=True, eq=False)
class GrimProfile:
    """Planar translator sampled on an adaptive grid.

    ``x`` is increasing; ``v = u'`` and ``dv = v'``.  ``(a, b)`` is the
    estimated maximal interval, i.e. the last grid point plus the
    extrapolated tail on each side.
    """

    x: np.ndarray
    v: np.ndarray
    u: np.ndarray
    a: float
    b: float
    c: float = 1.0
    dv: np.ndarray | None = None
    phi_label: str = ""
    psi_label: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def interval_length(self):
        return self.b - self.a

    def u_at(self, s):
        """Cubic Hermite interpolant of ``u`` (exact slopes at the nodes)."""
        s = np.asarray(s, dtype=float)
        if np.any((s < self.x[0]) | (s > self.x[-1])):
            raise OutOfDomainError("point outside the resolved part of the interval")
        return CubicHermiteSpline(self.x, self.u, self.v)(s)

    def v_at(self, s):
        s = np.asarray(s, dtype=float)
        if np.any((s < self.x[0]) | (s > self.x[-1])):
            raise OutOfDomainError("point outside the resolved part of the interval")
        if self.dv is None:
            return CubicHermiteSpline(self.x, self.u, self.v).derivative()(s)
        return CubicHermiteSpline(self.x, self.v, self.dv)(s)


@dataclass(frozen=True)
class ResidualReport:
    """Residual of the translator equation on the interior grid points.

    ``max_residual`` is ``max |psi (phi_x(-u',1))' + c|``; ``max_defect`` is
    the largest mismatch between the stored ``u`` increments and the
    quadrature of the stored ``v``.
    """

    max_residual: float
    location: float
    spacing: np.ndarray
    residual: np.ndarray
    max_defect: float = 0.0
    defect_location: float = float("nan")

    def passed(self, tol=1e-4, defect_tol=1e-7):
        return bool(self.max_residual <= tol and self.max_defect <= defect_tol)


@dataclass(frozen=True)
class InscriptionReport:
    x: np.ndarray
    passed: np.ndarray
    min_gap: np.ndarray

    @property
    def all_passed(self):
        return bool(np.all(self.passed))


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of the smoothing sweep in ``approx_limit``.

    Two sets of measures are kept.  The global ones compare whole profiles:
    ``interval_lengths`` (``b - a``) and ``sup_diffs`` (``max |u_k - u_{k+1}|``
    on the common resolved interval).  The local ones only look at the part
    of each graph below ``height``: ``window_widths`` (width of
    ``{u <= height}``) and ``hausdorff_diffs`` (Hausdorff distance of
    consecutive cut graphs).  ``*_limit`` values extrapolate the last two
    entries linearly to ``eps = 0``.
    """

    epsilons: list
    interval_lengths: list
    sup_diffs: list
    window_widths: list
    hausdorff_diffs: list
    bounds: list
    height: float
    cauchy: bool
    cauchy_local: bool
    within_bound: bool
    length_limit: float
    width_limit: float

    def to_dict(self):
        out = {}
        for key, val in self.__dict__.items():
            if isinstance(val, list):
                out[key] = [float(x) for x in val]
            elif isinstance(val, (bool, np.bool_)):
                out[key] = bool(val)
            else:
                out[key] = float(val)
        return out


# -- solver --------------------------------------------------------------------


def f_values(phi, psi, v):
    """``f(v) = (1 + v^2) psi(-v,1) phi_xx(-v,1)``, in angular form."""
    theta = np.arctan2(1.0, -np.asarray(v, dtype=float))
    return psi.radial(theta) * phi.curvature(theta)


def _hermite_increments(x, v, dv):
    h = np.diff(x)
    return h * (v[:-1] + v[1:]) / 2 + h * h * (dv[:-1] - dv[1:]) / 12


def reaper_profile(
    phi,
    psi,
    c=1.0,
    tol=1e-10,
    *,
    v_max=V_MAX,
    n_sub=8,
    max_steps=200_000,
    table_nodes=DEFAULT_NODES,
    backend=None,
):
    """Solve the grim reaper equation for a smooth anisotropy.

    Parameters
    ----------
    phi, psi : PlanarNorm
        Anisotropy (must be smooth) and mobility.
    c : float
        Nonzero translation speed.  Profiles for ``c != 1`` are dilations of
        the ``c = 1`` profile.
    tol : float
        Relative tolerance of the integrator, in ``[1e-12, 1e-3]``.
    v_max : float
        Blow-up threshold; the rest of the interval is added by quadrature.

    Returns
    -------
    GrimProfile
    """
    if not phi.smooth:
        raise NonSmoothNormError("phi is not smooth; use smooth_norm or approx_limit")
    if not 1e-12 <= tol <= 1e-3:
        raise ValueError("tol must lie in [1e-12, 1e-3]")
    c = float(c)
    if c == 0 or not math.isfinite(c):
        raise ValueError("c must be a nonzero finite number")
    table = grim_table(phi, psi, table_nodes)
    integrate = _kernels.BACKENDS[backend] if backend else _kernels.integrate
    f_nodes = 1.0 / table.p
    f_lo, f_hi = float(f_nodes.min()), float(f_nodes.max())
    # each branch is shorter than pi/2 * max f
    span = 0.5 * np.pi * f_hi * 1.05 + 1.0

    branches = []
    for sign in (-1.0, 1.0):
        xs, vs, dvs, status, n_steps = integrate(
            table.pc, table.qc, table.lo, table.step, 0.0,
            0.0, 0.0, sign * span, v_max, tol, 1e-12, n_sub, max_steps,
        )
        if status != _kernels.STATUS_STOP:
            raise ProfileError(f"integration stopped with status {status} after {n_steps} steps")
        branches.append((xs, vs, dvs, n_steps))

    (xl, vl, dvl, nl), (xr, vr, dvr, nr) = branches
    x = np.concatenate([xl[::-1], xr[1:]])
    v = np.concatenate([vl[::-1], vr[1:]])
    dv = np.concatenate([dvl[::-1], dvr[1:]])
    i0 = len(xl) - 1
    du = _hermite_increments(x, v, dv)
    u = np.empty_like(x)
    u[i0] = 0.0
    u[i0 + 1 :] = np.cumsum(du[i0:])
    u[:i0] = -np.cumsum(du[:i0][::-1])[::-1]

    tail_left = _tail_end(phi, psi, v[0])
    tail_right = _tail_end(phi, psi, v[-1])
    a = x[0] - tail_left
    b = x[-1] + tail_right

    diag = {
        "status": "v_max reached",
        "v_max": float(v_max),
        "tail_left": tail_left,
        "tail_right": tail_right,
        "f_min": f_lo,
        "f_max": f_hi,
        "steps": int(nl + nr),
        "backend": backend or _kernels.BACKEND,
        "tol": float(tol),
    }
    if c != 1.0:
        x, u, dv, a, b = x / c, u / c, dv * c, a / c, b / c
        if c < 0:
            x, v, u, dv = x[::-1].copy(), v[::-1].copy(), u[::-1].copy(), dv[::-1].copy()
            a, b = b, a
    return GrimProfile(x, v, u, float(a), float(b), c, dv, repr(phi), repr(psi), diag)


def _tail_end(phi, psi, v_end):
    """Interval length beyond the last grid value ``v_end`` of one branch."""
    width = math.atan2(1.0, abs(v_end))  # pi/2 - atan|v|, without cancellation
    nodes, weights = np.polynomial.legendre.leggauss(16)
    s = 0.5 * width * (nodes + 1.0)
    # theta = pi/2 + beta runs over (pi - width, pi) or (0, width)
    theta = np.pi - s if v_end > 0 else s
    return float(0.5 * width * np.sum(weights * psi.radial(theta) * phi.curvature(theta)))


def profile_from_samples(phi, psi, x, v, u, c=1.0, table_nodes=DEFAULT_NODES):
    """Rebuild a ``GrimProfile`` from stored ``(x, v, u)`` samples.

    The interval ends are re-estimated from the end values of ``v`` and
    ``v'`` is taken from the equation.
    """
    x, v, u = (np.asarray(a, dtype=float) for a in (x, v, u))
    c = float(c)
    dv = c * (1.0 + v * v) / f_values(phi, psi, v)
    a = x[0] - _tail_end(phi, psi, v[0]) / abs(c)
    b = x[-1] + _tail_end(phi, psi, v[-1]) / abs(c)
    f_nodes = 1.0 / grim_table(phi, psi, table_nodes).p
    diag = {"f_min": float(f_nodes.min()), "f_max": float(f_nodes.max())}
    return GrimProfile(x, v, u, float(a), float(b), c, dv, repr(phi), repr(psi), diag)


def interval_bound(phi, psi):
    """``4 (phi(1,0) + phi(0,1)) max_{S^1} psi``."""
    return 4.0 * (float(phi([1.0, 0.0])) + float(phi([0.0, 1.0]))) * circle_max(psi)


def sandwich_check(profile, tol=1e-8):
    """Check ``tan(x/c2) <= v <= tan(x/c1)`` on the positive branch.

    ``c1, c2`` are the extremes of ``f`` recorded by the solver and ``x`` is
    measured in units of the ``c = 1`` profile.  The comparison is made in
    the form ``x/c2 <= atan v <= x/c1``, which stays well conditioned near
    the blow-up.
    """
    c1, c2 = profile.diagnostics["f_min"], profile.diagnostics["f_max"]
    xs = profile.x * profile.c
    # v_c(x) = v_1(c x)
    beta = np.arctan(profile.v)
    pos = xs > 0
    xs, beta = xs[pos], beta[pos]
    return bool(np.all(xs / c2 <= beta + tol) and np.all(beta <= xs / c1 + tol))


# -- verification --------------------------------------------------------------


def _three_point(x, y):
    h1 = x[1:-1] - x[:-2]
    h2 = x[2:] - x[1:-1]
    return (
        -h2 / (h1 * (h1 + h2)) * y[:-2]
        + (h2 - h1) / (h1 * h2) * y[1:-1]
        + h1 / (h2 * (h1 + h2)) * y[2:]
    )


def reaper_residual(profile, phi, psi, c=None):
    """Residual ``psi(-u',1) (phi_x(-u',1))' + c`` on the profile grid.

    The derivative of the flux is expanded by the chain rule,
    ``(phi_x(-v,1))' = -phi_xx(-v,1) v'``, and ``v'`` is taken from the
    stored ``v`` with the three-point rule for uneven spacing.  (Differencing
    the flux directly loses all digits near the blow-up, where it saturates.)
    The increments of ``u`` are checked against the Hermite quadrature of
    ``v`` with slopes taken from the equation itself.
    """
    if not phi.smooth:
        raise NonSmoothNormError("residual needs a smooth anisotropy")
    x = np.asarray(profile.x, dtype=float)
    v = np.asarray(profile.v, dtype=float)
    u = np.asarray(profile.u, dtype=float)
    if len(x) < 18:
        raise ValueError("grid too coarse: need at least 16 interior points")
    if np.any(np.diff(x) <= 0):
        raise ValueError("grid must be strictly increasing")
    c = profile.c if c is None else float(c)
    # psi(-v,1) phi_xx(-v,1) = f(v) / (1 + v^2)
    weight = f_values(phi, psi, v[1:-1]) / (1.0 + v[1:-1] ** 2)
    res = c - weight * _three_point(x, v)
    i = int(np.argmax(np.abs(res)))

    dv = c * (1.0 + v * v) / f_values(phi, psi, v)
    defect = np.abs(np.diff(u) - _hermite_increments(x, v, dv)) / (1.0 + np.abs(u[1:]))
    j = int(np.argmax(defect))
    return ResidualReport(
        float(np.abs(res[i])), float(x[i + 1]), np.diff(x), res, float(defect[j]), float(x[j + 1])
    )


def wulff_inscription_check(profile, phi, c, *, psi=None, points=41, wulff_samples=720, v_cap=10.0, tol=1e-9):
    """Touch ``c W`` to the graph from above at sample points and test containment.

    At ``p = (x, u(x))`` the body ``p - c grad phi(u', -1) + c W`` touches the
    graph at ``p``; it must lie in the epigraph.  ``c`` is the Wulff scale,
    which needs ``0 < c < min_{S^1} psi`` when ``psi`` is given.
    """
    c = float(c)
    xs = np.linspace(0, 1, points)
    if c == 0.0:
        return InscriptionReport(xs, np.ones(points, dtype=bool), np.zeros(points))
    if c < 0 or (psi is not None and c >= circle_min(psi)):
        raise ValueError("need 0 < c < min of the mobility on the unit circle")
    body = wulff_boundary(phi, wulff_samples).points
    if len(body) < 64:  # polygons: sample the edges too
        nxt = np.roll(body, -1, axis=0)
        s = np.linspace(0, 1, 32, endpoint=False)[:, None, None]
        body = (body[None] + s * (nxt - body)[None]).reshape(-1, 2)
    spline = CubicHermiteSpline(profile.x, profile.u, profile.v)
    mask = np.abs(profile.v) <= v_cap
    x0 = np.linspace(profile.x[mask][0], profile.x[mask][-1], points)
    u0 = spline(x0)
    slope = spline.derivative()(x0)
    normal = np.stack([slope, -np.ones_like(slope)], axis=1)
    centre = np.stack([x0, u0], axis=1) - c * phi.grad(normal)
    passed = np.empty(points, dtype=bool)
    gaps = np.empty(points)
    lo, hi = profile.x[0], profile.x[-1]
    for k in range(points):
        q = centre[k] + c * body
        inside = (q[:, 0] > lo) & (q[:, 0] < hi)
        if not np.all(inside):
            passed[k], gaps[k] = False, -np.inf
            continue
        gap = q[:, 1] - spline(q[:, 0])
        gaps[k] = gap.min()
        passed[k] = gaps[k] >= -tol * (1.0 + abs(u0[k]))
    return InscriptionReport(x0, passed, gaps)


# -- higher dimensions ---------------------------------------------------------


def _unit_vector(e):
    e = np.asarray(e, dtype=float)
    n = np.linalg.norm(e)
    if abs(n - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    return e / n


@lru_cache(maxsize=128)
def _stretched(base, s):
    return base if s == 1.0 else Stretched(base, s, 1.0)


def planar_slice(lift, e, which="phi"):
    """Projected planar norm ``(t, z) -> lift(t e, z)``.

    ``lift`` is a planar norm (read as ``phi(x, z) = norm(|x|, z)``) or an
    object with ``F``, ``G`` and ``xi`` attributes (a cylindrical
    anisotropy), for which the slice is ``F(xi(e) t, z)``.
    """
    e = _unit_vector(e)
    if isinstance(lift, PlanarNorm):
        return lift
    base = lift.F if which == "phi" else lift.G
    return _stretched(base, float(lift.xi.eval(e)))


@lru_cache(maxsize=64)
def _cached_profile(phi, psi, c, tol):
    return reaper_profile(phi, psi, c, tol)


def _eval_profile(profile, s):
    s = np.asarray(s, dtype=float)
    if np.any((s <= profile.a) | (s >= profile.b)):
        raise OutOfDomainError("x.e lies outside the maximal interval")
    return profile.u_at(s)


def reaper_nd_eval(phi, psi, e, x, *, c=1.0, tol=1e-10):
    """``u_e(x . e)`` for the reaper in direction ``e``.

    ``psi`` may be ``None`` when ``phi`` is a cylindrical anisotropy
    carrying its own mobility ``G``.
    """
    e = _unit_vector(e)
    phi_e = planar_slice(phi, e, "phi")
    psi_e = planar_slice(psi if psi is not None else phi, e, "psi")
    profile = _cached_profile(phi_e, psi_e, float(c), float(tol))
    x = np.asarray(x, dtype=float)
    return _eval_profile(profile, x @ e)


def _lift_eval(lift, which):
    """Vectorised ``(X, z) -> phi(X, z)`` with ``X`` of shape ``(..., N)``."""
    if isinstance(lift, PlanarNorm):
        norm = lift
        def xi(X):
            return np.linalg.norm(X, axis=-1)
        smooth = lift.smooth
    else:
        norm = lift.F if which == "phi" else lift.G
        xi = lift.xi.eval
        smooth = norm.smooth and getattr(lift.xi, "smooth", False)

    def ev(X, z):
        X = np.asarray(X, dtype=float)
        return norm(np.stack([xi(X), np.broadcast_to(z, X.shape[:-1])], axis=-1))

    return ev, smooth


def tilted_norms(phi, psi, e, t, lam):
    """Planar norms ``(s, z) -> phi(s e - lam z t, z)`` (and likewise ``psi``).

    With these, ``u(x.e) + lam x.t`` solves the translator equation iff
    ``u`` is the planar reaper of the pair.
    """
    e, t = _unit_vector(e), _unit_vector(t)
    if psi is None:
        psi = phi
    out = []
    for lift, which in ((phi, "phi"), (psi, "psi")):
        ev, smooth = _lift_eval(lift, which)

        def func(p, ev=ev):
            p = np.asarray(p, dtype=float)
            X = p[..., 0, None] * e - lam * p[..., 1, None] * t
            return ev(X, p[..., 1])

        out.append(FunctionNorm(func, smooth=smooth, label=f"tilt({which}, lam={lam:g})"))
    return tuple(out)


@lru_cache(maxsize=64)
def _tilted_profile(phi, psi, e, t, lam, c, tol):
    phi_t, psi_t = tilted_norms(phi, psi, np.array(e), np.array(t), lam)
    return reaper_profile(phi_t, psi_t, c, tol)


def tilted_eval(phi, psi, e, t, lam, x, *, c=1.0, tol=1e-10):
    """``u(x.e) + lam x.t`` for the tilted reaper.

    ``u`` is the planar reaper of the sheared pair from ``tilted_norms``;
    ``lam = 0`` reduces to ``reaper_nd_eval``.
    """
    e, t = _unit_vector(e), _unit_vector(t)
    x = np.asarray(x, dtype=float)
    if lam == 0:
        return reaper_nd_eval(phi, psi, e, x, c=c, tol=tol)
    profile = _tilted_profile(phi, psi, tuple(e), tuple(t), float(lam), float(c), float(tol))
    return _eval_profile(profile, x @ e) + lam * (x @ t)


def tilted_slice_residual(phi, psi, e, t, lam, *, c=1.0, tol=1e-10, points=25, h=1e-3, fd=1e-6, v_cap=20.0):
    """Translator residual of a tilted reaper on the plane through ``e`` and ``t``.

    The flux ``grad_x phi(-grad v, 1)`` is formed from finite differences
    of the lifted anisotropy itself and its divergence by central
    differences in the two in-plane directions.
    """
    e, t = _unit_vector(e), _unit_vector(t)
    if psi is None:
        psi = phi
    n = len(e)
    w = t - (t @ e) * e
    if np.linalg.norm(w) < 1e-12:
        w = np.eye(n)[np.argmin(np.abs(e))]
        w = w - (w @ e) * e
    w /= np.linalg.norm(w)
    if lam == 0:
        profile = _cached_profile(planar_slice(phi, e, "phi"), planar_slice(psi, e, "psi"), float(c), float(tol))
    else:
        profile = _tilted_profile(phi, psi, tuple(e), tuple(t), float(lam), float(c), float(tol))
    vspline = CubicHermiteSpline(profile.x, profile.v, profile.dv)
    mask = np.abs(profile.v) <= v_cap
    s_pts = np.linspace(profile.x[mask][0] + 2 * h, profile.x[mask][-1] - 2 * h, points)
    phi3, _ = _lift_eval(phi, "phi")
    psi3, _ = _lift_eval(psi, "psi")

    def grad_v(X):
        return vspline(X @ e)[..., None] * e + lam * t

    def flux(X):
        P = -grad_v(X)
        g = np.empty_like(P)
        for k in range(n):
            d = np.zeros(n)
            d[k] = fd
            g[..., k] = (phi3(P + d, 1.0) - phi3(P - d, 1.0)) / (2 * fd)
        return g

    y0 = 0.37  # arbitrary offset along the in-plane transverse direction
    X0 = s_pts[:, None] * e + y0 * w
    div = np.zeros(points)
    for d in (e, w):
        div += ((flux(X0 + h * d) - flux(X0 - h * d)) @ d) / (2 * h)
    res = -div - c / psi3(-grad_v(X0), 1.0)
    i = int(np.argmax(np.abs(res)))
    return ResidualReport(float(np.abs(res[i])), float(s_pts[i]), np.full(points - 1, s_pts[1] - s_pts[0]), res)


# -- crystalline limit ---------------------------------------------------------


def _window(profile, height):
    """Points of the graph with ``u <= height``, including the two crossings."""
    x, u = profile.x, profile.u
    spline = CubicHermiteSpline(x, u, profile.v)
    below = np.nonzero(u <= height)[0]
    i, j = below[0], below[-1]
    lo = _crossing(spline, x[i - 1], x[i], height) if i > 0 else x[0]
    hi = _crossing(spline, x[j], x[j + 1], height) if j < len(x) - 1 else x[-1]
    return lo, hi, spline


def _crossing(spline, x0, x1, height):
    return brentq(lambda s: spline(s) - height, x0, x1, xtol=1e-14)


def _graph_samples(profile, height, n):
    """Dense samples of ``{(x, u(x)) : u(x) <= height}`` and its width."""
    lo, hi, spline = _window(profile, height)
    xs = np.linspace(lo, hi, n)
    pts = [np.stack([xs, spline(xs)], axis=1)]
    # steep flanks are sampled uniformly in height as well
    for side in (profile.v < 0, profile.v > 0):
        xx = profile.x[side]
        xx = xx[(xx >= lo) & (xx <= hi)]
        if len(xx) > 1:
            uu = spline(xx)
            order = np.argsort(uu)
            levels = np.linspace(uu.min(), height, n)
            pts.append(np.stack([np.interp(levels, uu[order], xx[order]), levels], axis=1))
    return np.concatenate(pts), hi - lo


def _hausdorff(p, q):
    d1, _ = cKDTree(q).query(p)
    d2, _ = cKDTree(p).query(q)
    return float(max(d1.max(), d2.max()))


def _sup_diff(p, q):
    lo, hi = max(p.x[0], q.x[0]), min(p.x[-1], q.x[-1])
    s = np.union1d(p.x, q.x)
    s = s[(s >= lo) & (s <= hi)]
    return float(np.max(np.abs(p.u_at(s) - q.u_at(s))))


def _extrapolate(eps, vals):
    e1, e2 = eps[-2], eps[-1]
    return (e1 * vals[-1] - e2 * vals[-2]) / (e1 - e2)


def _threads():
    try:
        return max(1, int(os.environ.get("ANISO_SOLITONS_THREADS", "1")))
    except ValueError:
        return 1


def approx_limit(phi, psi, epsilons, *, tol=1e-10, height=1.0, samples=20000, threads=None):
    """Reapers for ``smooth_norm(phi, eps)`` along a decreasing ``eps`` sequence.

    The mobility is smoothed with the same ``eps`` when it is not smooth.
    For a crystalline ``phi`` the approximants converge locally: on compact
    sets their graphs approach the crystalline translator, while the parts
    of each graph lying at heights of order ``1/eps`` escape to infinity
    and still contribute to ``b - a``.  Both the global and the local
    measures are reported.

    Returns
    -------
    profile : GrimProfile
        The profile for the smallest ``eps``.
    report : ConvergenceReport
    """
    eps = [float(e) for e in epsilons]
    if len(eps) < 3:
        raise ValueError("need at least 3 smoothing parameters")
    if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])) or eps[-1] <= 0:
        raise ValueError("smoothing parameters must be positive and decreasing")

    def solve(e):
        ph = smooth_norm(phi, e)
        ps = ph if psi is phi else (psi if psi.smooth else smooth_norm(psi, e))
        return reaper_profile(ph, ps, 1.0, tol)

    n_threads = threads or _threads()
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            profiles = list(pool.map(solve, eps))
    else:
        profiles = [solve(e) for e in eps]

    lengths = [p.interval_length for p in profiles]
    sups = [_sup_diff(p, q) for p, q in zip(profiles, profiles[1:])]
    graphs = [_graph_samples(p, height, samples) for p in profiles]
    widths = [w for _, w in graphs]
    hd = [_hausdorff(g1, g2) for (g1, _), (g2, _) in zip(graphs, graphs[1:])]
    limit_bound = interval_bound(phi, psi)
    bounds = [limit_bound * (1.0 + e) for e in eps]
    report = ConvergenceReport(
        epsilons=eps,
        interval_lengths=lengths,
        sup_diffs=sups,
        window_widths=widths,
        hausdorff_diffs=hd,
        bounds=bounds,
        height=float(height),
        cauchy=all(d2 <= 0.9 * d1 for d1, d2 in zip(sups, sups[1:])),
        cauchy_local=all(d2 <= 0.9 * d1 for d1, d2 in zip(hd, hd[1:])),
        within_bound=all(length <= bound for length, bound in zip(lengths, bounds)),
        length_limit=float(_extrapolate(eps, lengths)),
        width_limit=float(_extrapolate(eps, widths)),
    )
    return profiles[-1], report
