"""Explicit crystalline translators.

Polygonal grim reaper
    For a crystalline ``phi`` with natural mobility, the translator is a
    convex polyline whose segments carry the downward normals ``nu_j`` of
    the Wulff polygon, in order.  A segment of length ``L`` has crystalline
    curvature ``-Delta(nu)/L`` (``Delta`` the Wulff edge length), hence
    vertical speed ``phi(nu) Delta / (L |nu_z|)``; the choice
    ``L_j = -phi(nu_j) Delta_j / nu_j_z`` makes every speed 1.  Two vertical
    half-lines close the graph.

Crystalline bowls
    For ``F(t, s) = |t| + |s|`` (cylinder Wulff shape) and
    ``F(t, s) = max(|t|, |s|)`` (double cone) the bowl is explicit, with a
    facet ``{xi0 <= r0}`` and a quadratic branch outside.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .anisotropy import PlanarNorm, Polyhedral, WulffPolyline, wulff_boundary
from .bowl import EuclideanXi, PolygonXi

__all__ = [
    "CrystalReaper",
    "CrystalBowl",
    "crystal_reaper",
    "facet_speed_check",
    "crystal_bowl_cylinder",
    "crystal_bowl_cone",
]


@dataclass(frozen=True, eq=False)
class CrystalReaper:
    """Polygonal grim reaper.

    ``vertices`` runs from the top of the left half-line, through the
    facet corners, to the top of the right half-line.  The facets lie in
    ``[-width/2, width/2]`` with the lowest point at height 0.
    """

    normals: np.ndarray
    deltas: np.ndarray
    lengths: np.ndarray
    phi_values: np.ndarray
    vertices: np.ndarray
    width: float
    height: float
    plot_length: float

    @property
    def k(self):
        return len(self.normals)

    def with_lengths(self, lengths):
        """Copy with different facet lengths (polyline not reassembled)."""
        return CrystalReaper(
            self.normals, self.deltas, np.asarray(lengths, dtype=float), self.phi_values,
            self.vertices, self.width, self.height, self.plot_length,
        )

    def is_convex(self, tol=1e-12):
        e = np.diff(self.vertices, axis=0)
        cross = e[:-1, 0] * e[1:, 1] - e[:-1, 1] * e[1:, 0]
        return bool(np.all(cross >= -tol * np.max(np.abs(self.vertices))))

    def facet_table(self):
        speeds = facet_speed_check(self)
        return [
            {"nu": n.tolist(), "Delta": float(d), "L": float(L), "speed": float(s)}
            for n, d, L, s in zip(self.normals, self.deltas, self.lengths, speeds)
        ]


def _wulff_polygon(W, phi):
    if not isinstance(phi, Polyhedral):
        raise ValueError("crystal_reaper needs a crystalline (polyhedral) phi")
    if W is None:
        W = wulff_boundary(phi)
    if not isinstance(W, WulffPolyline) or W.normals is None:
        raise ValueError("need the exact Wulff polygon with edge normals")
    return W


def crystal_reaper(W=None, phi=None, *, plot_length=1.0, tol=1e-12):
    """Assemble the polygonal grim reaper for ``psi = phi``.

    Parameters
    ----------
    W : WulffPolyline, optional
        Exact Wulff polygon of ``phi`` (computed when omitted).
    phi : Polyhedral
    plot_length : float
        Length drawn for each vertical half-line.
    """
    W = _wulff_polygon(W, phi)
    down = W.normals[:, 1] < -tol
    if not down.any():
        raise ValueError("the Wulff polygon has no downward edge")
    normals = W.normals[down]
    deltas = W.edge_lengths[down]
    # counterclockwise from the left: angles increase over (-pi, 0)
    order = np.argsort(np.arctan2(normals[:, 1], normals[:, 0]))
    normals, deltas = normals[order], deltas[order]
    phis = phi(normals)
    lengths = -phis * deltas / normals[:, 1]

    tangents = np.stack([-normals[:, 1], normals[:, 0]], axis=1)
    corners = np.vstack([[0.0, 0.0], np.cumsum(lengths[:, None] * tangents, axis=0)])
    corners[:, 1] -= corners[:, 1].min()
    width = float(corners[-1, 0] - corners[0, 0])
    corners[:, 0] -= corners[0, 0] + 0.5 * width
    top_left = corners[0] + [0.0, plot_length]
    top_right = corners[-1] + [0.0, plot_length]
    vertices = np.vstack([top_left, corners, top_right])
    return CrystalReaper(normals, deltas, lengths, phis, vertices, width, float(corners[:, 1].max()), plot_length)


def facet_speed_check(R, phi=None):
    """Vertical facet speeds ``phi(nu) Delta / (L |nu_z|)``.

    ``phi`` defaults to the values stored when ``R`` was built.
    """
    phis = R.phi_values if phi is None else phi(R.normals)
    return phis * R.deltas / (R.lengths * np.abs(R.normals[:, 1]))


@dataclass(frozen=True)
class CrystalBowl:
    """Explicit crystalline bowl ``u(x) = profile(xi0(x))``.

    ``case`` is ``"cylinder"`` (``F = |t| + |s|``) or ``"cone"``
    (``F = max(|t|, |s|)``).  ``condition_residual`` records how well the
    facet condition determining ``r0`` is met.
    """

    case: str
    N: int
    r0: float
    condition_residual: float = 0.0

    def u(self, s):
        s = np.asarray(s, dtype=float)
        N, r0 = self.N, self.r0
        if self.case == "cylinder":
            out = np.where(s <= r0, 0.0, (s * s - r0 * r0) / (2 * (N - 1)) - s + r0)
        else:
            out = np.where(s <= r0, s, (s * s - r0 * r0) / (2 * (N - 1)) + r0)
        return float(out) if out.ndim == 0 else out

    def slopes_at_junction(self):
        """One-sided slopes of the profile at ``s = r0``."""
        inner = 0.0 if self.case == "cylinder" else 1.0
        outer = self.r0 / (self.N - 1) - (1.0 if self.case == "cylinder" else 0.0)
        return inner, outer

    @property
    def quadratic_coefficient(self):
        return 1.0 / (2 * (self.N - 1))

    def junction_checks(self, tol=1e-12):
        r0 = self.r0
        left = self.u(r0)
        right = self.u(r0 * (1 + 1e-15)) if r0 > 0 else left
        inner, outer = self.slopes_at_junction()
        return {"continuous": abs(left - right) <= tol * max(1.0, abs(left)), "convex": outer >= inner - tol}

    def to_dict(self):
        return {"case": self.case, "N": self.N, "r0": self.r0}


def _descriptor(xi, N):
    if xi is None or xi == "euclidean":
        return EuclideanXi(N)
    if isinstance(xi, PlanarNorm):
        if N != 2:
            raise ValueError("a planar xi needs N = 2")
        return PolygonXi(xi)
    if getattr(xi, "N", N) != N:
        raise ValueError("xi descriptor dimension does not match N")
    return xi


def crystal_bowl_cylinder(xi=None, N=2):
    """Bowl for ``F(t, s) = |t| + |s|`` (Wulff shape ``W_xi0 x [-1, 1]``).

    ``r0`` solves ``Per_phi({xi0 <= r}) = |{xi0 <= r}|``.  On the lateral
    boundary the normal is horizontal and ``F(xi(nu), 0) = xi(nu)``, so the
    left side is the ``xi``-perimeter.
    """
    N = int(N)
    if N < 2:
        raise ValueError("N must be >= 2")
    d = _descriptor(xi, N)

    def gap(r):
        return d.perimeter(r) / d.volume(r) - 1.0

    r0 = brentq(gap, 1e-3, 1e3, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    resid = abs(d.perimeter(r0) - d.volume(r0)) / d.volume(r0)
    return CrystalBowl("cylinder", N, float(r0), float(resid))


def crystal_bowl_cone(xi=None, N=2):
    """Bowl for ``F(t, s) = max(|t|, |s|)`` (double-cone Wulff shape).

    The facet is the Wulff section of radius ``r0 = N``, where the
    curvature ``N / r0`` of the scaled Wulff shape equals the speed 1.
    """
    N = int(N)
    if N < 2:
        raise ValueError("N must be >= 2")
    _descriptor(xi, N)
    return CrystalBowl("cone", N, float(N))
