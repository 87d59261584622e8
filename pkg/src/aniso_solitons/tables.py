"""Angular spline tables feeding the profile kernel.

Both profile equations are written in terms of ``b = atan(y)`` so that
their right-hand sides are bounded functions of ``b`` on ``[-pi/2, pi/2]``:

* grim, ``v' = (1 + v^2) P(b)`` with ``P = 1 / (Psi * kappa_phi)`` at angle
  ``pi/2 + b`` (the direction of ``(-v, 1)``);
* bowl, ``w' = (1 + w^2) (P(b) - (N-1)/r sqrt(1 + w^2) Q(b))`` with
  ``P = 1 / (kappa_F * G)`` and ``Q = F_t / kappa_F`` at angle ``pi/2 - b``
  (the direction of ``(w, 1)``).

Here ``Psi``, ``G`` are the norms on the unit circle and ``kappa = H + H''``.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .anisotropy import NonSmoothNormError

DEFAULT_NODES = 8193


@dataclass(frozen=True)
class SplineTable:
    """Cubic-spline coefficients of ``P`` and ``Q`` on a uniform ``b`` grid."""

    pc: np.ndarray
    qc: np.ndarray
    lo: float
    step: float
    nodes: np.ndarray
    p: np.ndarray
    q: np.ndarray


def _coefficients(x, y):
    # scipy stores c[m, i] for power (3 - m) of (x - x_i); rows per interval here
    return np.ascontiguousarray(CubicSpline(x, y, bc_type="not-a-knot").c.T)


def _grid(n):
    if n < 16:
        raise ValueError("table needs at least 16 nodes")
    return np.linspace(-np.pi / 2, np.pi / 2, n)


def _positive(name, values):
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise NonSmoothNormError(f"{name} is not positive and finite on the unit circle")


@lru_cache(maxsize=64)
def grim_table(phi, psi, n=DEFAULT_NODES):
    """Table of ``P = 1/f`` for the grim equation (``Q`` unused, set to 0)."""
    if not phi.smooth:
        raise NonSmoothNormError("the grim equation needs a smooth anisotropy")
    b = _grid(n)
    theta = np.pi / 2 + b
    f = psi.radial(theta) * phi.curvature(theta)
    _positive("psi * kappa_phi", f)
    p = 1.0 / f
    q = np.zeros_like(p)
    return SplineTable(_coefficients(b, p), _coefficients(b, q), float(b[0]), float(b[1] - b[0]), b, p, q)


@lru_cache(maxsize=64)
def bowl_table(F, G, n=DEFAULT_NODES):
    """Tables of ``P`` and ``Q`` for the bowl equation."""
    if not F.smooth:
        raise NonSmoothNormError("the bowl equation needs a smooth factor F")
    b = _grid(n)
    theta = np.pi / 2 - b
    unit = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    kappa = F.curvature(theta)
    _positive("kappa_F", kappa)
    g = G.radial(theta)
    p = 1.0 / (kappa * g)
    q = F.grad(unit)[:, 0] / kappa
    return SplineTable(_coefficients(b, p), _coefficients(b, q), float(b[0]), float(b[1] - b[0]), b, p, q)


def eval_table(table, which, b):
    """Evaluate the ``P`` or ``Q`` spline at angles ``b`` (vectorised)."""
    c = table.pc if which == "p" else table.qc
    b = np.asarray(b, dtype=float)
    i = np.clip(((b - table.lo) / table.step).astype(int), 0, len(c) - 1)
    d = b - (table.lo + i * table.step)
    row = c[i]
    return ((row[..., 0] * d + row[..., 1]) * d + row[..., 2]) * d + row[..., 3]
