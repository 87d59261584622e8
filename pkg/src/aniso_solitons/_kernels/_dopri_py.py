"""Pure-Python Dormand-Prince 5(4) kernel for the angular-table profile ODE.

Integrates the scalar problem

    y' = (1 + y^2) * (P(b) - k / t * sqrt(1 + y^2) * Q(b)),   b = atan(y),

where ``P`` and ``Q`` are cubic splines on a uniform grid in ``b``.
Coefficient rows are ``(c3, c2, c1, c0)`` in powers of ``b - b_i``.

This module mirrors ``_dopri.pyx`` statement for statement; keep them in sync.
"""

import math

import numpy as np

# Dormand-Prince tableau
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9

# dense output, y(t0 + s h) = y0 + h * sum_j K_j * (P_j1 s + P_j2 s^2 + P_j3 s^3 + P_j4 s^4)
D1 = (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432)
D3 = (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799)
D4 = (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072)
D5 = (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632)
D6 = (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844)
D7 = (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423)

STATUS_DONE, STATUS_STOP, STATUS_MAXSTEPS, STATUS_UNDERFLOW = 0, 1, 2, 3


def _spline(c, lo, step, n, b):
    i = int((b - lo) / step)
    if i < 0:
        i = 0
    elif i > n - 1:
        i = n - 1
    d = b - (lo + i * step)
    row = c[i]
    return ((row[0] * d + row[1]) * d + row[2]) * d + row[3]


def _poly(dc, s):
    return s * (dc[0] + s * (dc[1] + s * (dc[2] + s * dc[3])))


def integrate(pc, qc, lo, step, k, t0, y0, t1, y_stop, rtol, atol, n_sub, max_steps):
    """Integrate from ``(t0, y0)`` towards ``t1``.

    Stops early once ``|y| >= y_stop`` (the step that crosses is kept).
    Returns ``(t, y, dy, status, n_steps)``; every accepted step contributes
    ``n_sub`` samples from the continuous extension.
    """
    pc = [tuple(r) for r in np.asarray(pc, dtype=float)]
    qc = [tuple(r) for r in np.asarray(qc, dtype=float)]
    npc, nqc = len(pc), len(qc)
    use_q = k != 0.0

    def rhs(t, y):
        s = 1.0 + y * y
        b = math.atan(y)
        val = _spline(pc, lo, step, npc, b)
        if use_q:
            val -= k / t * math.sqrt(s) * _spline(qc, lo, step, nqc, b)
        return s * val

    direction = 1.0 if t1 >= t0 else -1.0
    ts, ys, dys = [t0], [y0], []
    t, y = t0, y0
    f1 = rhs(t, y)
    dys.append(f1)

    # initial step (Hairer, Norsett & Wanner II.4)
    sc = atol + rtol * abs(y)
    d0, d1 = abs(y) / sc, abs(f1) / sc
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, abs(t1 - t0))
    f_probe = rhs(t + direction * h0, y + direction * h0 * f1)
    d2 = abs(f_probe - f1) / sc / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    h = min(100 * h0, h1, abs(t1 - t0))

    status = STATUS_MAXSTEPS
    n_steps = 0
    rejected = False
    while n_steps < max_steps:
        if abs(t1 - t) <= 1e-14 * max(1.0, abs(t)):
            status = STATUS_DONE
            break
        if h < 1e-15 * max(1.0, abs(t)):
            status = STATUS_UNDERFLOW
            break
        if h > abs(t1 - t):
            h = abs(t1 - t)
        hs = direction * h
        k1 = f1
        k2 = rhs(t + C2 * hs, y + hs * A21 * k1)
        k3 = rhs(t + C3 * hs, y + hs * (A31 * k1 + A32 * k2))
        k4 = rhs(t + C4 * hs, y + hs * (A41 * k1 + A42 * k2 + A43 * k3))
        k5 = rhs(t + C5 * hs, y + hs * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
        k6 = rhs(t + hs, y + hs * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
        y_new = y + hs * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        t_new = t + hs
        if math.isfinite(y_new):
            k7 = rhs(t_new, y_new)
            err = hs * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            err = abs(err) / (atol + rtol * max(abs(y), abs(y_new)))
        else:
            err = math.inf
        if not math.isfinite(err):
            h *= 0.2
            rejected = True
            continue
        if err > 1.0:
            h *= max(0.2, 0.9 * err**-0.2)
            rejected = True
            continue
        n_steps += 1
        for j in range(1, n_sub):
            s = j / n_sub
            yj = y + hs * (
                k1 * _poly(D1, s)
                + k3 * _poly(D3, s)
                + k4 * _poly(D4, s)
                + k5 * _poly(D5, s)
                + k6 * _poly(D6, s)
                + k7 * _poly(D7, s)
            )
            tj = t + s * hs
            ts.append(tj)
            ys.append(yj)
            dys.append(rhs(tj, yj))
        ts.append(t_new)
        ys.append(y_new)
        dys.append(k7)
        t, y, f1 = t_new, y_new, k7
        if abs(y) >= y_stop:
            status = STATUS_STOP
            break
        factor = 10.0 if err == 0 else min(10.0, 0.9 * err**-0.2)
        if rejected:
            factor = min(factor, 1.0)
        h *= factor
        rejected = False
    return np.array(ts), np.array(ys), np.array(dys), status, n_steps
