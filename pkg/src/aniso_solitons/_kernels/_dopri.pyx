# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernel for the angular-table profile ODE.

Same contract as ``_dopri_py.integrate``; see that module for the equation.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan, sqrt, fabs, isfinite, pow, INFINITY
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920
cdef double E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40
cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9

cdef double[4] D1 = [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432]
cdef double[4] D3 = [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799]
cdef double[4] D4 = [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072]
cdef double[4] D5 = [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632]
cdef double[4] D6 = [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844]
cdef double[4] D7 = [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423]


cdef struct Tables:
    const double *pc
    const double *qc
    Py_ssize_t npc
    Py_ssize_t nqc
    double lo
    double step
    double k


cdef inline double _spline(const double *c, Py_ssize_t n, double lo, double step, double b) nogil:
    cdef Py_ssize_t i = <Py_ssize_t>((b - lo) / step)
    if i < 0:
        i = 0
    elif i > n - 1:
        i = n - 1
    cdef double d = b - (lo + i * step)
    cdef const double *row = c + 4 * i
    return ((row[0] * d + row[1]) * d + row[2]) * d + row[3]


cdef inline double _rhs(Tables *tb, double t, double y) nogil:
    cdef double s = 1.0 + y * y
    cdef double b = atan(y)
    cdef double val = _spline(tb.pc, tb.npc, tb.lo, tb.step, b)
    if tb.k != 0.0:
        val -= tb.k / t * sqrt(s) * _spline(tb.qc, tb.nqc, tb.lo, tb.step, b)
    return s * val


cdef inline double _poly(const double *dc, double s) nogil:
    return s * (dc[0] + s * (dc[1] + s * (dc[2] + s * dc[3])))


cdef struct Buf:
    double *t
    double *y
    double *dy
    Py_ssize_t n
    Py_ssize_t cap


cdef int _push(Buf *buf, double t, double y, double dy) nogil:
    cdef Py_ssize_t cap
    cdef double *p
    if buf.n == buf.cap:
        cap = 2 * buf.cap
        p = <double *>realloc(buf.t, cap * sizeof(double))
        if p == NULL:
            return -1
        buf.t = p
        p = <double *>realloc(buf.y, cap * sizeof(double))
        if p == NULL:
            return -1
        buf.y = p
        p = <double *>realloc(buf.dy, cap * sizeof(double))
        if p == NULL:
            return -1
        buf.dy = p
        buf.cap = cap
    buf.t[buf.n] = t
    buf.y[buf.n] = y
    buf.dy[buf.n] = dy
    buf.n += 1
    return 0


cdef int _run(Tables *tb, Buf *buf, double t0, double y0, double t1, double y_stop,
              double rtol, double atol, int n_sub, long max_steps,
              int *status, long *n_out) nogil:
    cdef double direction = 1.0 if t1 >= t0 else -1.0
    cdef double t = t0, y = y0
    cdef double f1 = _rhs(tb, t, y)
    cdef double sc, d0, d1, d2, h0, h1, h, hs, fp
    cdef double k1, k2, k3, k4, k5, k6, k7, y_new, t_new, err, factor, s, yj, tj
    cdef long n_steps = 0
    cdef int rejected = 0, j
    if _push(buf, t, y, f1) != 0:
        return -1

    sc = atol + rtol * fabs(y)
    d0 = fabs(y) / sc
    d1 = fabs(f1) / sc
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    if h0 > fabs(t1 - t0):
        h0 = fabs(t1 - t0)
    fp = _rhs(tb, t + direction * h0, y + direction * h0 * f1)
    d2 = fabs(fp - f1) / sc / h0
    if (d1 if d1 > d2 else d2) <= 1e-15:
        h1 = 1e-6 if 1e-6 > h0 * 1e-3 else h0 * 1e-3
    else:
        h1 = pow(0.01 / (d1 if d1 > d2 else d2), 0.2)
    h = 100 * h0
    if h1 < h:
        h = h1
    if fabs(t1 - t0) < h:
        h = fabs(t1 - t0)

    status[0] = 2
    while n_steps < max_steps:
        if fabs(t1 - t) <= 1e-14 * (1.0 if fabs(t) < 1.0 else fabs(t)):
            status[0] = 0
            break
        if h < 1e-15 * (1.0 if fabs(t) < 1.0 else fabs(t)):
            status[0] = 3
            break
        if h > fabs(t1 - t):
            h = fabs(t1 - t)
        hs = direction * h
        k1 = f1
        k2 = _rhs(tb, t + C2 * hs, y + hs * A21 * k1)
        k3 = _rhs(tb, t + C3 * hs, y + hs * (A31 * k1 + A32 * k2))
        k4 = _rhs(tb, t + C4 * hs, y + hs * (A41 * k1 + A42 * k2 + A43 * k3))
        k5 = _rhs(tb, t + C5 * hs, y + hs * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
        k6 = _rhs(tb, t + hs, y + hs * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
        y_new = y + hs * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        t_new = t + hs
        if isfinite(y_new):
            k7 = _rhs(tb, t_new, y_new)
            err = hs * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            err = fabs(err) / (atol + rtol * (fabs(y) if fabs(y) > fabs(y_new) else fabs(y_new)))
        else:
            err = INFINITY
        if not isfinite(err):
            h *= 0.2
            rejected = 1
            continue
        if err > 1.0:
            factor = 0.9 * pow(err, -0.2)
            h *= factor if factor > 0.2 else 0.2
            rejected = 1
            continue
        n_steps += 1
        for j in range(1, n_sub):
            s = <double>j / n_sub
            yj = y + hs * (k1 * _poly(D1, s) + k3 * _poly(D3, s) + k4 * _poly(D4, s)
                           + k5 * _poly(D5, s) + k6 * _poly(D6, s) + k7 * _poly(D7, s))
            tj = t + s * hs
            if _push(buf, tj, yj, _rhs(tb, tj, yj)) != 0:
                return -1
        if _push(buf, t_new, y_new, k7) != 0:
            return -1
        t = t_new
        y = y_new
        f1 = k7
        if fabs(y) >= y_stop:
            status[0] = 1
            break
        if err == 0:
            factor = 10.0
        else:
            factor = 0.9 * pow(err, -0.2)
            if factor > 10.0:
                factor = 10.0
        if rejected and factor > 1.0:
            factor = 1.0
        h *= factor
        rejected = 0
    n_out[0] = n_steps
    return 0


def integrate(pc, qc, double lo, double step, double k, double t0, double y0, double t1,
              double y_stop, double rtol, double atol, int n_sub, long max_steps):
    """Integrate from ``(t0, y0)`` towards ``t1``; returns ``(t, y, dy, status, n_steps)``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] pa = np.ascontiguousarray(pc, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] qa = np.ascontiguousarray(qc, dtype=np.float64)
    if pa.shape[1] != 4 or qa.shape[1] != 4:
        raise ValueError("coefficient tables must have shape (n, 4)")
    if n_sub < 1:
        raise ValueError("n_sub must be >= 1")
    cdef Tables tb
    tb.pc = &pa[0, 0]
    tb.qc = &qa[0, 0]
    tb.npc = pa.shape[0]
    tb.nqc = qa.shape[0]
    tb.lo = lo
    tb.step = step
    tb.k = k
    cdef Buf buf
    buf.cap = 1024
    buf.n = 0
    buf.t = <double *>malloc(buf.cap * sizeof(double))
    buf.y = <double *>malloc(buf.cap * sizeof(double))
    buf.dy = <double *>malloc(buf.cap * sizeof(double))
    cdef int status = 2, rc
    cdef long n_steps = 0
    try:
        if buf.t == NULL or buf.y == NULL or buf.dy == NULL:
            raise MemoryError()
        with nogil:
            rc = _run(&tb, &buf, t0, y0, t1, y_stop, rtol, atol, n_sub, max_steps, &status, &n_steps)
        if rc != 0:
            raise MemoryError()
        ts = np.empty(buf.n)
        ys = np.empty(buf.n)
        dys = np.empty(buf.n)
        for j in range(buf.n):
            ts[j] = buf.t[j]
            ys[j] = buf.y[j]
            dys[j] = buf.dy[j]
        return ts, ys, dys, status, n_steps
    finally:
        free(buf.t)
        free(buf.y)
        free(buf.dy)
