"""Compare the compiled and pure-Python profile kernels.

Times the raw Dormand-Prince kernel on the grim and bowl tables and the
full solvers built on top of it, and checks that both backends return the
same trajectories.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

import argparse
import json
import time

import numpy as np

from aniso_solitons import bowl, grim
from aniso_solitons._kernels import BACKENDS
from aniso_solitons.anisotropy import euclidean, l1, pnorm, smooth_norm
from aniso_solitons.tables import bowl_table, grim_table


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def kernel_cases():
    phi = smooth_norm(l1(), 0.1)
    gt = grim_table(phi, phi)
    bt = bowl_table(smooth_norm(pnorm(4), 0.3), euclidean())
    # (name, table, k, t0, y0, t1, y_stop)
    return [
        ("grim kernel, smoothed l1", gt, 0.0, 0.0, 0.0, 50.0, 1e6),
        ("bowl kernel, N=3", bt, 2.0, 1e-3, 5e-4, 200.0, np.inf),
    ]


def solver_cases():
    phi = smooth_norm(l1(), 0.1)
    A = bowl.CylindricalAnisotropy(smooth_norm(pnorm(4), 0.3), euclidean(), 3)
    return [
        ("reaper_profile", lambda b: grim.reaper_profile(phi, phi, backend=b).x),
        ("bowl_profile", lambda b: bowl.bowl_profile(A, 100.0, backend=b).w),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="write timings to this file")
    args = ap.parse_args(argv)

    names = [n for n in ("python", "compiled") if n in BACKENDS]
    if len(names) < 2:
        print("compiled backend not built; only timing the fallback")
    rows = []

    for label, tab, k, t0, y0, t1, y_stop in kernel_cases():
        res = {}
        for b in names:
            run = lambda: BACKENDS[b](tab.pc, tab.qc, tab.lo, tab.step, k, t0, y0, t1, y_stop,
                                      1e-10, 1e-12, 8, 200_000)
            res[b] = best_of(run, args.repeat)
        rows.append((label, res))

    for label, fn in solver_cases():
        res = {b: best_of(lambda: fn(b), args.repeat) for b in names}
        rows.append((label, res))

    print(f"{'case':<28}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}{'max diff':>12}")
    report = []
    for label, res in rows:
        times = [res[n][0] for n in names]
        line = f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        entry = {"case": label, **{n: res[n][0] for n in names}}
        if len(names) == 2:
            a, b = (res[n][1] for n in names)
            a = a[1] if isinstance(a, tuple) else a
            b = b[1] if isinstance(b, tuple) else b
            diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.shape(a) == np.shape(b) else np.nan
            speedup = times[0] / times[1]
            line += f"{speedup:>9.1f}x{diff:>12.2e}"
            entry.update(speedup=speedup, max_diff=diff)
        print(line)
        report.append(entry)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2)


if __name__ == "__main__":
    main()
