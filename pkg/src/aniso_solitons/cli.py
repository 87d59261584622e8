"""Command-line front end.

Every command writes its artifacts plus ``config.json`` (the resolved
configuration) and ``report.json`` (all checks with measured values and
tolerances) into ``--out``.

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration or file
schema error, 3 solver failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .anisotropy import (
    NonSmoothNormError,
    Polyhedral,
    circle_min,
    dual_eval,
    norm_from_spec,
    polyhedral_from_wulff,
    smooth_norm,
    wulff_boundary,
)
from .bowl import (
    CylindricalAnisotropy,
    ShootingError,
    alpha_of_r,
    bowl_approx_limit,
    bowl_profile,
    bowl_rhs,
    bowl_u_eval,
    growth_coefficient,
    slope_coefficient,
)
from .crystalline import crystal_bowl_cone, crystal_bowl_cylinder, crystal_reaper, facet_speed_check
from .grim import (
    ProfileError,
    _three_point,
    approx_limit,
    interval_bound,
    profile_from_samples,
    reaper_profile,
    reaper_residual,
    sandwich_check,
    wulff_inscription_check,
)
from .io import REPORT_SCHEMA, SchemaError, read_csv, read_json, write_csv, write_json

COMMANDS = ("grim", "bowl", "crystal-grim", "crystal-bowl", "dual", "verify")

HEADERS = {
    ("x", "v", "u"): "grim",
    ("r", "w", "alpha"): "bowl",
    ("s", "u"): "crystal-bowl",
    ("x", "z"): "polyline",
}


class ConfigError(ValueError):
    """Invalid configuration (exit code 2)."""


class Report:
    def __init__(self, command):
        self.command = command
        self.checks = []
        self.diagnostics = {}

    def check(self, name, passed, value, tolerance):
        self.checks.append(
            {"name": name, "passed": bool(passed), "value": value, "tolerance": tolerance}
        )

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def to_dict(self, status, error=None):
        out = {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "status": status,
            "checks": self.checks,
            "diagnostics": self.diagnostics,
        }
        if error is not None:
            out["error"] = error
        return out


# -- argument handling -------------------------------------------------------------


def _norm_text(text):
    """Norm given as a shorthand, inline JSON, or ``@file.json``."""
    if text is None:
        return None
    if isinstance(text, dict):
        return text
    text = text.strip()
    if text.startswith("@"):
        try:
            return json.loads(Path(text[1:]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read norm file {text[1:]}: {exc}") from exc
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid norm JSON: {exc}") from exc
    return text


def _norm(spec, label):
    try:
        return norm_from_spec(_norm_text(spec))
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{label}: {exc}") from exc


def _spec_of(norm):
    try:
        return norm.to_dict()
    except TypeError:
        return repr(norm)


def _eps_list(text):
    if text is None:
        return None
    if isinstance(text, list):
        return [float(e) for e in text]
    try:
        return [float(e) for e in str(text).split(",") if e.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid epsilon list {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aniso-solitons",
        description="Translating solitons of anisotropic mean curvature flow.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output directory")
        p.add_argument("--config", help="JSON file with option values (flags take precedence)")

    p = sub.add_parser("grim", help="planar grim reaper")
    common(p)
    p.add_argument("--phi", help="anisotropy: name, JSON object or @file")
    p.add_argument("--psi", help="mobility (defaults to phi)")
    p.add_argument("--c", type=float, help="translation speed (default 1)")
    p.add_argument("--tol", type=float, help="integrator tolerance (default 1e-10)")
    p.add_argument("--smooth-eps", type=float, help="smooth non-smooth norms with this parameter")
    p.add_argument("--approx", help="comma-separated decreasing eps values for the smoothing sweep")
    p.add_argument("--height", type=float, help="cut height for local convergence (default 1)")

    p = sub.add_parser("bowl", help="bowl soliton for a cylindrical anisotropy")
    common(p)
    p.add_argument("--F", dest="F", help="surface tension factor")
    p.add_argument("--G", dest="G", help="mobility factor (defaults to F)")
    p.add_argument("--N", dest="N", type=int, help="horizontal dimension (default 2)")
    p.add_argument("--xi", help="'euclidean' or a planar norm (N = 2)")
    p.add_argument("--R-max", dest="R_max", type=float, help="outer radius (default 100)")
    p.add_argument("--tol", type=float, help="shooting tolerance (default 1e-6)")
    p.add_argument("--smooth-eps", type=float)
    p.add_argument("--approx", help="comma-separated decreasing eps values")

    p = sub.add_parser("crystal-grim", help="polygonal grim reaper")
    common(p)
    p.add_argument("--phi", help="polyhedral anisotropy")
    p.add_argument("--wulff", help="Wulff polygon vertices as JSON list (alternative to --phi)")
    p.add_argument("--plot-length", dest="plot_length", type=float)

    p = sub.add_parser("crystal-bowl", help="explicit crystalline bowl")
    common(p)
    p.add_argument("--case", choices=("cylinder", "cone"))
    p.add_argument("--N", dest="N", type=int)
    p.add_argument("--xi", help="'euclidean' or a planar norm (N = 2)")

    p = sub.add_parser("dual", help="dual norm and Wulff boundary")
    common(p)
    p.add_argument("--norm", help="planar norm")
    p.add_argument("--n", type=int, help="boundary samples (default 360)")

    p = sub.add_parser("verify", help="re-check a stored profile")
    common(p)
    p.add_argument("--profile", help="CSV produced by this tool")
    return parser


DEFAULTS = {
    "grim": {"phi": "euclidean", "psi": None, "c": 1.0, "tol": 1e-10, "smooth_eps": None, "approx": None, "height": 1.0},
    "bowl": {"F": "euclidean", "G": None, "N": 2, "xi": "euclidean", "R_max": 100.0, "tol": 1e-6, "smooth_eps": None, "approx": None},
    "crystal-grim": {"phi": None, "wulff": None, "plot_length": 1.0},
    "crystal-bowl": {"case": "cylinder", "N": 2, "xi": "euclidean"},
    "dual": {"norm": "euclidean", "n": 360},
    "verify": {"profile": None},
}


def resolve_config(args):
    """Merge flags, ``--config`` values and defaults into a plain dict."""
    cmd = args.command
    cfg = dict(DEFAULTS[cmd])
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(loaded) - set(cfg) - {"command", "out", "resolved"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update({k: v for k, v in loaded.items() if k in cfg})
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["command"] = cmd
    cfg["out"] = args.out
    return cfg


# -- pipelines ---------------------------------------------------------------------


def _check_tol(tol, lo=1e-12, hi=1e-3):
    if not lo <= tol <= hi:
        raise ConfigError(f"tol must lie in [{lo:g}, {hi:g}]")


def _grim_norms(cfg):
    phi = _norm(cfg["phi"], "phi")
    psi = phi if cfg["psi"] is None else _norm(cfg["psi"], "psi")
    eps = cfg["smooth_eps"]
    if eps is not None:
        if not 0 < eps < 1:
            raise ConfigError("--smooth-eps must lie in (0, 1)")
        phi_s = phi if phi.smooth else smooth_norm(phi, eps)
        psi_s = phi_s if psi is phi else psi
        return phi, psi, phi_s, psi_s
    return phi, psi, phi, psi


def _grim_checks(report, profile, phi, psi, c):
    x, v, u = profile.x, profile.v, profile.u
    i0 = int(np.argmin(np.abs(x)))
    report.check("initial_conditions", x[i0] == 0 and u[i0] == 0 and v[i0] == 0, [float(u[i0]), float(v[i0])], 0.0)
    dvs = np.diff(v) * np.sign(c)
    report.check("v_strictly_monotone", bool(np.all(dvs > 0)), float(dvs.min()), 0.0)
    # u'' = v' has the sign of c
    bend = np.diff(np.diff(u) / np.diff(x)) * np.sign(c)
    report.check("u_convex", bool(np.all(bend >= -1e-8)), float(bend.min()), -1e-8)
    bound = interval_bound(phi, psi) / abs(c)
    report.check("interval_bound", profile.interval_length <= bound + 1e-6, profile.interval_length, bound + 1e-6)
    res = reaper_residual(profile, phi, psi)
    res_tol = 1e-4 * max(1.0, abs(c))
    report.check("residual", res.max_residual <= res_tol, res.max_residual, res_tol)
    report.check("quadrature_defect", res.max_defect <= 1e-7, res.max_defect, 1e-7)
    report.check("sandwich", sandwich_check(profile), None, 1e-8)
    scale = 0.5 * circle_min(psi) / max(1.0, abs(c))
    if c > 0:
        ins = wulff_inscription_check(profile, phi, scale, psi=psi)
        report.check("wulff_inscription", ins.all_passed, float(np.min(ins.min_gap)), -1e-9)
    report.diagnostics.update(
        {"a": profile.a, "b": profile.b, "interval_length": profile.interval_length,
         "residual_location": res.location, "wulff_scale": scale}
    )


def run_grim(cfg, out, report):
    _check_tol(cfg["tol"])
    c = float(cfg["c"])
    if c == 0:
        raise ConfigError("c must be nonzero")
    phi, psi, phi_s, psi_s = _grim_norms(cfg)
    eps_list = _eps_list(cfg["approx"])
    if eps_list is not None:
        if len(eps_list) < 3 or any(b >= a for a, b in zip(eps_list, eps_list[1:])) or eps_list[-1] <= 0:
            raise ConfigError("--approx needs at least 3 decreasing positive values")
        if c != 1:
            raise ConfigError("the smoothing sweep runs at c = 1")
        profile, conv = approx_limit(phi, psi, eps_list, tol=cfg["tol"], height=cfg["height"])
        phi_s = smooth_norm(phi, eps_list[-1]) if not phi.smooth else phi
        psi_s = phi_s if psi is phi else (psi if psi.smooth else smooth_norm(psi, eps_list[-1]))
        write_json(out / "convergence.json", conv.to_dict())
        report.check("cauchy_local", conv.cauchy_local, conv.hausdorff_diffs, 0.9)
        report.check("within_bound", conv.within_bound, conv.interval_lengths, conv.bounds)
        if isinstance(phi, Polyhedral) and psi is phi:
            width = crystal_reaper(phi=phi).width
            rel = abs(conv.width_limit - width) / width
            report.check("limit_width_vs_crystal", rel <= 0.05, conv.width_limit, 0.05)
        report.diagnostics["convergence"] = conv.to_dict()
    else:
        if not phi_s.smooth:
            raise ConfigError(
                "phi is not smooth: pass --smooth-eps or run the smoothing sweep with --approx"
            )
        profile = reaper_profile(phi_s, psi_s, c, cfg["tol"])
        _grim_checks(report, profile, phi_s, psi_s, c)
    report.diagnostics.update(profile.diagnostics)
    cfg["resolved"] = {"phi": _spec_of(phi_s), "psi": _spec_of(psi_s), "c": c}
    write_csv(out / "profile.csv", ["x", "v", "u"], [profile.x, profile.v, profile.u])


def _cylindrical(cfg):
    F = _norm(cfg["F"], "F")
    G = F if cfg["G"] is None else _norm(cfg["G"], "G")
    N = int(cfg["N"])
    if N < 2:
        raise ConfigError("N must be >= 2")
    xi = cfg["xi"]
    if xi in (None, "euclidean"):
        xi_obj = None
    else:
        if N != 2:
            raise ConfigError("a planar xi needs N = 2")
        xi_obj = _norm(xi, "xi")
    return F, G, N, xi_obj


def _bowl_checks(report, p, A):
    w, r = p.w, p.r
    report.check("w_positive", bool(np.all(w > 0)), float(w.min()), 0.0)
    report.check("w_increasing", bool(np.all(np.diff(w) > 0)), float(np.diff(w).min()), 0.0)
    gap = float(np.max(w - p.alpha))
    report.check("w_below_alpha", gap <= 1e-8, gap, 1e-8)
    report.check("w_small_near_origin", w[0] < 1e-4, float(w[0]), 1e-4)
    k = slope_coefficient(A.F, A.G, A.N)
    rel = abs(p.slope / k - 1)
    report.check("asymptotic_slope", rel <= 0.02, p.slope, {"target": k, "relative": 0.02})
    g = bowl_u_eval(p, A, p.r_max) / p.r_max**2
    kg = growth_coefficient(A.F, A.G, A.N)
    report.check("quadratic_growth", abs(g / kg - 1) <= 0.05, g, {"target": kg, "relative": 0.05})
    ft = float(A.F.grad([1.0, 0.0])[0])
    f10 = float(A.F([1.0, 0.0]))
    report.check("Ft_equals_F_at_10", abs(ft - f10) <= 1e-8, ft - f10, 1e-8)
    if A.F.kind == "euclidean" and A.G.kind == "euclidean":
        exact = (1 - (A.N - 1) * w / r) * (1 + w * w)
        err = float(np.max(np.abs(p.dw - exact) / (1 + np.abs(exact))))
        report.check("isotropic_reduction", err <= 1e-8, err, 1e-8)


def run_bowl(cfg, out, report):
    tol = float(cfg["tol"])
    if not 0 < tol <= 1e-2:
        raise ConfigError("bowl tol must lie in (0, 1e-2]")
    if cfg["R_max"] < 10:
        raise ConfigError("R_max must be at least 10")
    F, G, N, xi = _cylindrical(cfg)
    eps_list = _eps_list(cfg["approx"])
    if eps_list is not None:
        if len(eps_list) < 2 or any(b >= a for a, b in zip(eps_list, eps_list[1:])) or eps_list[-1] <= 0:
            raise ConfigError("--approx needs decreasing positive values")
        p, conv = bowl_approx_limit(F, G, N, eps_list, R_max=cfg["R_max"], tol=tol, xi=xi)
        F = F if F.smooth else smooth_norm(F, eps_list[-1])
        G = F if cfg["G"] is None else (G if G.smooth else smooth_norm(G, eps_list[-1]))
        write_json(out / "convergence.json", conv)
        report.diagnostics["convergence"] = conv
    else:
        eps = cfg["smooth_eps"]
        if eps is not None:
            if not 0 < eps < 1:
                raise ConfigError("--smooth-eps must lie in (0, 1)")
            F_s = F if F.smooth else smooth_norm(F, eps)
            G = F_s if cfg["G"] is None else (G if G.smooth else smooth_norm(G, eps))
            F = F_s
        if not F.smooth:
            raise ConfigError("F is not smooth: pass --smooth-eps or --approx")
        try:
            A = CylindricalAnisotropy(F, G, N, xi)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        p = bowl_profile(A, cfg["R_max"], tol)
    A = CylindricalAnisotropy(F, G, N, xi)
    _bowl_checks(report, p, A)
    report.diagnostics.update({"rho": p.rho, "slope": p.slope, **p.diagnostics})
    write_json(out / "shooting.json", {"rhos": p.rhos, "sup_diffs": p.sup_diffs})
    cfg["resolved"] = {"F": _spec_of(F), "G": _spec_of(G), "N": N, "xi": cfg["xi"]}
    write_csv(out / "profile.csv", ["r", "w", "alpha"], [p.r, p.w, p.alpha])


def _crystal_phi(cfg):
    if cfg["wulff"] is not None:
        try:
            verts = cfg["wulff"] if isinstance(cfg["wulff"], list) else json.loads(cfg["wulff"])
            return polyhedral_from_wulff(verts)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid Wulff polygon: {exc}") from exc
    if cfg["phi"] is None:
        raise ConfigError("crystal-grim needs --phi or --wulff")
    phi = _norm(cfg["phi"], "phi")
    if not isinstance(phi, Polyhedral):
        raise ConfigError("crystal-grim needs a polyhedral anisotropy")
    return phi


def _facet_checks(report, R, speeds, phi):
    err = float(np.max(np.abs(speeds - 1)))
    report.check("facet_speeds", err <= 1e-12, err, 1e-12)
    formula = -phi(R.normals) * R.deltas / R.normals[:, 1]
    report.check("length_formula", bool(np.allclose(R.lengths, formula, rtol=1e-12, atol=0)),
                 float(np.max(np.abs(R.lengths - formula))), 1e-12)
    report.check("lengths_positive", bool(np.all(R.lengths > 0)), float(R.lengths.min()), 0.0)
    report.check("convex", R.is_convex(), None, 1e-12)


def run_crystal_grim(cfg, out, report):
    phi = _crystal_phi(cfg)
    try:
        R = crystal_reaper(phi=phi, plot_length=float(cfg["plot_length"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _facet_checks(report, R, facet_speed_check(R), phi)
    report.diagnostics.update({"k": R.k, "width": R.width, "height": R.height})
    W = wulff_boundary(phi)
    write_csv(out / "polyline.csv", ["x", "z"], [R.vertices[:, 0], R.vertices[:, 1]])
    write_csv(out / "wulff.csv", ["x", "z"], [W.points[:, 0], W.points[:, 1]])
    write_json(out / "facets.json", R.facet_table())
    cfg["resolved"] = {"phi": _spec_of(phi), "kind": "crystal-grim"}


def _crystal_bowl(cfg):
    N = int(cfg["N"])
    if N < 2:
        raise ConfigError("N must be >= 2")
    xi = cfg["xi"]
    if xi not in (None, "euclidean"):
        if N != 2:
            raise ConfigError("a planar xi needs N = 2")
        xi = _norm(xi, "xi")
    else:
        xi = None
    if cfg["case"] == "cylinder":
        return crystal_bowl_cylinder(xi, N)
    if cfg["case"] == "cone":
        return crystal_bowl_cone(xi, N)
    raise ConfigError("case must be 'cylinder' or 'cone'")


def _crystal_bowl_checks(report, B):
    if B.case == "cone":
        report.check("r0_equals_N", B.r0 == B.N, B.r0, 0.0)
    else:
        report.check("r0_equals_N", abs(B.r0 - B.N) <= 1e-8, B.r0, 1e-8)
        report.check("facet_condition", B.condition_residual <= 1e-8, B.condition_residual, 1e-8)
    j = B.junction_checks()
    inner, outer = B.slopes_at_junction()
    report.check("continuous_at_r0", j["continuous"], None, 1e-12)
    report.check("convex_at_r0", j["convex"], [inner, outer], 0.0)


def run_crystal_bowl(cfg, out, report):
    B = _crystal_bowl(cfg)
    _crystal_bowl_checks(report, B)
    s = np.union1d(np.linspace(0.0, 3.0 * B.r0, 601), [B.r0])
    write_csv(out / "profile.csv", ["s", "u"], [s, B.u(s)])
    write_json(out / "bowl.json", B.to_dict())
    report.diagnostics.update(B.to_dict())
    report.diagnostics["quadratic_coefficient"] = B.quadratic_coefficient


def _wulff_checks(report, norm, pts):
    dev = float(np.max(np.abs(dual_eval(norm, pts) - 1)))
    report.check("on_unit_dual_sphere", dev <= 1e-8, dev, 1e-8)
    e = np.roll(pts, -1, axis=0) - pts
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    report.check("convex", bool(np.all(cross >= -1e-14)), float(cross.min()), -1e-14)


def run_dual(cfg, out, report):
    norm = _norm(cfg["norm"], "norm")
    n = int(cfg["n"])
    if n < 8:
        raise ConfigError("n must be at least 8")
    W = wulff_boundary(norm, n)
    _wulff_checks(report, norm, W.points)
    report.diagnostics["area"] = W.area()
    write_csv(out / "wulff.csv", ["x", "z"], [W.points[:, 0], W.points[:, 1]])
    cfg["resolved"] = {"norm": _spec_of(norm), "kind": "dual"}


# -- verify ------------------------------------------------------------------------


def _stored_config(cfg, profile_path):
    path = Path(cfg["config_file"]) if cfg.get("config_file") else profile_path.parent / "config.json"
    stored = read_json(path)
    if not isinstance(stored, dict) or "command" not in stored:
        raise SchemaError(f"{path} is not a configuration written by this tool")
    return stored


def _verify_grim(stored, data, report):
    res = stored.get("resolved") or {}
    phi = _norm(res.get("phi"), "phi")
    psi = _norm(res.get("psi"), "psi")
    c = float(res.get("c", 1.0))
    x, v, u = data.T
    if len(x) < 18 or np.any(np.diff(x) <= 0):
        raise SchemaError("grim profile needs an increasing grid with at least 16 interior points")
    profile = profile_from_samples(phi, psi, x, v, u, c)
    _grim_checks(report, profile, phi, psi, c)


def _verify_bowl(stored, data, report):
    res = stored.get("resolved") or {}
    F = _norm(res.get("F"), "F")
    G = _norm(res.get("G"), "G")
    N = int(res.get("N", 2))
    xi = res.get("xi")
    A = CylindricalAnisotropy(F, G, N, None if xi in (None, "euclidean") else _norm(xi, "xi"))
    r, w, alpha = data.T
    if len(r) < 3 or np.any(np.diff(r) <= 0):
        raise SchemaError("bowl profile needs an increasing grid")
    report.check("w_positive", bool(np.all(w > 0)), float(w.min()), 0.0)
    report.check("w_increasing", bool(np.all(np.diff(w) > 0)), float(np.diff(w).min()), 0.0)
    a_re = alpha_of_r(F, G, N, r)
    err = float(np.max(np.abs(a_re - alpha) / a_re))
    report.check("alpha_recomputed", err <= 1e-9, err, 1e-9)
    gap = float(np.max(w - a_re))
    report.check("w_below_alpha", gap <= 1e-8, gap, 1e-8)
    report.check("w_small_near_origin", w[0] < 1e-4, float(w[0]), 1e-4)
    # the stored grid is dense: a three-point derivative resolves the equation
    rhs = bowl_rhs(A, r[1:-1], w[1:-1])
    ode = float(np.max(np.abs(_three_point(r, w) - rhs) / (1 + np.abs(rhs))))
    report.check("ode_residual", ode <= 1e-3, ode, 1e-3)
    k = slope_coefficient(F, G, N)
    slope = w[-1] / r[-1]
    report.check("asymptotic_slope", abs(slope / k - 1) <= 0.02, slope, {"target": k, "relative": 0.02})
    u_end = float(np.sum(np.diff(r) * (w[1:] + w[:-1]) / 2))
    g = u_end / r[-1] ** 2
    kg = growth_coefficient(F, G, N)
    report.check("quadratic_growth", abs(g / kg - 1) <= 0.05, g, {"target": kg, "relative": 0.05})


def _verify_crystal_bowl(stored, data, report):
    B = _crystal_bowl({k: stored.get(k, DEFAULTS["crystal-bowl"][k]) for k in ("case", "N", "xi")})
    _crystal_bowl_checks(report, B)
    s, u = data.T
    err = float(np.max(np.abs(B.u(s) - u) / (1 + np.abs(u))))
    report.check("profile_matches_formula", err <= 1e-12, err, 1e-12)
    slopes = np.diff(u) / np.diff(s)
    report.check("convex", bool(np.all(np.diff(slopes) >= -1e-9)), float(np.diff(slopes).min()), -1e-9)


def _verify_polyline(stored, data, report, path):
    res = stored.get("resolved") or {}
    kind = res.get("kind")
    if kind == "dual" or path.name == "wulff.csv":
        norm = _norm(res.get("phi", res.get("norm")), "norm")
        _wulff_checks(report, norm, data)
        return
    if kind != "crystal-grim":
        raise SchemaError("cannot tell what this x,z polyline is; expected crystal-grim or dual output")
    phi = _norm(res.get("phi"), "phi")
    R = crystal_reaper(phi=phi)
    corners = data[1:-1]
    if len(corners) != R.k + 1:
        raise SchemaError("polyline does not have the facet count of this anisotropy")
    lengths = np.linalg.norm(np.diff(corners, axis=0), axis=1)
    stored = type(R)(R.normals, R.deltas, lengths, R.phi_values, data, R.width, R.height, R.plot_length)
    _facet_checks(report, stored, facet_speed_check(stored), phi)


def run_verify(cfg, out, report):
    if not cfg["profile"]:
        raise ConfigError("verify needs --profile")
    path = Path(cfg["profile"])
    header, data = read_csv(path)
    kind = HEADERS.get(tuple(header))
    if kind is None:
        raise SchemaError(f"unrecognised header {','.join(header)}")
    stored = _stored_config(cfg, path)
    report.diagnostics["kind"] = kind
    if kind == "grim":
        _verify_grim(stored, data, report)
    elif kind == "bowl":
        _verify_bowl(stored, data, report)
    elif kind == "crystal-bowl":
        _verify_crystal_bowl(stored, data, report)
    else:
        _verify_polyline(stored, data, report, path)


RUNNERS = {
    "grim": run_grim,
    "bowl": run_bowl,
    "crystal-grim": run_crystal_grim,
    "crystal-bowl": run_crystal_bowl,
    "dual": run_dual,
    "verify": run_verify,
}


def run(cfg):
    """Execute one resolved configuration; returns the exit code."""
    cmd = cfg["command"]
    if cfg.get("out"):
        out = Path(cfg["out"])
    elif cmd == "verify" and cfg.get("profile"):
        out = Path(cfg["profile"]).parent / "verify"
    else:
        out = Path(f"{cmd}-out")
    out.mkdir(parents=True, exist_ok=True)
    report = Report(cmd)
    try:
        RUNNERS[cmd](cfg, out, report)
    except (ConfigError, SchemaError, NonSmoothNormError) as exc:
        write_json(out / "report.json", report.to_dict("config-error", str(exc)))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ProfileError, ShootingError) as exc:
        write_json(out / "report.json", report.to_dict("solver-failure", str(exc)))
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    if cmd != "verify":
        write_json(out / "config.json", {k: v for k, v in cfg.items() if k not in ("out", "config_file")})
    status = "ok" if report.passed else "failed"
    write_json(out / "report.json", report.to_dict(status))
    for c in report.checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}")
    return 0 if report.passed else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cfg["config_file"] = args.config if args.command == "verify" else None
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
