"""mwave command-line front end.

Every command writes a CSV whose first line is a provenance header
``# mwave <command> version=<v> config=<hash>``. Exit status: 0 on success,
1 on usage errors, 2 when a checked tolerance is exceeded.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import math
import operator
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .acceptance import TORUS_DIAGONAL_TABLE, gegenbauer_checks, pole_triangle, run_all
from .config import COMMANDS, ConfigError, RunConfig
from .errors import MwaveError
from .maclaurin import MAX_DEPTH, pole_coefficients
from .sphere import gt_approx, heat_kernel_series, heat_trace, heat_trace_exact, ht_approx, sphere_kernel_series
from .spectral_core import (CONSTANTS_HEADER, ScaleGrid, SymbolFunction, calderon_constant, parse_symbol,
                            predicted_reconstruction_error, reconstruction_grid, truncation_constants)
from .torus import SeriesMode, TorusPoint, U_t, V_t, mexican_hat_T2, mexican_hat_T2_grid, torus_kernel, torus_kernel_grid
from .transform import (Manifold, SpectralField, apply_wavelet, holder_fit, holder_test_field,
                        localization_report, reconstruct, relative_l2_error, sup_curve)

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2
KERNEL_ONLY_SYMBOLS = {"gauss"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# value grammars
# ---------------------------------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text: str) -> float:
    """Float or a small arithmetic expression in ``pi`` (e.g. ``pi/2``, ``-3*pi/4``)."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(f"cannot parse number {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc


def parse_values(spec: str) -> np.ndarray:
    """``a,b,c`` | ``lo:hi:n`` (linear, inclusive) | ``log:lo:hi:n`` (geometric)."""
    spec = spec.strip()
    if spec.startswith("log:"):
        lo, hi, n = spec[4:].split(":")
        return np.geomspace(parse_number(lo), parse_number(hi), int(n))
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"range {spec!r} must be lo:hi:n")
        return np.linspace(parse_number(parts[0]), parse_number(parts[1]), int(parts[2]))
    return np.array([parse_number(p) for p in spec.split(",") if p.strip()])


def read_field(path, manifold: Manifold) -> SpectralField:
    """CSV with header (index columns..., coefficient); '#' lines ignored."""
    names = manifold.index_names
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    header = [h.strip() for h in rows[0]]
    expected = list(names) + ["coefficient"]
    if manifold is Manifold.SPHERE2 and header == ["l", "coefficient"]:
        rows = [[r[0], "0", r[1]] for r in rows[1:]]
    elif header != expected:
        raise ValueError(f"field header must be {','.join(expected)}")
    else:
        rows = rows[1:]
    coeffs = {tuple(int(v) for v in r[:-1]): float(r[-1]) for r in rows}
    return SpectralField.from_coeffs(manifold, coeffs)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


class CsvOut:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.buf = io.StringIO()
        self.buf.write(f"# mwave {cfg.command} version={__version__} config={cfg.digest()}\n")
        self.writer = csv.writer(self.buf, lineterminator="\n")
        self.suppress = False

    def header(self, cols):
        self.writer.writerow(cols)

    def row(self, values):
        self.writer.writerow([_fmt(v) for v in values])

    def say(self, msg: str):
        """Human-readable summary; kept off stdout when the CSV goes there."""
        print(msg, file=sys.stdout if self.cfg.output else sys.stderr)

    def comment(self, text: str):
        self.buf.write(f"# {text}\n")

    def flush(self):
        if self.suppress:
            return
        text = self.buf.getvalue()
        if self.cfg.output:
            Path(self.cfg.output).write_text(text)
        else:
            sys.stdout.write(text)


def _workers() -> int:
    raw = os.environ.get("MWAVE_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"MWAVE_THREADS must be an integer, got {raw!r}")


def _require(cfg: RunConfig, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {cfg.command}")


def _values(cfg: RunConfig, name: str, default: str) -> np.ndarray:
    try:
        return parse_values(getattr(cfg, name) or default)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}")


def _ts(cfg: RunConfig, default: str) -> np.ndarray:
    ts = _values(cfg, "t", default)
    if ts.size == 0 or np.any(ts <= 0):
        raise UsageError("--t: scales must be positive")
    return ts


def _symbol(cfg: RunConfig) -> SymbolFunction:
    try:
        f = parse_symbol(cfg.symbol)
    except ValueError as exc:
        raise UsageError(f"--symbol: {exc}")
    if cfg.command not in ("kernel", "validate") and f.name in KERNEL_ONLY_SYMBOLS:
        raise UsageError(f"--symbol {f.name} is not a wavelet (f(0) != 0); only kernel/validate accept it")
    return f


def _manifold(cfg: RunConfig, default: Optional[str] = None) -> Manifold:
    name = cfg.manifold or default
    if name is None:
        raise UsageError(f"--manifold is required for {cfg.command}")
    try:
        return Manifold(name)
    except ValueError:
        raise UsageError(f"--manifold must be one of {', '.join(m.value for m in Manifold)}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_kernel(cfg: RunConfig, out: CsvOut) -> int:
    f = _symbol(cfg)
    manifold = _manifold(cfg)
    ts = _ts(cfg, "0.1")
    if manifold is Manifold.SPHERE2:
        theta = _values(cfg, "theta", "0:pi:512")
        out.header(["t", "theta", "h_t", "4pi_h_t"])
        for t in ts:
            h = np.atleast_1d(sphere_kernel_series(f, t, np.cos(theta), cfg.n, cfg.L_max))
            for th, v in zip(theta, h):
                out.row([t, th, v, 4 * math.pi * v])
        return EXIT_OK
    if manifold is Manifold.TORUS1:
        x = _values(cfg, "x", "-0.5:0.5:65")
        out.header(["t", "x", "U_t", "V_t", "K_t"])
        for t in ts:
            U, V = np.atleast_1d(U_t(t, x)), np.atleast_1d(V_t(t, x))
            K = torus_kernel(f, t, x[:, None])
            for row in zip(x, U, V, K):
                out.row([t, *row])
        return EXIT_OK

    def h(t, s1, s2):
        if f.name == "paper-torus":
            return mexican_hat_T2(t, s1, s2)
        return torus_kernel(f, t, np.stack(np.broadcast_arrays(s1, s2), axis=-1))

    out.header(["t", "s1", "s2", "h_t", "pi_h_t", "t2_pi_h_t"])
    reports = []
    for t in ts:
        if cfg.point is not None:
            pt = _values(cfg, "point", "")
            if pt.size != 2:
                raise UsageError("--point needs two coordinates s1,s2")
            s1, s2 = pt
            p = TorusPoint((s1, s2))
            v = float(h(t, *p.coords))
            out.row([t, s1, s2, v, math.pi * v, t * t * math.pi * v])
            reports.append((t, v))
            continue
        R = cfg.grid or 64
        if f.name == "paper-torus":
            axis = (np.arange(R) - R // 2) / R
            vals = mexican_hat_T2_grid(t, axis)
        else:
            axis, vals = torus_kernel_grid(f, t, max(R, 2 * math.ceil(8 / t) + 2))
            if axis.size != R:
                # resample onto the requested grid by direct evaluation
                axis = (np.arange(R) - R // 2) / R
                S1, S2 = np.meshgrid(axis, axis, indexing="ij")
                vals = h(t, S1, S2)
        for i, a in enumerate(axis):
            for j, b in enumerate(axis):
                v = vals[i, j]
                out.row([t, a, b, v, math.pi * v, t * t * math.pi * v])
    if cfg.report:
        scale = {"h": 1.0, "pi": math.pi, "t2pi": None}
        if cfg.report not in scale:
            raise UsageError("--report must be h, pi or t2pi")
        for t, v in reports:
            k = t * t * math.pi if cfg.report == "t2pi" else scale[cfg.report]
            print(format(k * v, ".5f"))
        # a bare --report answers on stdout; the CSV is only written with --output
        out.suppress = not cfg.output
    return EXIT_OK


def _validate_approx(cfg, out, which: str) -> int:
    t = float(_ts(cfg, "0.1")[0])
    theta = np.linspace(-math.pi, math.pi, cfg.samples)
    L = cfg.L_max or 2000
    x = np.cos(theta)
    if which == "gt":
        series = 4 * math.pi * heat_kernel_series(t, x, L)
        approx = gt_approx(t, theta)
        tol = cfg.tol("gt_approx")
    else:
        series = 4 * math.pi * sphere_kernel_series(parse_symbol("mexican:1"), t, x, 2, L)
        approx = ht_approx(t, theta, cfg.form)
        tol = cfg.tol("ht_approx")
    err = np.abs(approx - series)
    out.header(["theta", "series", "approx", "abs_err"])
    for row in zip(theta, series, approx, err):
        out.row(row)
    worst = float(err.max())
    out.say(f"{which}-approx t={t:g}: max abs error {worst:.6e} (tol {tol:g})")
    return EXIT_OK if worst <= tol else EXIT_TOLERANCE


def _validate_duality(cfg, out) -> int:
    ts = _ts(cfg, "0.05,0.1,0.3,1,3")
    x = _values(cfg, "x", "") if cfg.x else (np.arange(64) + 0.5) / 64 - 0.5
    out.header(["t", "x", "U_eigen", "U_poisson", "V_eigen", "V_poisson"])
    worst = 0.0
    for t in ts:
        ue, up = U_t(t, x, SeriesMode.EIGEN), U_t(t, x, SeriesMode.POISSON)
        ve, vp = V_t(t, x, SeriesMode.EIGEN), V_t(t, x, SeriesMode.POISSON)
        worst = max(worst, float(np.abs(ue - up).max()), float(np.abs(ve - vp).max()))
        for row in zip(x, ue, up, ve, vp):
            out.row([t, *row])
    tol = cfg.tol("theta_duality")
    out.say(f"theta duality: max |eigen - poisson| {worst:.3e} (tol {tol:g})")
    return EXIT_OK if worst <= tol else EXIT_TOLERANCE


def _validate_heat_trace(cfg, out) -> int:
    ss = _ts(cfg, "0.01,0.1")
    out.header(["s", "asymptotic", "exact", "rel_err"])
    status = EXIT_OK
    for s in ss:
        approx, exact = heat_trace(s), heat_trace_exact(s)
        rel = abs(approx / exact - 1)
        out.row([s, approx, exact, rel])
        tol = cfg.tol("heat_trace_small") if s <= 0.01 else cfg.tol("heat_trace_large") if s <= 0.1 else None
        if tol is not None and rel > tol:
            status = EXIT_TOLERANCE
        out.say(f"heat trace s={s:g}: rel err {rel:.3e}" + (f" (tol {tol:g})" if tol else ""))
    return status


def _validate_torus_diagonal(cfg, out) -> int:
    tol = cfg.tol("torus_diagonal")
    out.header(["t", "t2_pi_h_t", "quoted", "abs_err"])
    worst = 0.0
    ts = _ts(cfg, ",".join(str(t) for t in TORUS_DIAGONAL_TABLE))
    for t in ts:
        v = t * t * math.pi * mexican_hat_T2(t, 0.0, 0.0)
        quoted = TORUS_DIAGONAL_TABLE.get(float(t))
        err = abs(v - quoted) if quoted is not None else float("nan")
        if quoted is not None:
            worst = max(worst, err)
        out.row([t, v, "" if quoted is None else quoted, "" if quoted is None else err])
    out.say(f"torus diagonal: max abs error {worst:.3e} (tol {tol:g})")
    return EXIT_OK if worst <= tol else EXIT_TOLERANCE


def _closed_form_calderon(f: SymbolFunction) -> Optional[float]:
    if f.name.startswith("mexican:"):
        m = f.vanishing_order
        return math.gamma(2 * m) / 4.0**m
    if f.name == "paper-torus":
        return 1.0 / (4 * math.pi**2)
    return None


def _validate_calderon(cfg, out) -> int:
    f = _symbol(cfg)
    if not f.admissible:
        raise UsageError(f"--symbol {f.name} has no Calderon constant (f(0) != 0)")
    c = calderon_constant(f, 1e-11)
    exact = _closed_form_calderon(f)
    out.header(["symbol", "c", "closed_form", "rel_err"])
    rel = abs(c / exact - 1) if exact else float("nan")
    out.row([f.name, c, "" if exact is None else exact, "" if exact is None else rel])
    out.say(f"calderon {f.name}: c = {c:.15g}" + (f", rel err {rel:.2e}" if exact else ""))
    return EXIT_OK if exact is None or rel <= cfg.tol("calderon") else EXIT_TOLERANCE


def _validate_constants(cfg, out) -> int:
    f = _symbol(cfg)
    if not f.admissible:
        raise UsageError(f"--symbol {f.name} is not admissible")
    eta = cfg.eta if cfg.eta is not None else 4 * math.pi**2
    L = cfg.L if cfg.L is not None else 400 * math.pi**2
    try:
        k = truncation_constants(f, eta, L, cfg.J)
    except ValueError as exc:
        raise UsageError(f"--eta/--L/--J: {exc}")
    out.header(CONSTANTS_HEADER)
    out.row(k.as_row(f.name))
    return EXIT_OK


def _validate_gegenbauer(cfg, out) -> int:
    res = gegenbauer_checks(cfg.all_tolerances)
    out.header(["check", "passed", "measured"])
    out.row(["gegenbauer", res.passed, res.measured])
    out.say(res.line())
    return EXIT_OK if res.passed else EXIT_TOLERANCE


def _validate_pole(cfg, out) -> int:
    res = pole_triangle(cfg.all_tolerances)
    out.header(["m", "n", "i", "a_i"])
    for m in range(1, min(4, MAX_DEPTH) + 1):
        for i, a in enumerate(pole_coefficients(m, cfg.n), 1):
            out.row([m, cfg.n, i, a])
    out.say(res.line())
    return EXIT_OK if res.passed else EXIT_TOLERANCE


VALIDATE_TARGETS = {
    "ht-approx": lambda c, o: _validate_approx(c, o, "ht"),
    "gt-approx": lambda c, o: _validate_approx(c, o, "gt"),
    "theta-duality": _validate_duality,
    "heat-trace": _validate_heat_trace,
    "torus-diagonal": _validate_torus_diagonal,
    "calderon": _validate_calderon,
    "truncation-constants": _validate_constants,
    "gegenbauer": _validate_gegenbauer,
    "pole-triangle": _validate_pole,
}


def cmd_validate(cfg: RunConfig, out: CsvOut) -> int:
    _require(cfg, "target")
    if cfg.target not in VALIDATE_TARGETS:
        raise UsageError(f"--target must be one of {', '.join(VALIDATE_TARGETS)}")
    return VALIDATE_TARGETS[cfg.target](cfg, out)


def _load_field(cfg: RunConfig) -> SpectralField:
    _require(cfg, "field")
    manifold = _manifold(cfg, "torus2")
    try:
        return read_field(cfg.field, manifold)
    except (OSError, ValueError, IndexError) as exc:
        raise UsageError(f"--field: {exc}")


def cmd_cwt(cfg: RunConfig, out: CsvOut) -> int:
    f = _symbol(cfg)
    F = _load_field(cfg)
    ts = _ts(cfg, "log:0.01:1:21")
    out.header(["t", *F.manifold.index_names, "coefficient"])
    for t in ts:
        TF = apply_wavelet(F, f, t)
        for m, v in zip(TF.modes, TF.values):
            out.row([t, *m.tolist(), v])
    return EXIT_OK


def cmd_reconstruct(cfg: RunConfig, out: CsvOut) -> int:
    f = _symbol(cfg)
    F = _load_field(cfg)
    lam = F.eigenvalues[F.eigenvalues > 0]
    if lam.size == 0:
        raise UsageError("--field has no non-constant modes")
    eta = cfg.eta if cfg.eta is not None else float(lam.min())
    L = cfg.L if cfg.L is not None else float(lam.max())
    if eta >= L:
        L = eta * (1 + 1e-9)
    if cfg.t_min is not None and cfg.t_max is not None:
        grid = ScaleGrid.log_trapezoid(cfg.t_min, cfg.t_max, cfg.nodes_per_decade)
        predicted = predicted_reconstruction_error(f, grid, truncation_constants(f, eta, L, cfg.J))
    else:
        grid, predicted = reconstruction_grid(f, eta, L, cfg.target_error, cfg.J, cfg.nodes_per_decade)
    G = reconstruct(F, f, grid)
    err = relative_l2_error(G, F)
    out.header([*F.manifold.index_names, "original", "reconstructed"])
    for m, a, b in zip(F.modes, F.values, G.values):
        out.row([*m.tolist(), a, b])
    out.comment(f"t_min={grid.t_min:.17g} t_max={grid.t_max:.17g} predicted={predicted:.17g} measured={err:.17g}")
    out.say(f"reconstruction: measured {err:.3e}, predicted {predicted:.3e}, "
          f"grid [{grid.t_min:.4g}, {grid.t_max:.4g}] ({grid.nodes.size} nodes)")
    return EXIT_OK if err <= 2 * predicted else EXIT_TOLERANCE


def cmd_holder(cfg: RunConfig, out: CsvOut) -> int:
    f = _symbol(cfg)
    if cfg.test_field is not None:
        if cfg.test_field != "sqrt-sine":
            raise UsageError("--test-field must be sqrt-sine")
        F = holder_test_field(cfg.bandlimit)
    else:
        F = _load_field(cfg)
    ts = _ts(cfg, "log:1e-3:1e-1:21")
    lo = cfg.t_min if cfg.t_min is not None else 1e-3
    hi = cfg.t_max if cfg.t_max is not None else 1e-1
    curve = sup_curve(F, f, ts, cfg.resolution)
    out.header(["t", "sup_norm"])
    for row in curve:
        out.row(row)
    try:
        fit = holder_fit(curve, (lo, hi))
    except ValueError as exc:
        raise UsageError(f"--t: {exc}")
    out.comment(f"alpha={fit.alpha:.17g} C={fit.C:.17g} r2={fit.r2:.17g}")
    out.say(f"holder fit: alpha {fit.alpha:.4f}, C {fit.C:.4g}, r2 {fit.r2:.5f}")
    if cfg.test_field == "sqrt-sine":
        ok = abs(fit.alpha - 0.5) <= cfg.tol("holder_alpha") and fit.r2 >= cfg.tol("holder_r2")
        return EXIT_OK if ok else EXIT_TOLERANCE
    return EXIT_OK


def cmd_localize(cfg: RunConfig, out: CsvOut) -> int:
    f = _symbol(cfg)
    manifold = _manifold(cfg)
    ts = _ts(cfg, "log:0.05:1:12")
    res = cfg.resolution or (2001 if manifold is Manifold.SPHERE2 else 256)
    rep = localization_report(f, manifold, ts, cfg.N, res, workers=_workers())
    out.header(["t", "weighted_sup"])
    for row in rep.rows:
        out.row(row)
    tol = cfg.tol("localization")
    out.say(f"localization {manifold.value} N={cfg.N}: max/min ratio {rep.ratio:.4g} (tol {tol:g})")
    return EXIT_OK if rep.ratio <= tol else EXIT_TOLERANCE


def cmd_accept(cfg: RunConfig, out: CsvOut) -> int:
    results = run_all(cfg.all_tolerances)
    out.header(["criterion", "name", "passed", "measured", "tolerance", "within_budget"])
    for r in results:
        out.say(r.line())
        out.row([r.number, r.name, r.passed, r.measured, r.tolerance, r.within_budget])
    failed = [r for r in results if not r.ok]
    out.say(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_TOLERANCE


HANDLERS = {
    "kernel": cmd_kernel, "validate": cmd_validate, "cwt": cmd_cwt, "reconstruct": cmd_reconstruct,
    "holder": cmd_holder, "localize": cmd_localize, "accept": cmd_accept,
}
assert set(HANDLERS) == set(COMMANDS)


def run(cfg: RunConfig) -> int:
    out = CsvOut(cfg)
    status = HANDLERS[cfg.command](cfg, out)
    out.flush()
    return status


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mwave", description="Spectral wavelets on the torus and the sphere.")
    p.add_argument("--version", action="version", version=f"mwave {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="key=value file; flags override its entries")
        sp.add_argument("--output", "-o", help="CSV path (default: stdout)")
        sp.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a tolerance (repeatable)")

    def symbol(sp):
        sp.add_argument("--symbol", help="mexican:m | paper-torus | gauss")

    sp = sub.add_parser("kernel", help="evaluate K_t on a grid or at a point")
    common(sp), symbol(sp)
    sp.add_argument("--manifold", choices=[m.value for m in Manifold])
    sp.add_argument("--t", help="scale list: a,b | lo:hi:n | log:lo:hi:n")
    sp.add_argument("--theta", help="sphere angles, e.g. 0:pi:512")
    sp.add_argument("--x", help="T^1 sample points")
    sp.add_argument("--point", help="T^2 point s1,s2")
    sp.add_argument("--grid", type=int, help="T^2 grid resolution")
    sp.add_argument("--L-max", dest="L_max", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--report", choices=["h", "pi", "t2pi"], help="print the point value in this scaling")

    sp = sub.add_parser("validate", help="cross-check two methods against a tolerance")
    common(sp), symbol(sp)
    sp.add_argument("--target", choices=list(VALIDATE_TARGETS))
    sp.add_argument("--t")
    sp.add_argument("--x")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--L-max", dest="L_max", type=int)
    sp.add_argument("--form", choices=["differentiated", "direct"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--L", type=float)
    sp.add_argument("--J", type=int)

    sp = sub.add_parser("cwt", help="wavelet coefficients of a field across scales")
    common(sp), symbol(sp)
    sp.add_argument("--manifold", choices=[m.value for m in Manifold])
    sp.add_argument("--field", help="coefficient CSV")
    sp.add_argument("--t")

    sp = sub.add_parser("reconstruct", help="reconstruct a field from its transform")
    common(sp), symbol(sp)
    sp.add_argument("--manifold", choices=[m.value for m in Manifold])
    sp.add_argument("--field")
    sp.add_argument("--eta", type=float)
    sp.add_argument("--L", type=float)
    sp.add_argument("--J", type=int)
    sp.add_argument("--target-error", dest="target_error", type=float)
    sp.add_argument("--t-min", dest="t_min", type=float)
    sp.add_argument("--t-max", dest="t_max", type=float)
    sp.add_argument("--nodes-per-decade", dest="nodes_per_decade", type=int)

    sp = sub.add_parser("holder", help="fit the decay exponent of sup |T_t F|")
    common(sp), symbol(sp)
    sp.add_argument("--manifold", choices=[m.value for m in Manifold])
    sp.add_argument("--field")
    sp.add_argument("--test-field", dest="test_field", choices=["sqrt-sine"])
    sp.add_argument("--bandlimit", type=int)
    sp.add_argument("--t")
    sp.add_argument("--t-min", dest="t_min", type=float)
    sp.add_argument("--t-max", dest="t_max", type=float)
    sp.add_argument("--resolution", type=int)

    sp = sub.add_parser("localize", help="weighted kernel sup across scales")
    common(sp), symbol(sp)
    sp.add_argument("--manifold", choices=[m.value for m in Manifold])
    sp.add_argument("--t")
    sp.add_argument("--N", type=int)
    sp.add_argument("--resolution", type=int)

    sp = sub.add_parser("accept", help="run every acceptance criterion")
    common(sp)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    items: dict = {}
    if getattr(args, "config", None):
        try:
            base = RunConfig.from_file(args.config)
        except OSError as exc:
            raise UsageError(f"--config: {exc}")
        for line in base.to_string().splitlines():
            k, v = line.split("=", 1)
            items[k] = v
    skip = {"config", "tol"}
    for key, val in vars(args).items():
        if key in skip or val is None:
            continue
        items[key] = val if isinstance(val, str) else repr(val) if isinstance(val, float) else str(val)
    for spec in args.tol:
        if "=" not in spec:
            raise UsageError(f"--tol expects NAME=VALUE, got {spec!r}")
        k, v = spec.split("=", 1)
        items[f"tol.{k.strip()}"] = v
    return RunConfig.from_mapping(items)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        try:
            cfg = config_from_args(args)
        except (ConfigError, ValueError) as exc:
            raise UsageError(f"--config/--tol: {exc}")
        return run(cfg)
    except UsageError as exc:
        print(f"mwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MwaveError, ValueError) as exc:
        print(f"mwave: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
