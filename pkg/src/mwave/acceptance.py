"""Exit criteria for the package, runnable from pytest or ``mwave accept``.

Each criterion returns a CriterionResult carrying the measured quantity,
the tolerance it was held to, and the wall-clock time against its budget.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT_TOLERANCES
from .maclaurin import maclaurin_from_pole, pole_coefficients, pole_matrix
from .sphere import (GegenbauerEvaluator, gegenbauer, gt_approx, heat_kernel_series, heat_trace,
                     heat_trace_exact, ht_approx, mexican_series)
from .spectral_core import ScaleGrid, calderon_constant, mexican, paper_torus, reconstruction_grid
from .torus import SeriesMode, U_t, V_t, mexican_hat_T2
from .transform import (Manifold, calderon_identity_check, holder_fit, holder_test_field,
                        localization_report, random_field, reconstruct, relative_l2_error, sup_curve)

# values quoted for t^2 pi h_t(0, 0) on T^2
TORUS_DIAGONAL_TABLE = {2.0: 0.00070, 1.0: 0.59017, 0.5: 0.99984, 0.125: 1.00000}
# largest-error points of the S^2 approximations at t = 0.1
SPOT_G = (0.3, 10.655)
SPOT_H = (0.4, -5.593)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: str
    tolerance: str
    runtime: float
    budget: float

    @property
    def within_budget(self) -> bool:
        return self.runtime <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def line(self) -> str:
        flag = "PASS" if self.ok else "FAIL"
        return (f"[{flag}] {self.number:>2} {self.name:<28} {self.measured}  "
                f"(tol {self.tolerance}; {self.runtime:.2f}s / {self.budget:.0f}s)")


def _timed(number: int, name: str, budget: float, fn: Callable[[], tuple]) -> CriterionResult:
    t0 = time.perf_counter()
    passed, measured, tol = fn()
    return CriterionResult(number, name, bool(passed), measured, tol, time.perf_counter() - t0, budget)


def _tols(tols: Optional[dict]) -> dict:
    out = dict(DEFAULT_TOLERANCES)
    out.update(tols or {})
    return out


def torus_diagonal(tols=None) -> CriterionResult:
    tol = _tols(tols)["torus_diagonal"]

    def run():
        errs = {t: abs(t * t * math.pi * mexican_hat_T2(t, 0.0, 0.0) - v)
                for t, v in TORUS_DIAGONAL_TABLE.items()}
        worst = max(errs.values())
        return worst <= tol, f"max |err| = {worst:.2e}", f"{tol:g}"

    return _timed(1, "torus diagonal table", 1.0, run)


def theta_duality(tols=None) -> CriterionResult:
    tol = _tols(tols)["theta_duality"]

    def run():
        x = (np.arange(64) + 0.5) / 64 - 0.5
        worst = 0.0
        for t in (0.05, 0.1, 0.3, 1.0, 3.0):
            for F in (U_t, V_t):
                d = np.abs(F(t, x, SeriesMode.EIGEN) - F(t, x, SeriesMode.POISSON)).max()
                worst = max(worst, float(d))
        return worst <= tol, f"max |eigen - poisson| = {worst:.2e}", f"{tol:g}"

    return _timed(2, "theta duality", 1.0, run)


def sphere_approximations(tols=None) -> CriterionResult:
    T = _tols(tols)
    t = 0.1

    def run():
        theta = np.linspace(-math.pi, math.pi, 2048)
        x = np.cos(theta)
        g = 4 * math.pi * heat_kernel_series(t, x, 2000)
        h = 4 * math.pi * mexican_series(t, x, 2000)
        eg = float(np.abs(gt_approx(t, theta) - g).max())
        eh = float(np.abs(ht_approx(t, theta) - h).max())
        spots = []
        for (th, quoted), series, approx in ((SPOT_G, heat_kernel_series, gt_approx),
                                             (SPOT_H, mexican_series, ht_approx)):
            s_val = 4 * math.pi * series(t, math.cos(th), 2000)
            a_val = approx(t, th)
            spots.append(max(abs(s_val - quoted), abs(a_val - quoted)))
        ok = eg <= T["gt_approx"] and eh <= T["ht_approx"] and max(spots) <= T["spot_value"]
        return (ok, f"g err {eg:.2e}, h err {eh:.2e}, spot {max(spots):.1e}",
                f"{T['gt_approx']:g}/{T['ht_approx']:g}/{T['spot_value']:g}")

    return _timed(3, "sphere approximations", 5.0, run)


def heat_trace_asymptotics(tols=None) -> CriterionResult:
    T = _tols(tols)

    def run():
        r1 = abs(heat_trace(0.01) / heat_trace_exact(0.01) - 1)
        r2 = abs(heat_trace(0.1) / heat_trace_exact(0.1) - 1)
        ok = r1 <= T["heat_trace_small"] and r2 <= T["heat_trace_large"]
        return ok, f"rel err {r1:.1e} (s=0.01), {r2:.1e} (s=0.1)", \
            f"{T['heat_trace_small']:g}/{T['heat_trace_large']:g}"

    return _timed(4, "heat trace asymptotics", 1.0, run)


def calderon_constants(tols=None) -> CriterionResult:
    tol = _tols(tols)["calderon"]

    def run():
        r1 = abs(calderon_constant(mexican(1), 1e-11) / 0.25 - 1)
        r2 = abs(calderon_constant(mexican(2), 1e-11) / 0.375 - 1)
        worst = max(r1, r2)
        return worst <= tol, f"rel err {worst:.1e}", f"{tol:g}"

    return _timed(5, "Calderon constants", 1.0, run)


def spectral_calderon(tols=None) -> CriterionResult:
    T = _tols(tols)

    def run():
        f = mexican(1)
        c = calderon_constant(f)
        grid = ScaleGrid.log_trapezoid(1e-6, 10.0, 400)
        lams = [4 * math.pi**2, 100 * math.pi**2] + [l * (l + 1.0) for l in (1, 10, 50)]
        per_mode = max(abs(float(grid.multiplier(f, lam)[0]) - c / 2) for lam in lams)
        rng = np.random.default_rng(20100)
        F = random_field(Manifold.TORUS2, 20, rng)
        rel = calderon_identity_check(F, f, grid, c=c).rel_err
        ok = per_mode <= T["calderon_mode"] and rel <= T["calderon_field"]
        return ok, f"mode err {per_mode:.1e}, field rel err {rel:.1e}", \
            f"{T['calderon_mode']:g}/{T['calderon_field']:g}"

    return _timed(6, "spectral Calderon identity", 5.0, run)


def reconstruction(tols=None) -> CriterionResult:
    T = _tols(tols)

    def run():
        f = mexican(1)
        eta, L = 4 * math.pi**2, 400 * math.pi**2
        grid, predicted = reconstruction_grid(f, eta, L, T["reconstruction_target"])
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(50):
            F = random_field(Manifold.TORUS2, 20, rng, lam_range=(eta, L))
            worst = max(worst, relative_l2_error(reconstruct(F, f, grid), F))
        ok = worst <= T["reconstruction"] and worst <= 2 * predicted
        return ok, f"measured {worst:.2e} vs predicted {predicted:.1e}", f"{T['reconstruction']:g}"

    return _timed(7, "predicted reconstruction", 10.0, run)


def holder_estimation(tols=None) -> CriterionResult:
    T = _tols(tols)

    def run():
        F = holder_test_field(256)
        ts = np.logspace(-3, -1, 21)
        fit = holder_fit(sup_curve(F, mexican(1), ts), (1e-3, 1e-1))
        ok = abs(fit.alpha - 0.5) <= T["holder_alpha"] and fit.r2 >= T["holder_r2"]
        return ok, f"alpha {fit.alpha:.4f}, r2 {fit.r2:.4f}", \
            f"0.5+-{T['holder_alpha']:g}, r2>={T['holder_r2']:g}"

    return _timed(8, "Holder exponent", 10.0, run)


def localization(tols=None) -> CriterionResult:
    tol = _tols(tols)["localization"]

    def run():
        ts = np.geomspace(0.05, 1.0, 12)
        s2 = localization_report(mexican(1), Manifold.SPHERE2, ts, 3, resolution=2001).ratio
        # Mexican hat on T^2 in its torus normalisation (U_t/V_t form)
        t2 = localization_report(paper_torus(), Manifold.TORUS2, ts, 3, resolution=256).ratio
        ok = s2 <= tol and t2 <= tol
        return ok, f"ratio S2 {s2:.2f}, T2 {t2:.2f}", f"{tol:g}"

    return _timed(9, "localization boundedness", 10.0, run)


def gegenbauer_checks(tols=None) -> CriterionResult:
    tol = _tols(tols)["gegenbauer"]

    def run():
        exact = all(
            round(gegenbauer(l, (n - 1) / 2, 1.0)) == GegenbauerEvaluator(n).at_one(l)
            for n in (2, 3, 4) for l in range(61)
        )
        r, tau = 0.3, 0.7
        worst = 0.0
        for lam in (0.5, 1.0, 1.5):
            partial = math.fsum(gegenbauer(l, lam, tau) * r**l for l in range(61))
            closed = (1 - 2 * r * tau + r * r) ** (-lam)
            worst = max(worst, abs(partial / closed - 1))
        return exact and worst <= tol, f"binomials exact={exact}, genfn rel err {worst:.1e}", f"{tol:g}"

    return _timed(10, "Gegenbauer correctness", 1.0, run)


def fourth_derivative_fd(g: Callable[[float], float], h: float = 1e-2) -> float:
    """Richardson-extrapolated central difference for g''''(0)."""
    def d4(k):
        return (g(2 * k) - 4 * g(k) + 6 * g(0.0) - 4 * g(-k) + g(-2 * k)) / k**4
    return (4 * d4(h / 2) - d4(h)) / 3


def pole_triangle(tols=None) -> CriterionResult:
    tol = _tols(tols)["pole_fd"]

    def run():
        # m = 1: both sides reduce to u'(1)
        sym = all(
            pole_matrix(1, 1)[0][0] == 1 and pole_matrix(1, n)[0][0] == n
            and pole_coefficients(1, n) == (Fraction(-1, n),)
            for n in (2, 3, 4, 5)
        )
        # m = 2, n = 2, u = P_2: Delta^i U(N) = 6^i
        exact = maclaurin_from_pole(2, [6, 36], 2)
        fd = fourth_derivative_fd(lambda th: 0.5 * (3 * math.cos(th) ** 2 - 1))
        rel = abs(float(exact) - fd) / abs(fd)
        return sym and rel <= tol, f"m=1 exact={sym}, m=2 rel err {rel:.1e}", f"{tol:g}"

    return _timed(11, "pole-derivative triangle", 1.0, run)


CRITERIA = (
    torus_diagonal, theta_duality, sphere_approximations, heat_trace_asymptotics,
    calderon_constants, spectral_calderon, reconstruction, holder_estimation,
    localization, gegenbauer_checks, pole_triangle,
)


def run_all(tols: Optional[dict] = None) -> list:
    return [crit(tols) for crit in CRITERIA]
