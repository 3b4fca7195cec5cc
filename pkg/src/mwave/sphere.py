"""Zonal wavelet kernels on S^n and their small-scale approximations on S^2.

On S^n the kernel of f(t^2 Delta) is zonal:

    K_t(N, y) = sum_l c_l f(t^2 l(l+n-1)) P_l^lam(y_1),   lam = (n-1)/2,

with c_l = (n+2l-1) / (omega_n (n-1)). For n = 2 and small t the series
needs O(1/t) terms; the closed forms ``gt_approx``/``ht_approx`` built
from the heat-trace expansion avoid that.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import NotUnitVector, TruncationWarning
from .spectral_core import SymbolFunction, gauss, mexican

# ---------------------------------------------------------------------------
# Gegenbauer polynomials and zonal coefficients
# ---------------------------------------------------------------------------


def gegenbauer(l: int, lam: float, tau):
    """P_l^lam(tau) by the three-term recursion seeded with P_0 = 1, P_1 = 2 lam tau."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    tau = np.asarray(tau, dtype=float)
    prev = np.ones_like(tau)
    if l == 0:
        return prev if tau.ndim else float(prev)
    cur = 2.0 * lam * tau
    for k in range(1, l):
        prev, cur = cur, (2.0 * (k + lam) * tau * cur - (k + 2.0 * lam - 1.0) * prev) / (k + 1)
    return cur if tau.ndim else float(cur)


@dataclass(frozen=True)
class GegenbauerEvaluator:
    """Streams P_0^lam(tau), P_1^lam(tau), ... for a fixed array of tau."""

    n: int
    lam: float = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sphere dimension must be >= 1")
        object.__setattr__(self, "lam", (self.n - 1) / 2.0)

    def iterate(self, tau, L: int):
        tau = np.asarray(tau, dtype=float)
        lam = self.lam
        prev = np.ones_like(tau)
        yield prev
        if L == 0:
            return
        cur = 2.0 * lam * tau
        yield cur
        for k in range(1, L):
            prev, cur = cur, (2.0 * (k + lam) * tau * cur - (k + 2.0 * lam - 1.0) * prev) / (k + 1)
            yield cur

    def at_one(self, l: int) -> int:
        """Exact P_l^lam(1) = binom(n+l-2, l)."""
        return math.comb(self.n + l - 2, l)


def sphere_area(n: int) -> float:
    """omega_n, the surface area of S^n."""
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)


assert abs(sphere_area(2) - 4.0 * math.pi) < 1e-14


def harmonic_dimension(n: int, l: int) -> int:
    """dim H_l on S^n."""
    if l == 0:
        return 1
    return math.comb(n + l, n) - math.comb(n + l - 2, n)


def zonal_coefficient(n: int, l: int) -> float:
    if n < 2:
        raise ValueError("zonal coefficients need n >= 2")
    return (n + 2 * l - 1) / (sphere_area(n) * (n - 1))


def default_lmax(t: float) -> int:
    return int(math.ceil(12.0 / t)) + 16


def sphere_eigenvalue(l: int, n: int = 2) -> float:
    return float(l * (l + n - 1))


@dataclass(frozen=True)
class ZonalKernel:
    """Coefficients a_l = c_l f(t^2 l(l+n-1)), so K_t(N, y) = sum a_l P_l^lam(y_1)."""

    t: float
    n: int
    coeffs: np.ndarray
    omega_n: float

    @classmethod
    def build(cls, f: SymbolFunction, t: float, n: int = 2, L_max: Optional[int] = None) -> "ZonalKernel":
        if t <= 0:
            raise ValueError("t must be positive")
        L = default_lmax(t) if L_max is None else int(L_max)
        if L < 1:
            raise ValueError("L_max must be >= 1")
        l = np.arange(L + 1, dtype=float)
        c = (n + 2 * l - 1) / (sphere_area(n) * (n - 1))
        a = c * f.evaluate(t * t * l * (l + n - 1))
        a.setflags(write=False)
        return cls(t, n, a, sphere_area(n))

    @property
    def L_max(self) -> int:
        return self.coeffs.size - 1

    def check_truncation(self, tol: float = 1e-12):
        ev = GegenbauerEvaluator(self.n)
        size = np.abs(self.coeffs) * np.array([ev.at_one(l) for l in range(self.L_max + 1)], dtype=float)
        if size.max() > 0 and size[-1] > tol * size.max():
            warnings.warn(f"zonal series truncated at l={self.L_max} while terms are still "
                          f"{size[-1] / size.max():.2e} of the largest", TruncationWarning, stacklevel=3)

    def __call__(self, cos_theta):
        x = np.asarray(cos_theta, dtype=float)
        acc = np.zeros_like(x)
        for a, P in zip(self.coeffs, GegenbauerEvaluator(self.n).iterate(x, self.L_max)):
            acc = acc + a * P
        return acc if x.ndim else float(acc)

    def diagonal_trace(self) -> float:
        """omega_n K_t(N, N), which must equal sum_l dim(H_l) f(t^2 l(l+n-1))."""
        return self.omega_n * float(self(1.0))


def sphere_kernel_series(f: SymbolFunction, t: float, cos_theta, n: int = 2,
                         L_max: Optional[int] = None):
    """h_t(cos theta) = K_t(N, y) for y at angle theta from the pole."""
    k = ZonalKernel.build(f, t, n, L_max)
    k.check_truncation()
    return k(cos_theta)


def heat_kernel_series(t: float, cos_theta, L_max: Optional[int] = None):
    """g_t(cos theta), the kernel of e^{-t^2 Delta} on S^2."""
    return sphere_kernel_series(gauss(), t, cos_theta, 2, L_max)


def mexican_series(t: float, cos_theta, L_max: Optional[int] = None, m: int = 1):
    return sphere_kernel_series(mexican(m), t, cos_theta, 2, L_max)


def sphere_distance(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    for v in (x, y):
        if abs(float(np.linalg.norm(v)) - 1.0) > 1e-12:
            raise NotUnitVector(f"|{v}| != 1")
    return float(np.arccos(np.clip(np.dot(x, y), -1.0, 1.0)))


# ---------------------------------------------------------------------------
# Heat trace on S^2 and the Maclaurin-type approximations
# ---------------------------------------------------------------------------

Laurent = dict  # power -> Fraction


def _lderiv(p: Laurent) -> Laurent:
    return {k - 1: k * c for k, c in p.items() if k != 0 and c != 0}


def _lmul_s(p: Laurent, k: int = 1) -> Laurent:
    return {e + k: c for e, c in p.items()}


def _ladd(*ps: Laurent) -> Laurent:
    out: Laurent = {}
    for p in ps:
        for e, c in p.items():
            out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c != 0}


def _lneg(p: Laurent) -> Laurent:
    return {e: -c for e, c in p.items()}


def _as_poly(p: Laurent) -> tuple:
    """Laurent dict with nonnegative powers -> coefficient tuple in ascending powers."""
    if not p:
        return (Fraction(0),)
    if min(p) < 0:
        raise ValueError(f"negative powers survive: {p}")
    return tuple(p.get(k, Fraction(0)) for k in range(max(p) + 1))


@dataclass(frozen=True)
class HeatTraceSeries:
    """tr(e^{-s Delta}) on S^2 ~ sum_k coefficients[k] s^{k-1}."""

    coefficients: tuple = (Fraction(1), Fraction(1, 3), Fraction(1, 15), Fraction(4, 315), Fraction(1, 315))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 2

    def laurent(self) -> Laurent:
        return {k - 1: Fraction(c) for k, c in enumerate(self.coefficients) if c != 0}

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = sum(float(c) * s ** (k - 1) for k, c in enumerate(self.coefficients))
        return out if s.ndim else float(out)


HEAT_TRACE_S2 = HeatTraceSeries()


def heat_trace(s, series: HeatTraceSeries = HEAT_TRACE_S2):
    if np.any(np.asarray(s) <= 0):
        raise ValueError("s must be positive")
    return series(s)


def heat_trace_exact(s: float, L: int = 2000) -> float:
    """sum_l (2l+1) e^{-s l(l+1)} on S^2, summed from the smallest term up."""
    l = np.arange(L + 1, dtype=float)
    terms = (2 * l + 1) * np.exp(-s * l * (l + 1))
    return math.fsum(terms[::-1])


def _polyval(coeffs, s):
    out = 0.0
    for c in reversed(coeffs):
        out = out * s + float(c)
    return out


def _laurentval(pairs, s):
    return sum(float(c) * s**e for e, c in pairs)


@dataclass(frozen=True)
class MaclaurinApprox:
    """Coefficient tables (ascending powers of s = t^2).

    g-bracket: 4 pi g_t ~ e^{-th^2/4s}/s [A(s) + th^2/4 B(s)].
    h-bracket: 4 pi h_t ~ e^{-th^2/4s}/s [(1 - th^2/4s) p - s q],
    with p = A + th^2/4 B and q = A' + th^2/4 B'.
    The alternative h-bracket (``C``, ``D``) is obtained from the
    theta-expansion of -s d/ds before the heat trace is inserted:
    4 pi h_t ~ e^{-th^2/4s}/s [C(s) + th^2/4 D(s)].
    """

    A: tuple
    B: tuple
    q0: tuple
    q2: tuple
    C: tuple  # (power, coefficient) pairs, powers may be negative
    D: tuple

    @classmethod
    def from_heat_trace(cls, series: HeatTraceSeries = HEAT_TRACE_S2) -> "MaclaurinApprox":
        tr = series.laurent()
        dtr = _lderiv(tr)
        d2tr = _lderiv(dtr)
        A = _lmul_s(tr)                                   # s tr
        B = _ladd(_lmul_s(dtr), tr)                       # s tr' + tr
        C = _lneg(_lmul_s(dtr, 2))                        # -s^2 tr'
        D = _lneg(_ladd(_lmul_s(d2tr, 2), _lmul_s(dtr)))  # -(s^2 tr'' + s tr')
        return cls(
            A=_as_poly(A), B=_as_poly(B),
            q0=_as_poly(_lderiv(A)), q2=_as_poly(_lderiv(B)),
            C=tuple(sorted(C.items())), D=tuple(sorted(D.items())),
        )

    def p(self, t, theta):
        s = t * t
        return _polyval(self.A, s) + theta * theta / 4.0 * _polyval(self.B, s)

    def q(self, t, theta):
        s = t * t
        return _polyval(self.q0, s) + theta * theta / 4.0 * _polyval(self.q2, s)


MACLAURIN_S2 = MaclaurinApprox.from_heat_trace()


def gt_approx(t: float, theta, tables: MaclaurinApprox = MACLAURIN_S2):
    """Small-t closed form for 4 pi g_t(cos theta) on S^2."""
    theta = np.asarray(theta, dtype=float)
    s = t * t
    out = np.exp(-theta * theta / (4 * s)) / s * tables.p(t, theta)
    return out if theta.ndim else float(out)


def ht_approx(t: float, theta, form: str = "differentiated", tables: MaclaurinApprox = MACLAURIN_S2):
    """Small-t closed form for 4 pi h_t(cos theta) on S^2 (Mexican hat, f(s) = s e^{-s}).

    ``form="differentiated"`` applies -s d/ds to the g_t closed form;
    ``form="direct"`` uses the bracket obtained before that differentiation.
    The two differ at order theta^4.
    """
    theta = np.asarray(theta, dtype=float)
    s = t * t
    gauss_part = np.exp(-theta * theta / (4 * s)) / s
    if form == "differentiated":
        out = gauss_part * ((1 - theta * theta / (4 * s)) * tables.p(t, theta) - s * tables.q(t, theta))
    elif form == "direct":
        out = gauss_part * (_laurentval(tables.C, s) + theta * theta / 4.0 * _laurentval(tables.D, s))
    else:
        raise ValueError(f"unknown form {form!r}")
    return out if theta.ndim else float(out)
