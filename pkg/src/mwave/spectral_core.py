"""Symbol calculus for spectral wavelets.

A symbol is an admissible function f(s) = s^l f0(s) on [0, inf). Every
operator in the package is a multiplier s -> f(t^2 s) applied to Laplace
eigenvalues, so the quantities here (Calderon constant, band integrals,
dyadic sums, truncation constants) are all scalar functions of an
eigenvalue.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegenerateSymbol, NonAdmissible
from .numerics import adaptive_simpson, coarse_simpson, compensated_sum, log_grid, refine_max

S_MIN = 1e-8
S_MAX = 1e4
SUP_GRID_POINTS = 10_000
DEFAULT_REL_TOL = 1e-10


def _sampled_sup(h: Callable, lo: float, hi: float, include_zero: bool = False) -> float:
    """sup |h| over a log grid on [lo, hi], refined around the best sample."""
    grid = log_grid(lo, hi, SUP_GRID_POINTS)
    vals = np.abs(h(grid))
    k = int(np.argmax(vals))
    best = float(vals[k])
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    _, refined = refine_max(lambda v: abs(float(h(v))), float(a), float(b))
    best = max(best, refined)
    if include_zero:
        best = max(best, abs(float(h(0.0))))
    return best


@dataclass(frozen=True)
class SymbolFunction:
    """A multiplier f(s) = s^l f0(s) with its decay metadata.

    ``evaluate`` must accept floats and numpy arrays. If ``f0`` is omitted it
    is recovered as f(s)/s^l, which cannot be sampled at s = 0.
    """

    evaluate: Callable
    vanishing_order: int
    name: str
    f0: Optional[Callable] = None
    f0_sup: float = field(default=float("nan"))

    def __post_init__(self):
        if math.isnan(self.f0_sup):
            object.__setattr__(self, "f0_sup", self._estimate_f0_sup())

    def __call__(self, s):
        return self.evaluate(s)

    def _f0(self, s):
        if self.f0 is not None:
            return self.f0(s)
        s = np.asarray(s, dtype=float)
        return self.evaluate(s) / s ** self.vanishing_order

    def _estimate_f0_sup(self) -> float:
        return _sampled_sup(self._f0, S_MIN, S_MAX, include_zero=self.f0 is not None)

    @property
    def admissible(self) -> bool:
        return self.vanishing_order >= 1

    def decay_moment(self, J: int) -> float:
        """M_J = max_{r>0} |r^J f(r)|, sampled then refined."""
        return _sampled_sup(lambda r: np.asarray(r, dtype=float) ** J * self.evaluate(r),
                            S_MIN, S_MAX)

    def squared(self, s):
        v = self.evaluate(s)
        return v * v


def mexican(m: int = 1) -> SymbolFunction:
    """f_m(s) = s^m e^{-s}."""
    if m < 1:
        raise ValueError("mexican symbol needs m >= 1")
    return SymbolFunction(
        evaluate=lambda s, m=m: np.asarray(s, dtype=float) ** m * np.exp(-np.asarray(s, dtype=float)),
        vanishing_order=m,
        name=f"mexican:{m}",
        f0=lambda s: np.exp(-np.asarray(s, dtype=float)),
    )


def paper_torus() -> SymbolFunction:
    """f(u) = u e^{-u/4pi} / 4pi^2, the normalisation used for the Mexican hat on T^2."""
    k = 4.0 * math.pi
    return SymbolFunction(
        evaluate=lambda u: np.asarray(u, dtype=float) * np.exp(-np.asarray(u, dtype=float) / k)
        / (4.0 * math.pi**2),
        vanishing_order=1,
        name="paper-torus",
        f0=lambda u: np.exp(-np.asarray(u, dtype=float) / k) / (4.0 * math.pi**2),
    )


def gauss() -> SymbolFunction:
    """Heat multiplier e^{-s}; not admissible (f(0) = 1)."""
    return SymbolFunction(
        evaluate=lambda s: np.exp(-np.asarray(s, dtype=float)),
        vanishing_order=0,
        name="gauss",
        f0=lambda s: np.exp(-np.asarray(s, dtype=float)),
    )


def parse_symbol(spec: str) -> SymbolFunction:
    spec = spec.strip()
    if spec.startswith("mexican"):
        _, _, m = spec.partition(":")
        return mexican(int(m) if m else 1)
    if spec == "paper-torus":
        return paper_torus()
    if spec == "gauss":
        return gauss()
    raise ValueError(f"unknown symbol spec {spec!r}")


def _require_admissible(f: SymbolFunction):
    if not f.admissible:
        raise NonAdmissible(f"{f.name}: f(0) != 0, the Calderon integral diverges")
    probe = np.abs(f.evaluate(log_grid(S_MIN, S_MAX, 200)))
    if not np.any(probe > 0):
        raise NonAdmissible(f"{f.name} vanishes on the probe grid")


def _log_integral(f: SymbolFunction, lo: float, hi: float, rel_tol: float) -> float:
    """int_lo^hi |f(s)|^2 ds/s on u = log s; the range is clipped to s <= S_MAX."""
    hi = min(hi, S_MAX)
    if hi <= lo:
        return 0.0
    ulo, uhi = math.log(lo), math.log(hi)

    def g(u):
        v = float(f.evaluate(math.exp(u)))
        return v * v

    est = coarse_simpson(g, ulo, uhi)
    tol = rel_tol * max(abs(est), 1e-300)
    return adaptive_simpson(g, ulo, uhi, tol)


@lru_cache(maxsize=256)
def calderon_constant(f: SymbolFunction, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """c = int_0^inf |f(t)|^2 dt/t."""
    if not 0 < rel_tol <= 1e-3:
        raise ValueError("rel_tol must lie in (0, 1e-3]")
    _require_admissible(f)
    l = f.vanishing_order
    # lower cut where the omitted piece, bounded by a^{2l}|f0|^2/(2l), is negligible
    rough = _log_integral(f, S_MIN, S_MAX, 1e-4)
    a = (1e-3 * rel_tol * rough * 2 * l / max(f.f0_sup**2, 1e-300)) ** (1.0 / (2 * l))
    a = min(a, S_MIN)
    return _log_integral(f, a, S_MAX, rel_tol)


@lru_cache(maxsize=65536)
def band_integral(f: SymbolFunction, eps: float, N: float, lam: float,
                  rel_tol: float = DEFAULT_REL_TOL) -> float:
    """g_{eps,N}(lam) = int_eps^N |f(t lam)|^2 dt/t."""
    if not 0 < eps < N:
        raise ValueError("need 0 < eps < N")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if lam == 0:
        return 0.0
    return _log_integral(f, eps * lam, N * lam, rel_tol)


def _sq_terms(f: SymbolFunction, args: np.ndarray) -> np.ndarray:
    vals = np.zeros_like(args)
    live = args <= S_MAX
    v = f.evaluate(args[live])
    vals[live] = v * v
    return vals


def discrete_sum(f: SymbolFunction, a: float, M: int, N: int, lam: float) -> float:
    """h_{M,N}(lam) = sum_{j=-M}^{N} |f(a^{2j} lam)|^2."""
    if a <= 1:
        raise ValueError("need a > 1")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if lam == 0:
        return 0.0
    j = np.arange(-M, N + 1, dtype=float)
    return compensated_sum(_sq_terms(f, a ** (2 * j) * lam))


def bilateral_sum(f: SymbolFunction, a: float, lam: float) -> float:
    """h(lam): the j-range covers every term above double-precision relevance."""
    if lam == 0:
        return 0.0
    two_log_a = 2.0 * math.log(a)
    j_lo = math.floor(math.log(1e-12 / lam) / two_log_a) - 1
    j_hi = math.ceil(math.log(S_MAX / lam) / two_log_a) + 1
    return discrete_sum(f, a, -min(j_lo, 0), max(j_hi, 0), lam)


def daubechies_bounds(f: SymbolFunction, a: float, lambda_grid: Sequence[float]):
    """(A_a, B_a): min and max of the bilateral sum h over ``lambda_grid``."""
    if a <= 1:
        raise ValueError("need a > 1 (replace a by 1/a otherwise)")
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.min() <= 0 or grid.max() / grid.min() < a * a * (1 - 1e-12):
        raise ValueError("lambda_grid must cover a full period [lam0, a^2 lam0]")
    h = np.array([bilateral_sum(f, a, lam) for lam in grid])
    A, B = float(h.min()), float(h.max())
    if A < 1e-14:
        raise DegenerateSymbol(f"A_a = {A:.3g}: zeros of f align with the a^2 grid")
    return A, B


@dataclass(frozen=True)
class TruncationConstants:
    c_L: float
    C_eta: float
    c_L_prime: float
    C_eta_prime: float
    eta: float
    L: float
    J: int
    l: int
    a: float

    def band_bound(self, eps: float, N: float) -> float:
        """Bound on sup_[eta,L] |g_{eps,N} - c|."""
        return self.c_L * eps ** (2 * self.l) + self.C_eta / N ** (2 * self.J)

    def sum_bound(self, M: int, N: int) -> float:
        """Bound on sup_[eta,L] |h_{M,N} - h|."""
        return (self.c_L_prime / self.a ** (4 * M * self.l)
                + self.C_eta_prime / self.a ** (4 * N * self.J))

    def as_row(self, name: str) -> list:
        return [name, self.eta, self.L, self.J, self.c_L, self.C_eta, self.c_L_prime, self.C_eta_prime]


CONSTANTS_HEADER = ["name", "eta", "L", "J", "c_L", "C_eta", "c_L_prime", "C_eta_prime"]


def truncation_constants(f: SymbolFunction, eta: float, L: float, J: int = 2,
                         a: float = 2.0) -> TruncationConstants:
    if not 0 < eta < L:
        raise ValueError("need 0 < eta < L")
    if J < 1 or a <= 1:
        raise ValueError("need J >= 1 and a > 1")
    l = f.vanishing_order
    f0sq = f.f0_sup**2
    MJ = f.decay_moment(J)
    return TruncationConstants(
        c_L=L ** (2 * l) * f0sq / (2 * l),
        C_eta=MJ**2 / (2 * J * eta ** (2 * J)),
        c_L_prime=L ** (2 * l) * f0sq / (a ** (4 * l) - 1),
        C_eta_prime=MJ**2 / ((a ** (4 * J) - 1) * eta ** (2 * J)),
        eta=eta, L=L, J=J, l=l, a=a,
    )


@dataclass(frozen=True)
class ScaleGrid:
    """Scale nodes t_k with weights w_k so that sum w_k g(t_k) ~ int g(t) dt/t."""

    nodes: np.ndarray
    weights: np.ndarray
    a: Optional[float] = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-D of equal length")
        if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
            raise ValueError("nodes must be positive and strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def t_min(self) -> float:
        return float(self.nodes[0])

    @property
    def t_max(self) -> float:
        return float(self.nodes[-1])

    @classmethod
    def log_trapezoid(cls, t_min: float, t_max: float, nodes_per_decade: int = 400) -> "ScaleGrid":
        decades = math.log10(t_max / t_min)
        n = max(int(math.ceil(decades * nodes_per_decade)) + 1, 3)
        u = np.linspace(math.log(t_min), math.log(t_max), n)
        h = u[1] - u[0]
        w = np.full(n, h)
        w[0] = w[-1] = 0.5 * h
        return cls(np.exp(u), w)

    @classmethod
    def geometric(cls, a: float, M: int, N: int, t0: float = 1.0) -> "ScaleGrid":
        """Nodes t0 a^j, j = -M..N, each weighted ln(a) (Riemann sum of dt/t)."""
        if a <= 1:
            raise ValueError("need a > 1")
        j = np.arange(-M, N + 1, dtype=float)
        return cls(t0 * a**j, np.full(j.size, math.log(a)), a=a)

    def integrate(self, values) -> float:
        """Quadrature of sampled values (last axis runs over nodes)."""
        values = np.asarray(values, dtype=float)
        return compensated_sum(np.moveaxis(values * self.weights, -1, 0))

    def multiplier(self, f: SymbolFunction, lam) -> np.ndarray:
        """int |f(t^2 lam)|^2 dt/t over the grid, for each eigenvalue in ``lam``."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        args = np.outer(lam, self.nodes**2)
        sq = _sq_terms(f, args.ravel()).reshape(args.shape)
        return np.atleast_1d(compensated_sum(sq * self.weights, axis=1))


def reconstruction_grid(f: SymbolFunction, eta: float, L: float, target: float,
                        J: int = 2, nodes_per_decade: int = 400):
    """Scale grid whose endpoints make the predicted relative reconstruction error ``target``.

    Scale t enters as f(t^2 lam), so the band integral over [t_min, t_max]
    equals half of g_{t_min^2, t_max^2}. The budget is split evenly between
    the small-scale and large-scale tails. Returns (grid, predicted_bound).
    """
    c = calderon_constant(f)
    k = truncation_constants(f, eta, L, J)
    l = f.vanishing_order
    half = 0.5 * target * c
    eps = (half / k.c_L) ** (1.0 / (2 * l))
    N = (k.C_eta / half) ** (1.0 / (2 * J))
    grid = ScaleGrid.log_trapezoid(math.sqrt(eps), math.sqrt(N), nodes_per_decade)
    return grid, predicted_reconstruction_error(f, grid, k, c)


def predicted_reconstruction_error(f: SymbolFunction, grid: ScaleGrid,
                                   constants: TruncationConstants, c: Optional[float] = None) -> float:
    c = calderon_constant(f) if c is None else c
    return constants.band_bound(grid.t_min**2, grid.t_max**2) / c
