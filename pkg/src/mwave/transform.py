"""Continuous wavelet transform on spectral fields.

Fields are stored by their coefficients in an orthonormal eigenbasis:
e^{2 pi i m.r} on T^1/T^2, and the zonal harmonics
Y_l(theta) = sqrt((2l+1)/4pi) P_l(cos theta) on S^2 (index (l, 0)). The
wavelet operator T_t = f(t^2 Delta) is then diagonal, so transform,
Calderon identity and reconstruction are exact up to scale quadrature.
Kernels are only evaluated for localization checks.
"""
from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import AliasWarning, DegenerateFit, GridTooNarrow, NonAdmissible
from .numerics import compensated_sum
from .spectral_core import ScaleGrid, SymbolFunction, band_integral, calderon_constant
from .sphere import GegenbauerEvaluator, ZonalKernel
from .torus import mexican_hat_T2_grid, torus_kernel_grid


class Manifold(enum.Enum):
    TORUS1 = "torus1"
    TORUS2 = "torus2"
    SPHERE2 = "sphere2"

    @property
    def dim(self) -> int:
        return 1 if self is Manifold.TORUS1 else 2

    @property
    def volume(self) -> float:
        return 4.0 * math.pi if self is Manifold.SPHERE2 else 1.0

    @property
    def index_names(self) -> tuple:
        return {"torus1": ("m",), "torus2": ("m1", "m2"), "sphere2": ("l", "k")}[self.value]


def eigenvalues(manifold: Manifold, modes: np.ndarray) -> np.ndarray:
    modes = np.asarray(modes)
    if manifold is Manifold.SPHERE2:
        l = modes[:, 0].astype(float)
        return l * (l + 1)
    return 4.0 * math.pi**2 * np.sum(modes.astype(float) ** 2, axis=1)


@dataclass(frozen=True)
class SpectralField:
    manifold: Manifold
    modes: np.ndarray   # (K, d) integer mode indices
    values: np.ndarray  # (K,) real coefficients

    def __post_init__(self):
        manifold = Manifold(self.manifold)
        modes = np.array(self.modes, dtype=np.int64).reshape(len(self.values), -1)
        values = np.array(self.values, dtype=float)
        width = 2 if manifold is Manifold.SPHERE2 else manifold.dim
        if modes.shape[1] != width:
            raise ValueError(f"{manifold.value} modes need {width} indices")
        if manifold is Manifold.SPHERE2:
            if np.any(modes[:, 1] != 0) or np.any(modes[:, 0] < 0):
                raise ValueError("sphere fields are zonal: indices (l, 0) with l >= 0")
        if len({tuple(m) for m in modes}) != len(modes):
            raise ValueError("duplicate mode index")
        modes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "manifold", manifold)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_coeffs(cls, manifold, coeffs: Mapping) -> "SpectralField":
        keys = [tuple(np.atleast_1d(k)) for k in coeffs]
        return cls(Manifold(manifold), np.array(keys, dtype=np.int64), np.array(list(coeffs.values()), dtype=float))

    @property
    def coeffs(self) -> dict:
        return {tuple(int(v) for v in m): float(c) for m, c in zip(self.modes, self.values)}

    @property
    def bandlimit(self) -> int:
        if len(self.values) == 0:
            return 0
        if self.manifold is Manifold.SPHERE2:
            return int(self.modes[:, 0].max())
        return int(np.abs(self.modes).max())

    @property
    def eigenvalues(self) -> np.ndarray:
        return eigenvalues(self.manifold, self.modes)

    def with_values(self, values) -> "SpectralField":
        return SpectralField(self.manifold, self.modes, values)

    def norm2(self) -> float:
        """Squared L^2 norm (Parseval)."""
        return compensated_sum(self.values**2)

    def mean_free_norm2(self) -> float:
        """||(I - P) F||^2: the zero mode is the projection onto constants."""
        return compensated_sum(np.where(self.eigenvalues == 0, 0.0, self.values) ** 2)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return _combine(self, other, 1.0, 1.0)

    def scaled(self, a: float) -> "SpectralField":
        return self.with_values(a * self.values)


def _combine(F: SpectralField, G: SpectralField, a: float, b: float) -> SpectralField:
    if F.manifold is not G.manifold:
        raise ValueError("fields live on different manifolds")
    acc: dict = {}
    for key, v in F.coeffs.items():
        acc[key] = acc.get(key, 0.0) + a * v
    for key, v in G.coeffs.items():
        acc[key] = acc.get(key, 0.0) + b * v
    return SpectralField.from_coeffs(F.manifold, acc)


def linear_combination(a: float, F: SpectralField, b: float, G: SpectralField) -> SpectralField:
    return _combine(F, G, a, b)


def random_field(manifold, n_modes: int, rng: np.random.Generator, lam_range=None,
                 max_index: int = 10) -> SpectralField:
    """Random field with distinct modes; optionally only eigenvalues inside ``lam_range``."""
    manifold = Manifold(manifold)
    width = manifold.dim if manifold is not Manifold.SPHERE2 else 1
    lo, hi = lam_range if lam_range is not None else (-np.inf, np.inf)
    chosen: dict = {}
    while len(chosen) < n_modes:
        idx = tuple(int(v) for v in rng.integers(-max_index, max_index + 1, size=width))
        if manifold is Manifold.SPHERE2:
            idx = (abs(idx[0]), 0)
        lam = float(eigenvalues(manifold, np.array([idx]))[0])
        if lo <= lam <= hi and idx not in chosen:
            chosen[idx] = float(rng.normal())
    return SpectralField.from_coeffs(manifold, chosen)


def _require_wavelet(f: SymbolFunction):
    if not f.admissible:
        raise NonAdmissible(f"{f.name} has f(0) != 0; it is not a wavelet symbol")


def apply_wavelet(F: SpectralField, f: SymbolFunction, t: float) -> SpectralField:
    """T_t F with T_t = f(t^2 Delta)."""
    if t <= 0:
        raise ValueError("t must be positive")
    _require_wavelet(f)
    lam = F.eigenvalues
    mult = np.where(lam == 0, 0.0, f.evaluate(t * t * lam))
    return F.with_values(mult * F.values)


def _tail_check(f: SymbolFunction, grid: ScaleGrid, lam: np.ndarray, c: float, tail_tol: float):
    """Relative Calderon mass of each eigenvalue that falls outside [t_min, t_max]."""
    worst = 0.0
    for v in np.unique(lam[lam > 0]):
        inside = band_integral(f, grid.t_min**2, grid.t_max**2, float(v), 1e-8)
        worst = max(worst, (c - inside) / c)
    if worst > tail_tol:
        raise GridTooNarrow(f"scale grid [{grid.t_min:.3g}, {grid.t_max:.3g}] misses "
                            f"{worst:.2e} of the Calderon mass (allowed {tail_tol:.1e})")
    return worst


@dataclass(frozen=True)
class CalderonCheck:
    lhs: float
    rhs: float
    rel_err: float

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.rel_err))


def calderon_identity_check(F: SpectralField, f: SymbolFunction, grid: ScaleGrid,
                            tail_tol: float = 1e-6, c: Optional[float] = None) -> CalderonCheck:
    """Compare int ||T_t F||^2 dt/t (quadrature on ``grid``) with (c/2) ||(I-P)F||^2.

    The factor 1/2 comes from parametrising scale as t^2 in f(t^2 Delta).
    """
    _require_wavelet(f)
    c = calderon_constant(f) if c is None else c
    lam = F.eigenvalues
    _tail_check(f, grid, lam, c, tail_tol)
    live = lam > 0
    args = np.outer(grid.nodes**2, lam[live])
    sq = f.evaluate(args) ** 2
    per_node = sq @ (F.values[live] ** 2)  # ||T_t F||^2 at every node
    lhs = grid.integrate(per_node)
    rhs = 0.5 * c * F.mean_free_norm2()
    rel = abs(lhs - rhs) / rhs if rhs > 0 else abs(lhs - rhs)
    return CalderonCheck(float(lhs), float(rhs), float(rel))


def reconstruction_multiplier(f: SymbolFunction, grid: ScaleGrid, lam, c: Optional[float] = None):
    """(2/c) int_grid |f(t^2 lam)|^2 dt/t, i.e. g_{t_min^2, t_max^2}(lam) / c."""
    c = calderon_constant(f) if c is None else c
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.zeros(lam.shape)
    live = lam > 0
    if np.any(live):
        out[live] = 2.0 / c * grid.multiplier(f, lam[live])
    return out


def reconstruct(F: SpectralField, f: SymbolFunction, grid: ScaleGrid,
                tail_tol: float = 1e-2, c: Optional[float] = None) -> SpectralField:
    """(2/c) int T_t^* T_t F dt/t over the grid; the constant part of F is lost.

    ``tail_tol`` bounds how much of the Calderon mass may fall outside the
    grid before GridTooNarrow is raised; a deliberately narrow grid (used to
    test error predictions) is fine as long as it is below this.
    """
    _require_wavelet(f)
    c = calderon_constant(f) if c is None else c
    lam = F.eigenvalues
    _tail_check(f, grid, lam, c, tail_tol)
    return F.with_values(reconstruction_multiplier(f, grid, lam, c) * F.values)


def relative_l2_error(G: SpectralField, F: SpectralField) -> float:
    """||G - (I-P)F|| / ||(I-P)F||."""
    target = np.where(F.eigenvalues == 0, 0.0, F.values)
    diff = _combine(G, F.with_values(target), 1.0, -1.0)
    return math.sqrt(diff.norm2() / F.mean_free_norm2())


# ---------------------------------------------------------------------------
# synthesis on grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridField:
    manifold: Manifold
    points: tuple       # axes: (r,) / (r1, r2) on tori, (cos_theta, phi) on S^2
    values: np.ndarray
    weights: np.ndarray

    def integral_sq(self) -> float:
        return float(np.sum(self.weights * np.abs(self.values) ** 2))

    def sup(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0


def _torus_synthesis(F: SpectralField, R: int) -> np.ndarray:
    d = F.manifold.dim
    grid = np.zeros((R,) * d, dtype=complex)
    idx = tuple((F.modes[:, k] % R) for k in range(d))
    np.add.at(grid, idx, F.values)
    return np.fft.ifftn(grid) * R**d  # sample j at r = j / R


def _sphere_zonal(F: SpectralField, x: np.ndarray) -> np.ndarray:
    if len(F.values) == 0:
        return np.zeros_like(x)
    L = F.bandlimit
    coef = np.zeros(L + 1)
    for (l, _), v in zip(F.modes, F.values):
        coef[l] += v * math.sqrt((2 * l + 1) / (4 * math.pi))
    acc = np.zeros_like(x)
    for a, P in zip(coef, GegenbauerEvaluator(2).iterate(x, L)):
        acc = acc + a * P
    return acc


def synthesize(F: SpectralField, resolution: int) -> GridField:
    """Sample F on a uniform torus grid or a Gauss-Legendre x uniform sphere grid."""
    R = int(resolution)
    if F.manifold is Manifold.SPHERE2:
        x, w = leggauss(R)
        n_phi = 2 * R
        phi = 2 * math.pi * np.arange(n_phi) / n_phi
        vals = np.repeat(_sphere_zonal(F, x)[:, None], n_phi, axis=1)
        weights = np.outer(w, np.full(n_phi, 2 * math.pi / n_phi))
        return GridField(F.manifold, (x, phi), vals, weights)
    d = F.manifold.dim
    vals = _torus_synthesis(F, R)
    axis = np.arange(R) / R
    return GridField(F.manifold, (axis,) * d, vals, np.full((R,) * d, 1.0 / R**d))


def sup_norm(F: SpectralField, t: float, f: SymbolFunction, grid_resolution: Optional[int] = None) -> float:
    """max |T_t F| over the synthesis grid (poles added on S^2)."""
    TF = apply_wavelet(F, f, t)
    B = max(F.bandlimit, 1)
    R = 8 * B if grid_resolution is None else int(grid_resolution)
    if R < 4 * B:
        warnings.warn(f"grid resolution {R} below 4x bandlimit ({4 * B})", AliasWarning, stacklevel=2)
    if F.manifold is Manifold.SPHERE2:
        g = synthesize(TF, R)
        poles = _sphere_zonal(TF, np.array([1.0, -1.0]))
        return max(g.sup(), float(np.abs(poles).max()))
    return synthesize(TF, R).sup()


# ---------------------------------------------------------------------------
# Holder exponent
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HolderFit:
    alpha: float
    C: float
    r2: float

    def __iter__(self):
        return iter((self.alpha, self.C, self.r2))


def holder_fit(sup_curve: Iterable[Sequence[float]], t_window=(1e-3, 1e-1)) -> HolderFit:
    """Least-squares fit of log ||T_t F|| = log C + alpha log t inside ``t_window``."""
    pts = np.asarray(list(sup_curve), dtype=float)
    lo, hi = t_window
    sel = pts[(pts[:, 0] >= lo * (1 - 1e-12)) & (pts[:, 0] <= hi * (1 + 1e-12))]
    if len(sel) < 8:
        raise ValueError(f"need >= 8 scales inside {t_window}, got {len(sel)}")
    if np.all(np.abs(sel[:, 1]) < 1e-14):
        raise DegenerateFit("all sup norms below 1e-14")
    if np.any(sel[:, 1] <= 0):
        raise ValueError("sup norms must be positive")
    x, y = np.log(sel[:, 0]), np.log(sel[:, 1])
    A = np.vstack([x, np.ones_like(x)]).T
    (alpha, logC), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ np.array([alpha, logC])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return HolderFit(float(alpha), float(math.exp(logC)), r2)


def sup_curve(F: SpectralField, f: SymbolFunction, ts: Sequence[float],
              grid_resolution: Optional[int] = None) -> list:
    return [(float(t), sup_norm(F, t, f, grid_resolution)) for t in ts]


def sqrt_sine_coefficients(bandlimit: int) -> np.ndarray:
    """Fourier coefficients c_0..c_B of |sin(pi r)|^{1/2} on T^1, by adaptive quadrature."""
    from scipy.integrate import quad

    out = np.empty(bandlimit + 1)
    for m in range(bandlimit + 1):
        v, _ = quad(lambda r: math.sqrt(math.sin(math.pi * r)), 0.0, 0.5,
                    weight="cos", wvar=2 * math.pi * m, limit=400, epsabs=1e-14)
        out[m] = 2.0 * v
    return out


def holder_test_field(bandlimit: int = 256) -> SpectralField:
    """Band-limited Fourier approximation of F(r) = |sin(pi r)|^{1/2}, Holder-1/2 at r = 0."""
    c = sqrt_sine_coefficients(bandlimit)
    coeffs = {(0,): float(c[0])}
    for m in range(1, bandlimit + 1):
        coeffs[(m,)] = float(c[m])
        coeffs[(-m,)] = float(c[m])
    return SpectralField.from_coeffs(Manifold.TORUS1, coeffs)


# ---------------------------------------------------------------------------
# localization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalizationReport:
    manifold: Manifold
    N: int
    rows: tuple  # (t, t^n sup (1 + d/t)^N |K_t|)

    @property
    def ratio(self) -> float:
        v = np.array([r[1] for r in self.rows])
        return float(v.max() / v.min())


def _localization_value(f: SymbolFunction, manifold: Manifold, t: float, N: int, resolution: int) -> float:
    if manifold is Manifold.SPHERE2:
        theta = np.linspace(0.0, math.pi, resolution)
        K = ZonalKernel.build(f, t, 2)(np.cos(theta))
        return float(t**2 * np.max((1 + theta / t) ** N * np.abs(K)))
    n = manifold.dim
    if manifold is Manifold.TORUS2 and f.name == "paper-torus":
        axis = (np.arange(resolution) - resolution // 2) / resolution
        K = mexican_hat_T2_grid(t, axis)
    else:
        B = int(math.ceil(8.0 / t))
        axis, K = torus_kernel_grid(f, t, max(resolution, 2 * B + 2), n)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    d = np.sqrt(sum(g * g for g in grids))
    return float(t**n * np.max((1 + d / t) ** N * np.abs(K)))


def localization_report(f: SymbolFunction, manifold, t_list: Sequence[float], N: int = 3,
                        resolution: int = 256, workers: Optional[int] = None) -> LocalizationReport:
    """Grid sup of t^n (1 + d(x0, y)/t)^N |K_t(x0, y)| for each t.

    On T^2 the paper-torus symbol is evaluated through the factored
    U_t/V_t form; other symbols go through the lattice sum.
    """
    if N > 6 or N < 0:
        raise ValueError("N must lie in 0..6")
    manifold = Manifold(manifold)
    ts = [float(t) for t in t_list]
    with ThreadPoolExecutor(max_workers=workers or 1) as ex:
        vals = list(ex.map(lambda t: _localization_value(f, manifold, t, N, resolution), ts))
    return LocalizationReport(manifold, N, tuple(zip(ts, vals)))
