"""Wavelet kernels on the flat torus T^n = R^n / Z^n.

Eigenfunctions are e^{2 pi i m.r} with eigenvalue 4 pi^2 |m|^2, so the
kernel of f(t^2 Delta) is a lattice sum. For the Mexican hat on T^2 the sum
factors into the one-dimensional theta-type series U_t and V_t, each of
which has a Fourier form (fast for large t) and a Poisson-summed form
(fast for small t).
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, TruncationWarning
from .numerics import compensated_sum
from .spectral_core import SymbolFunction

MODE_THRESHOLD = 1.0


def wrap(x):
    """Reduce coordinates mod 1 into (-1/2, 1/2]."""
    x = np.asarray(x, dtype=float)
    return x - np.ceil(x - 0.5)


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in wrap(np.atleast_1d(self.coords)))
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        return TorusPoint(tuple(a - b for a, b in zip(self.coords, other.coords)))


def torus_eigenvalue(m: Sequence[int]) -> float:
    return 4.0 * math.pi**2 * float(sum(int(k) * int(k) for k in m))


def torus_distance(p: TorusPoint, q: TorusPoint) -> float:
    if p.dim != q.dim:
        raise DimensionMismatch(f"{p.dim} != {q.dim}")
    d = np.abs(np.subtract(p.coords, q.coords))
    d = np.minimum(d, 1.0 - d)
    return float(np.sqrt(np.sum(d * d)))


def torus_distance_array(x: np.ndarray) -> np.ndarray:
    """Distance to the origin for points stacked along the last axis."""
    d = np.abs(wrap(x))
    return np.sqrt(np.sum(d * d, axis=-1))


class SeriesMode(enum.Enum):
    EIGEN = "eigen"
    POISSON = "poisson"

    @classmethod
    def for_scale(cls, t: float) -> "SeriesMode":
        return cls.EIGEN if t >= MODE_THRESHOLD else cls.POISSON


def _eigen_cutoff(t: float) -> int:
    return int(math.ceil(6.0 / t)) + 8


def _poisson_cutoff(t: float) -> int:
    return int(math.ceil(6.0 * t)) + 8


@dataclass(frozen=True)
class ThetaPair:
    """U_t and V_t at a fixed scale, evaluated in one of the two dual forms."""

    t: float
    mode: SeriesMode
    truncation_N: int

    @classmethod
    def at(cls, t: float, mode: Optional[SeriesMode] = None) -> "ThetaPair":
        if t <= 0:
            raise ValueError("t must be positive")
        mode = SeriesMode.for_scale(t) if mode is None else SeriesMode(mode)
        N = _eigen_cutoff(t) if mode is SeriesMode.EIGEN else _poisson_cutoff(t)
        return cls(t, mode, N)

    def _n(self):
        return np.arange(-self.truncation_N, self.truncation_N + 1, dtype=float)

    def U(self, x):
        x = np.asarray(x, dtype=float)
        n = self._n()
        t = self.t
        if self.mode is SeriesMode.EIGEN:
            w = np.exp(-math.pi * t * t * n * n)
            terms = w[:, None] * np.cos(2 * math.pi * np.outer(n, x.ravel()))
        else:
            y = (n[:, None] + wrap(x).ravel()[None, :]) / t
            terms = np.exp(-math.pi * y * y) / t
        out = compensated_sum(terms)
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def V(self, x):
        x = np.asarray(x, dtype=float)
        n = self._n()
        t = self.t
        if self.mode is SeriesMode.EIGEN:
            w = (n * t) ** 2 * np.exp(-math.pi * t * t * n * n)
            terms = w[:, None] * np.cos(2 * math.pi * np.outer(n, x.ravel()))
        else:
            y = (n[:, None] + wrap(x).ravel()[None, :]) / t
            terms = (1.0 / (2 * math.pi) - y * y) * np.exp(-math.pi * y * y) / t
        out = compensated_sum(terms)
        return out.reshape(x.shape) if x.ndim else float(out[0])


def U_t(t: float, x, mode: Optional[SeriesMode] = None):
    """sum_n e^{-pi t^2 n^2} e^{2 pi i n x}."""
    return ThetaPair.at(t, mode).U(x)


def V_t(t: float, x, mode: Optional[SeriesMode] = None):
    """sum_n (nt)^2 e^{-pi t^2 n^2} e^{2 pi i n x}."""
    return ThetaPair.at(t, mode).V(x)


def mexican_hat_T2(t: float, s1, s2=None, mode: Optional[SeriesMode] = None):
    """h_t(s1, s2) = U_t(s1) V_t(s2) + U_t(s2) V_t(s1).

    This is the kernel of f(t^2 Delta) on T^2 for f(u) = u e^{-u/4pi} / 4pi^2.
    ``s1`` may be a TorusPoint, or ``s1``/``s2`` broadcastable arrays.
    """
    if isinstance(s1, TorusPoint):
        if s1.dim != 2:
            raise DimensionMismatch("mexican_hat_T2 needs a point on T^2")
        s1, s2 = s1.coords
    s1, s2 = np.broadcast_arrays(np.asarray(s1, dtype=float), np.asarray(s2, dtype=float))
    tp = ThetaPair.at(t, mode)
    u1, v1 = tp.U(s1), tp.V(s1)
    u2, v2 = tp.U(s2), tp.V(s2)
    out = u1 * v2 + u2 * v1
    return float(out) if np.ndim(out) == 0 else out


def mexican_hat_T2_grid(t: float, axis, mode: Optional[SeriesMode] = None) -> np.ndarray:
    """h_t on the product grid axis x axis; U_t and V_t are evaluated once per axis point."""
    tp = ThetaPair.at(t, mode)
    axis = np.asarray(axis, dtype=float)
    u, v = tp.U(axis), tp.V(axis)
    return np.outer(u, v) + np.outer(v, u)


def default_bandlimit(t: float) -> int:
    return int(math.ceil(8.0 / t))


def _lattice_ball(n: int, B: int) -> np.ndarray:
    axes = [np.arange(-B, B + 1)] * n
    m = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    return m[np.sum(m * m, axis=1) <= B * B]


def torus_kernel(f: SymbolFunction, t: float, p, bandlimit: Optional[int] = None):
    """K_t(p) = sum_{|m| <= B} f(4 pi^2 t^2 |m|^2) e^{2 pi i m.p}.

    ``p`` is a TorusPoint or an array of points with coordinates on the last
    axis. Terms sharing |m|^2 are grouped into shells; shells are added in
    decreasing order of |f| with compensation.
    """
    if isinstance(p, TorusPoint):
        pts = np.asarray(p.coords, dtype=float)[None, :]
        scalar = True
    else:
        pts = np.atleast_2d(np.asarray(p, dtype=float))
        scalar = False
    n = pts.shape[-1]
    B = default_bandlimit(t) if bandlimit is None else int(bandlimit)
    if B < 1:
        raise ValueError("bandlimit must be >= 1")
    m = _lattice_ball(n, B)
    k2 = np.sum(m * m, axis=1)
    w = f.evaluate(4.0 * math.pi**2 * t * t * k2.astype(float))
    shell = k2 > (B - 1) ** 2
    mass = np.abs(w).sum()
    if mass > 0 and np.abs(w[shell]).sum() > 1e-12 * mass:
        warnings.warn(f"boundary shell |m| ~ {B} carries more than 1e-12 of the kernel mass",
                      TruncationWarning, stacklevel=2)
    flat = pts.reshape(-1, n)
    phase = np.cos(2 * math.pi * (flat @ m.T.astype(float)))  # (P, K)
    levels, inv = np.unique(k2, return_inverse=True)
    shell_sums = np.zeros((levels.size, flat.shape[0]))
    np.add.at(shell_sums, inv, phase.T)
    wl = np.zeros(levels.size)
    wl[inv] = w
    out = compensated_sum(wl[:, None] * shell_sums)
    if scalar:
        return float(out[0])
    return out.reshape(pts.shape[:-1])


def torus_kernel_grid(f: SymbolFunction, t: float, resolution: int, n: int = 2,
                      bandlimit: Optional[int] = None):
    """K_t sampled on the uniform grid (j/R - 1/2)^n via an inverse FFT.

    The lattice box |m_i| <= B is used, with R > 2B so the grid values equal
    the truncated series exactly (no aliasing). Returns (axis, values).
    """
    B = default_bandlimit(t) if bandlimit is None else int(bandlimit)
    R = int(resolution)
    if R <= 2 * B:
        raise ValueError(f"resolution {R} must exceed 2*bandlimit = {2 * B}")
    k = np.fft.fftfreq(R, d=1.0 / R)  # integer frequencies
    k = np.where(np.abs(k) <= B, k, np.nan)
    grids = np.meshgrid(*([k] * n), indexing="ij")
    k2 = sum(g * g for g in grids)
    coef = np.where(np.isnan(k2), 0.0, f.evaluate(np.nan_to_num(4 * math.pi**2 * t * t * k2)))
    vals = np.real(np.fft.ifftn(coef)) * R**n
    # grid point j corresponds to r = j/R; shift so the axis runs over [-1/2, 1/2)
    vals = np.fft.fftshift(vals)
    axis = (np.arange(R) - R // 2) / R
    return axis, vals
