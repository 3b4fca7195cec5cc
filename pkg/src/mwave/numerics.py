"""Small numerical kernels shared by the series evaluators.

Compensated summation, adaptive Simpson on a fixed interval, and a
bracketed maximiser. Everything here works on plain floats or numpy
arrays and has no knowledge of wavelets.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import QuadratureFailure


def compensated_sum(terms, axis: int = 0, order: str = "descending"):
    """Neumaier-compensated sum of ``terms`` along ``axis``.

    With ``order="descending"`` the terms are first sorted by decreasing
    magnitude (independently for every position off ``axis``), which makes
    the result independent of how the caller enumerated the series.
    """
    x = np.asarray(terms, dtype=float)
    if x.size == 0:
        return np.zeros(np.delete(x.shape, axis)) if x.ndim > 1 else 0.0
    x = np.moveaxis(x, axis, 0)
    if order == "descending":
        idx = np.argsort(-np.abs(x), axis=0, kind="stable")
        x = np.take_along_axis(x, idx, axis=0)
    s = np.zeros(x.shape[1:])
    c = np.zeros(x.shape[1:])
    for term in x:
        tmp = s + term
        big = np.abs(s) >= np.abs(term)
        c += np.where(big, (s - tmp) + term, (term - tmp) + s)
        s = tmp
    out = s + c
    return float(out) if out.ndim == 0 else out


def adaptive_simpson(
    g: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float,
    max_depth: int = 40,
) -> float:
    """Integrate ``g`` over [a, b] by adaptive Simpson with Richardson correction.

    Raises QuadratureFailure if an interval needs more than ``max_depth`` bisections.
    """
    if b == a:
        return 0.0
    fa, fb = g(a), g(b)
    m = 0.5 * (a + b)
    fm = g(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    # explicit stack: (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, abs_tol, 0)]
    total = 0.0
    comp = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = g(lm), g(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol or (depth >= 6 and abs(delta) <= 1e-300):
            piece = left + right + delta / 15.0
            y = piece - comp
            t = total + y
            comp = (t - total) - y
            total = t
            continue
        if depth + 1 > max_depth:
            raise QuadratureFailure(
                f"adaptive Simpson exceeded depth {max_depth} near [{a:.6g}, {b:.6g}]"
            )
        stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth + 1))
        stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth + 1))
    return total


def coarse_simpson(g: Callable[[float], float], a: float, b: float, panels: int = 64) -> float:
    x = np.linspace(a, b, 2 * panels + 1)
    y = np.array([g(v) for v in x])
    h = (b - a) / (2 * panels)
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def refine_max(h: Callable[[float], float], lo: float, hi: float, xatol: float = 1e-12):
    """Maximise a unimodal ``h`` on [lo, hi]; returns (argmax, max)."""
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(lambda v: -h(v), bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol})
    x = float(res.x)
    best = max((h(lo), lo), (h(hi), hi), (h(x), x))
    return best[1], best[0]


def log_grid(lo: float, hi: float, num: int) -> np.ndarray:
    return np.exp(np.linspace(math.log(lo), math.log(hi), num))
