"""Even theta-derivatives of a zonal function at the pole from powers of the Laplacian.

For U(x) = u(x_1) on S^n, Delta U = (D u)(x_1) with

    D = n x d/dx - (1 - x^2) d^2/dx^2.

Iterating D gives Delta^k U = sum_i P_{k,i}(x) u^{(i)}(x); at x = 1 this is
a triangular map from (u'(1), ..., u^(m)(1)) to ((Delta U)(N), ...,
(Delta^m U)(N)). The n = 1 case of the same map produces
(-1)^k d^{2k}/dtheta^{2k} [u(cos theta)] at 0. Inverting the first and
composing with the second expresses theta-derivatives through Laplacian
powers. All arithmetic is exact (Fraction).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import SingularTriangle

MAX_DEPTH = 6

Poly = tuple  # ascending Fraction coefficients in x


def _padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _pmul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _pder(a: Poly) -> Poly:
    return tuple(i * a[i] for i in range(1, len(a))) or (Fraction(0),)


def _pscale(a: Poly, c) -> Poly:
    return tuple(c * x for x in a)


def _peval(a: Poly, x) -> Fraction:
    out = Fraction(0)
    for c in reversed(a):
        out = out * x + c
    return out


X = (Fraction(0), Fraction(1))
ONE_MINUS_X2 = (Fraction(1), Fraction(0), Fraction(-1))


def apply_D(expr: dict, n: int) -> dict:
    """Apply D to sum_i expr[i](x) u^{(i)}(x); returns the same representation."""
    out: dict = {}

    def acc(i, p):
        out[i] = _padd(out.get(i, (Fraction(0),)), p)

    nx = _pscale(X, n)
    for i, p in expr.items():
        dp, ddp = _pder(p), _pder(_pder(p))
        # n x (p' u^(i) + p u^(i+1))
        acc(i, _pmul(nx, dp))
        acc(i + 1, _pmul(nx, p))
        # -(1 - x^2)(p'' u^(i) + 2 p' u^(i+1) + p u^(i+2))
        acc(i, _pscale(_pmul(ONE_MINUS_X2, ddp), -1))
        acc(i + 1, _pscale(_pmul(ONE_MINUS_X2, dp), -2))
        acc(i + 2, _pscale(_pmul(ONE_MINUS_X2, p), -1))
    return out


@lru_cache(maxsize=None)
def laplacian_powers(m: int, n: int) -> tuple:
    """(Delta^k U) as {i: P_{k,i}} for k = 1..m."""
    expr = {0: (Fraction(1),)}
    out = []
    for _ in range(m):
        expr = apply_D(expr, n)
        out.append(dict(expr))
    return tuple(out)


@lru_cache(maxsize=None)
def pole_matrix(m: int, n: int) -> tuple:
    """T[k-1][i-1] = P_{k,i}(1): maps u^{(i)}(1) to (Delta^k U)(N). Lower triangular."""
    rows = []
    for expr in laplacian_powers(m, n):
        rows.append(tuple(_peval(expr.get(i, (Fraction(0),)), 1) for i in range(1, m + 1)))
    return tuple(rows)


def _solve_lower(T, b):
    x = []
    for k, row in enumerate(T):
        s = b[k] - sum(row[j] * x[j] for j in range(k))
        x.append(s / row[k])
    return x


@lru_cache(maxsize=None)
def pole_coefficients(m: int, n: int) -> tuple:
    """(a_1, ..., a_m) with d^{2m}/dtheta^{2m}[u(cos theta)]|_0 = sum a_i (Delta^i U)(N)."""
    if not 1 <= m <= MAX_DEPTH:
        raise ValueError(f"m must lie in 1..{MAX_DEPTH}")
    T = pole_matrix(m, n)
    for k in range(m):
        if abs(T[k][k]) < 1e-12:
            raise SingularTriangle(f"diagonal entry {k + 1} of the pole map vanishes (n={n})")
    # theta-derivative row in terms of u^{(i)}(1): (-1)^m times row m of the n = 1 map
    theta_row = [(-1) ** m * v for v in pole_matrix(m, 1)[m - 1]]
    # a = theta_row T^{-1}: solve T^T a = theta_row (T^T is upper triangular)
    a = [Fraction(0)] * m
    for i in reversed(range(m)):
        s = theta_row[i] - sum(T[k][i] * a[k] for k in range(i + 1, m))
        a[i] = s / T[i][i]
    return tuple(a)


def maclaurin_from_pole(m: int, delta_powers: Sequence, n: int):
    """d^{2m}/dtheta^{2m}[u(cos theta)] at theta = 0 from ((Delta U)(N), ..., (Delta^m U)(N)).

    Exact if ``delta_powers`` holds Fractions or ints; float otherwise.
    """
    if len(delta_powers) < m:
        raise ValueError(f"need {m} Laplacian powers, got {len(delta_powers)}")
    a = pole_coefficients(m, n)
    if all(isinstance(v, (int, Fraction)) for v in delta_powers[:m]):
        return sum(ai * Fraction(v) for ai, v in zip(a, delta_powers))
    return sum(float(ai) * float(v) for ai, v in zip(a, delta_powers))


def derivatives_at_pole(delta_powers: Sequence, n: int):
    """Recover (u'(1), ..., u^(m)(1)) from the Laplacian powers at the pole."""
    m = len(delta_powers)
    return _solve_lower(pole_matrix(m, n), [Fraction(v) for v in delta_powers])
