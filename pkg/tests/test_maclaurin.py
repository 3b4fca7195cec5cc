import math
from fractions import Fraction

import pytest
import sympy as sp

from mwave.errors import SingularTriangle
from mwave.maclaurin import (
    MAX_DEPTH,
    apply_D,
    derivatives_at_pole,
    laplacian_powers,
    maclaurin_from_pole,
    pole_coefficients,
    pole_matrix,
)
from mwave.acceptance import fourth_derivative_fd

theta, x = sp.symbols("theta x")


def sympy_theta_derivative(u_expr, m):
    """d^{2m}/dtheta^{2m} u(cos theta) at 0, symbolically."""
    return sp.Rational(sp.diff(u_expr.subs(x, sp.cos(theta)), theta, 2 * m).subs(theta, 0))


def zonal_eigenfunction(n, l):
    """Gegenbauer P_l^{(n-1)/2}(x): a zonal eigenfunction on S^n with eigenvalue l(l+n-1)."""
    return sp.expand(sp.gegenbauer(l, sp.Rational(n - 1, 2), x)), l * (l + n - 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_first_order_identity(n):
    assert pole_coefficients(1, n) == (Fraction(-1, n),)
    assert pole_matrix(1, n) == ((n,),)
    # u(x) = x: d^2/dtheta^2 cos(theta) = -1 and Delta U = n U
    assert maclaurin_from_pole(1, [n], n) == -1


def test_operator_D_on_monomial():
    # D x^2 = n x (2x) - (1 - x^2) 2 = (2n + 2) x^2 - 2
    expr = {0: (Fraction(0), Fraction(0), Fraction(1))}
    out = apply_D(expr, 3)
    assert out[0] == (Fraction(-2), Fraction(0), Fraction(8))


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_against_sympy_eigenfunctions(n, m):
    for l in range(0, 7):
        u, lam = zonal_eigenfunction(n, l)
        u0 = sp.Rational(u.subs(x, 1))
        delta = [Fraction(int(lam**i * u0.p), int(u0.q)) for i in range(1, m + 1)]
        expected = sympy_theta_derivative(u, m)
        got = maclaurin_from_pole(m, delta, n)
        assert Fraction(int(expected.p), int(expected.q)) == got


def test_against_sympy_generic_polynomial():
    # a polynomial that is not an eigenfunction: compute Delta^i U(N) from the operator
    n, m = 3, 3
    u = 2 * x**5 - x**3 + 7 * x
    delta = []
    cur = u
    for _ in range(m):
        cur = sp.expand(n * x * sp.diff(cur, x) - (1 - x**2) * sp.diff(cur, x, 2))
        delta.append(Fraction(int(cur.subs(x, 1))))
    expected = sympy_theta_derivative(u, m)
    assert maclaurin_from_pole(m, delta, n) == Fraction(int(expected.p), int(expected.q))


def test_second_order_finite_difference():
    exact = maclaurin_from_pole(2, [6, 36], 2)
    assert exact == 12
    fd = fourth_derivative_fd(lambda th: 0.5 * (3 * math.cos(th) ** 2 - 1))
    assert float(exact) == pytest.approx(fd, rel=1e-6)


def test_triangle_structure():
    T = pole_matrix(5, 2)
    for k in range(5):
        assert T[k][k] != 0
        assert all(v == 0 for v in T[k][k + 1:])


def test_derivatives_round_trip():
    # u = x^4: u'(1) = 4, u''(1) = 12, u'''(1) = 24
    n = 2
    powers = laplacian_powers(3, n)
    derivs = [Fraction(4), Fraction(12), Fraction(24)]
    at_one = lambda poly: sum(poly)  # polynomial value at x = 1
    delta = [sum(at_one(expr.get(i, (Fraction(0),))) * derivs[i - 1] for i in range(1, 4))
             for expr in powers]
    assert derivatives_at_pole(delta, n) == derivs


def test_float_inputs():
    v = maclaurin_from_pole(2, [6.0, 36.0], 2)
    assert isinstance(v, float)
    assert v == pytest.approx(12.0)


def test_errors():
    with pytest.raises(SingularTriangle):
        pole_coefficients(2, 0)
    with pytest.raises(ValueError):
        pole_coefficients(MAX_DEPTH + 1, 2)
    with pytest.raises(ValueError):
        maclaurin_from_pole(3, [1, 2], 2)
