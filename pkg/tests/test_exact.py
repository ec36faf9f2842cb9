from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from coxcess.exact import ONE, PHI, SQRT5, ZERO, Matrix, Scalar, charpoly, determinant, kernel_basis, rank

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(Scalar, small, small)


def test_golden_ratio():
    assert PHI * PHI == PHI + 1
    assert SQRT5 * SQRT5 == Scalar(5)
    assert str(PHI) == "1/2+1/2*sqrt5"


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - b) + b == a
    if b:
        assert (a / b) * b == a


@given(scalars)
def test_inverse_and_sign(a):
    if a:
        assert a * a.inverse() == ONE
    approx = float(a.a) + float(a.b) * 5**0.5
    assert a.sign() == (0 if a == ZERO else (1 if approx > 0 else -1))


def test_sign_near_cancellation():
    x = Scalar(Fraction(161), Fraction(-72))  # 161 - 72 sqrt5 ~ 0.0031
    assert x.sign() == 1
    assert (-x).sign() == -1


_S = sympy.Symbol("s")  # stands for sqrt5; reduce modulo s^2 - 5


def _to_sympy(m: Matrix, root=None):
    root = sympy.sqrt(5) if root is None else root
    return sympy.Matrix([[sympy.Rational(x.a.numerator, x.a.denominator)
                          + sympy.Rational(x.b.numerator, x.b.denominator) * root
                          for x in r] for r in m.entries])


def _same(ours: Scalar, expr) -> bool:
    red = sympy.rem(sympy.expand(expr), _S**2 - 5, _S)
    mine = sympy.Rational(ours.a.numerator, ours.a.denominator) + sympy.Rational(ours.b.numerator, ours.b.denominator) * _S
    return sympy.expand(red - mine) == 0


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.builds(Scalar, small, small), min_size=n, max_size=n), min_size=n, max_size=n)
).map(Matrix)

rational_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.builds(Scalar, st.integers(-2, 2)), min_size=n, max_size=n), min_size=1, max_size=5)
).map(Matrix)


@given(rational_matrices)
def test_rank_and_kernel_against_sympy(m):
    assert rank(m) == _to_sympy(m).rank()
    basis = kernel_basis(m)
    assert len(basis) == m.cols - rank(m)
    for v in basis:
        assert all(x == ZERO for x in m.apply(v))


@given(matrices)
def test_determinant_and_charpoly_against_sympy(m):
    s = _to_sympy(m, _S)
    assert _same(determinant(m), s.det(method="berkowitz"))
    t = sympy.Symbol("t")
    ref = sympy.Poly(s.charpoly(t).as_expr(), t).all_coeffs()
    ours = charpoly(m)
    assert len(ours) == len(ref)
    assert all(_same(a, b) for a, b in zip(ours, ref))


def test_irrational_rank():
    m = Matrix([[ONE, PHI], [PHI - 1, ONE]])  # (phi - 1) phi = 1: singular
    assert rank(m) == 1
    assert determinant(m) == ZERO


def test_matrix_shape_errors():
    with pytest.raises(ValueError):
        determinant(Matrix([[ONE, ZERO]]))
    with pytest.raises(ValueError):
        charpoly(Matrix([[ONE, ZERO]]))
