from fractions import Fraction

import pytest
from hypothesis import given

from aidlab.kernel import LPoly, lpoly_divide_exact, lpoly_mul, lpoly_parity_split, to_rat

from conftest import lpolys, small_rats

T = LPoly.monomial


def test_mul_distributes_monomial():
    assert lpoly_mul(T(2) + T(-2), T(2)) == T(4) + 1


def test_mul_by_zero():
    assert lpoly_mul(T(3) * 5 + 1, LPoly()) == LPoly()


def test_difference_of_squares():
    assert (1 + T(2)) * (1 - T(2)) == 1 - T(4)


def test_parity_split_examples():
    assert lpoly_parity_split(T(3) + T(2)) == (T(2), T(3))
    assert lpoly_parity_split(LPoly()) == (LPoly(), LPoly())
    assert lpoly_parity_split(T(-1) * 2 + 3 + T(4)) == (3 + T(4), T(-1) * 2)


def test_zero_coefficients_are_dropped():
    p = LPoly({1: 2, 3: 0, 5: Fraction(0)})
    assert p.exponents() == [1]
    assert (T(1) - T(1)).is_zero()


def test_to_rat_rejects_floats_and_bools():
    assert to_rat("3/6") == Fraction(1, 2)
    with pytest.raises(TypeError):
        to_rat(0.5)
    with pytest.raises(TypeError):
        to_rat(True)


def test_shift_and_parity_flags():
    p = T(-2) + T(4) * Fraction(1, 3)
    assert p.shift(1) == T(-1) + T(5) * Fraction(1, 3)
    assert p.is_even() and not p.is_odd()
    assert p.shift(1).is_odd()


def test_str_is_ascending():
    assert str(T(2) * Fraction(3, 2) - 1 + T(-1)) == "t^-1 - 1 + 3/2 t^2"
    assert str(LPoly()) == "0"


def test_exact_division():
    # (1 + t^2)(t^-1 - 3t) = t^-1 - 2t - 3t^3
    q = lpoly_divide_exact(T(-1) - T(1) * 2 - T(3) * 3, 1 + T(2))
    assert q == T(-1) - T(1) * 3
    assert lpoly_divide_exact(LPoly.constant(1), 1 + T(2)) is None
    assert lpoly_divide_exact(T(5), T(-3)) == T(8)
    with pytest.raises(ZeroDivisionError):
        lpoly_divide_exact(T(1), LPoly())


@given(lpolys, lpolys, lpolys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LPoly()
    assert a * 1 == a


@given(lpolys, lpolys)
def test_division_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert lpoly_divide_exact(a * b, b) == a


@given(lpolys, small_rats)
def test_parity_split_recombines(a, c):
    even, odd = lpoly_parity_split(a * c)
    assert even + odd == a * c
    assert even.is_even() and odd.is_odd()
