from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptsphere.exact import Exact, I, ONE, ZERO, rat

rationals = st.fractions(
    min_value=-(10**6), max_value=10**6, max_denominator=10**6
)
exacts = st.builds(lambda a, b: rat(a, b), rationals, rationals)


def test_basic_arithmetic():
    assert rat(1, 2) + rat(2, -1) == rat(3, 1)
    assert I * I == rat(-1)
    assert (ONE + I) * (ONE - I) == rat(2)
    assert rat(Fraction(3, 4)).inverse() == rat(Fraction(4, 3))


def test_sqrt_radicals():
    r2 = Exact.sqrt_rational(2)
    assert r2 * r2 == rat(2)
    r8 = Exact.sqrt_rational(8)
    assert r8 == r2.__mul__(rat(2))
    assert Exact.sqrt_rational(Fraction(9, 4)) == rat(Fraction(3, 2))
    neg = Exact.sqrt_rational(-2)
    assert neg * neg == rat(-2)


def test_conjugate_and_parts():
    z = rat(Fraction(1, 3), Fraction(-2, 5))
    assert z.conjugate() == rat(Fraction(1, 3), Fraction(2, 5))
    assert z.re == Fraction(1, 3)
    assert z.im == Fraction(-2, 5)
    assert complex(z.to_complex()) == pytest.approx(1 / 3 - 0.4j)


def test_inverse_of_radical_mix():
    z = rat(1) + Exact.sqrt_rational(2)
    assert (z * z.inverse()) == ONE
    w = I * Exact.sqrt_rational(3) + rat(Fraction(1, 2))
    assert (w * w.inverse()) == ONE


def test_power_and_division():
    assert rat(3) ** 4 == rat(81)
    assert (I ** 2) == rat(-1)
    assert rat(5) / rat(2) == rat(Fraction(5, 2))
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(exacts, exacts, exacts)
@settings(max_examples=200, deadline=None)
def test_associativity(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)


@given(exacts)
@settings(max_examples=200, deadline=None)
def test_multiplicative_inverse(a):
    if not a.is_zero():
        assert a * a.inverse() == ONE


@given(exacts, exacts)
@settings(max_examples=200, deadline=None)
def test_distributivity_and_conjugation(a, b):
    c = rat(Fraction(7, 3))
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
