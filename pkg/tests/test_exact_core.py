from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seifert_wrt.exact_core import (
    BivariatePoly,
    NonRationalError,
    PiScaledPoly,
    as_rational,
    bernoulli,
    eval_univariate,
    faulhaber,
    parity_split,
)
from seifert_wrt.xi_transform import pm

K, X = BivariatePoly.k(), BivariatePoly.x()


def test_bernoulli_small_values():
    assert bernoulli(0) == 1
    assert bernoulli(2) == F(1, 6)
    assert bernoulli(4) == F(-1, 30)
    assert bernoulli(6) == F(1, 42)
    assert bernoulli(12) == F(-691, 2730)


@pytest.mark.parametrize("bad", [1, 3, -2, 2.0, True])
def test_bernoulli_rejects_odd_and_nonint(bad):
    with pytest.raises(ValueError):
        bernoulli(bad)


def test_faulhaber_closed_forms():
    q0, q1, q3 = faulhaber(0), faulhaber(1), faulhaber(3)
    for ell in range(0, 12):
        assert eval_univariate(q0, ell) == ell
        assert eval_univariate(q1, ell) == F(ell * (ell + 1), 2)
        assert eval_univariate(q3, ell) == F(ell ** 2 * (ell + 1) ** 2, 4)


@given(p=st.integers(0, 12), ell=st.integers(0, 20))
def test_faulhaber_matches_brute_sum(p, ell):
    assert eval_univariate(faulhaber(p), ell) == sum(m ** p for m in range(1, ell + 1))


def test_as_rational_refuses_floats():
    assert as_rational(3) == F(3)
    assert as_rational(F(1, 3)) == F(1, 3)
    with pytest.raises(NonRationalError):
        as_rational(0.5)
    with pytest.raises(NonRationalError):
        BivariatePoly({(0, 0): 0.25})


def test_parity_split_examples():
    p1 = pm(1)
    even, odd = parity_split(p1)
    assert even == BivariatePoly.monomial(1, 0)
    assert odd == BivariatePoly.monomial(1, 1, -1)
    p2 = K ** 2 * (-F(1, 2) * X ** 2 + X - F(1, 3)) + F(1, 3)
    even, odd = parity_split(p2)
    assert even == -F(1, 2) * K ** 2 * X ** 2 - F(1, 3) * K ** 2 + F(1, 3)
    assert odd == K ** 2 * X
    zero = BivariatePoly()
    assert parity_split(zero) == (zero, zero)


def test_evaluation_and_calculus():
    p3 = pm(3)
    assert p3.evaluate(4, F(1, 4)) == -5
    assert BivariatePoly.constant(7).diff_x() == BivariatePoly()
    assert pm(2).integrate_x(0, 2) == BivariatePoly.constant(F(2, 3))
    assert (X ** 3).antiderivative_x() == F(1, 4) * X ** 4
    assert (X ** 2 + K).substitute_x(X + 1) == X ** 2 + 2 * X + 1 + K


def test_negative_k_powers_are_carried():
    p = BivariatePoly.monomial(-1, 0, 2) * K ** 2
    assert p == 2 * K
    assert not BivariatePoly.monomial(-2, 1).is_polynomial()


def test_monomial_round_trip():
    p = pm(5)
    assert BivariatePoly.from_monomials(p.to_monomials()) == p


def test_pi_scaled_poly():
    ps = PiScaledPoly(X * (X - 1), 2)
    assert ps.degree == 2
    assert ps.evaluate(0.5) == pytest.approx(-0.25 * (2 * 3.141592653589793) ** 2)
    assert ps.derivative().coefficient(0) == (F(-1), 2)


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.dictionaries(st.tuples(st.integers(-2, 3), st.integers(0, 3)), coeff, max_size=5).map(BivariatePoly)


@settings(max_examples=60)
@given(a=polys, b=polys, c=polys)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert a * b == b * a


@settings(max_examples=60)
@given(a=polys, b=polys, k=st.integers(1, 6), x=st.fractions(-2, 2, max_denominator=5))
def test_evaluation_is_a_ring_map(a, b, k, x):
    assert (a * b).evaluate(k, x) == a.evaluate(k, x) * b.evaluate(k, x)
    assert (a + b).evaluate(k, x) == a.evaluate(k, x) + b.evaluate(k, x)


@settings(max_examples=40)
@given(a=polys)
def test_derivative_of_antiderivative(a):
    assert a.antiderivative_x().diff_x() == a
