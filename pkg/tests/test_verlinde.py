import math
from fractions import Fraction as F

import numpy as np
import pytest

from seifert_wrt.exact_core import BivariatePoly
from seifert_wrt.verlinde import (
    IntegrityError,
    admissibility_tensor,
    admissible,
    build_family,
    counting_via_pm,
    family_count,
    fusion_count_oracle,
    genus_constant,
    s_entry,
    verlinde_number,
    verlinde_vector,
    volume_vg,
    volume_vg_derivative,
)

X = BivariatePoly.x()


def test_s_entry():
    assert s_entry(1, 1, 4) == pytest.approx(0.5)
    assert s_entry(2, 3, 7) == s_entry(3, 2, 7)
    assert s_entry(1, 6, 7) == pytest.approx(s_entry(1, 1, 7))
    with pytest.raises(ValueError):
        s_entry(0, 1, 4)


def test_admissibility():
    assert admissible(1, 1, 1, 2)
    assert not admissible(1, 1, 2, 5)  # even sum
    assert not admissible(1, 1, 3, 5)  # triangle
    assert not admissible(3, 3, 3, 4)  # level bound
    adm = admissibility_tensor(6)
    assert adm[2, 2, 2] == int(admissible(3, 3, 3, 6))
    assert np.array_equal(adm, adm.transpose(1, 0, 2))


@pytest.mark.parametrize("g,k,ell,value", [(1, 5, 3, 2), (2, 4, 1, 10), (3, 6, 2, 0), (2, 3, 1, 4)])
def test_verlinde_numbers(g, k, ell, value):
    assert verlinde_number(g, k, ell) == value


@pytest.mark.parametrize("g,k,ell,value", [(1, 5, 3, 2), (2, 3, 1, 4), (2, 4, 1, 10), (2, 5, 2, 0)])
def test_fusion_oracle(g, k, ell, value):
    assert fusion_count_oracle(g, k, ell) == value


@pytest.mark.parametrize("g,k", [(2, 4), (2, 5), (3, 4)])
def test_fusion_brute_force_equals_contraction(g, k):
    for ell in range(1, k):
        assert fusion_count_oracle(g, k, ell, brute=True) == fusion_count_oracle(g, k, ell)


def test_counting_via_polynomial():
    assert counting_via_pm(2, 4, 1) == 10
    assert counting_via_pm(2, 3, 1) == 4
    for k in range(2, 12):
        for ell in range(1, k, 2):
            assert counting_via_pm(1, k, ell) == k - ell
    with pytest.raises(ValueError):
        counting_via_pm(2, 5, 2)


def test_large_level_falls_back_to_exact_rounding():
    # counts near 1e18 exceed double precision; the extended-precision path must agree with the polynomial
    g, k = 4, 300
    vec = verlinde_vector(g, k)
    for ell in (1, 7, 151, 299):
        assert vec[ell - 1] == counting_via_pm(g, k, ell)


def test_extended_precision_env(extended_precision):
    assert verlinde_number(3, 12, 5) == counting_via_pm(3, 12, 5)


def test_bad_arguments():
    with pytest.raises(ValueError):
        verlinde_number(0, 4, 1)
    with pytest.raises(ValueError):
        verlinde_number(2, 4, 4)


def test_genus_constant():
    assert genus_constant(1) == F(1, 2)
    assert genus_constant(2) == F(-1, 4)


def test_family_genus_two():
    fam = build_family(2)
    p20 = fam.polys[0]
    assert p20.two_pi_power == 4
    # (4 pi^4 / 3) x (x-1)(x-2) = (2 pi)^4 / 12 * x(x-1)(x-2)
    assert p20.poly == F(1, 12) * X * (X - 1) * (X - 2)
    assert fam.lambdas[0] == (F(-1, 4), 4)
    assert fam.lam(0) == pytest.approx(-4 * math.pi ** 4)


def test_family_genus_one():
    p10 = build_family(1).polys[0]
    assert p10.two_pi_power == 1
    assert p10.poly == 1 - X


@pytest.mark.parametrize("g", range(1, 6))
def test_family_structure(g):
    fam = build_family(g)
    for m in range(g):
        assert fam.degree(m) == 2 * (g - m) - 1
    assert fam.lambdas[0][0] == 2 * genus_constant(g) / math.factorial(2 * (g - 1))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_family_reproduces_counts(g):
    for k in range(2, 14):
        for ell in range(1, k, 2):
            assert family_count(g, k, ell) == verlinde_number(g, k, ell)


def test_volume_function():
    assert volume_vg(2, 0.5) == pytest.approx(math.pi ** 4 / 2)
    assert volume_vg(2, 1e-9) == pytest.approx(0, abs=1e-6)
    assert volume_vg_derivative(2, 0.0) == pytest.approx(8 * math.pi ** 4 / 3)
    with pytest.raises(ValueError):
        volume_vg(2, 1.0)


def test_integrity_error_is_arithmetic():
    assert issubclass(IntegrityError, ArithmeticError)
