import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seifert_wrt.tqft_states import (
    S_MATRIX,
    GluingWord,
    apply_word,
    basis_vector,
    canonical_cd,
    decompose_gluing,
    phi_basis_check,
    rho_S_apply,
    rho_S_dense,
    rho_T_apply,
    sigma_s1_state,
    z_k,
)


def test_rho_T():
    e1 = basis_vector(1, 4)
    assert np.allclose(rho_T_apply(e1), e1)
    assert np.allclose(rho_T_apply(basis_vector(3, 4)), -basis_vector(3, 4))
    v = np.random.default_rng(1).normal(size=9) + 0j
    assert np.linalg.norm(rho_T_apply(v, 5)) == pytest.approx(np.linalg.norm(v))


@pytest.mark.parametrize("k", [3, 4, 17, 64])
def test_rho_S_involutive_and_unitary(k):
    s = rho_S_dense(k)
    assert np.allclose(s @ s, np.eye(k - 1), atol=1e-10)
    assert np.allclose(s @ s.T.conj(), np.eye(k - 1), atol=1e-10)


def test_rho_S_at_level_three():
    out = rho_S_apply(basis_vector(1, 3))
    assert np.allclose(out, [1 / math.sqrt(2), 1 / math.sqrt(2)])


@pytest.mark.parametrize("k", [3, 8, 33, 100])
def test_fast_and_dense_sine_transform_agree(k):
    v = np.random.default_rng(k).normal(size=(k - 1, 2)) @ np.array([1, 1j])
    assert np.allclose(rho_S_apply(v, "fast"), rho_S_apply(v, "dense"), atol=1e-10)


def test_decompose_examples():
    assert decompose_gluing(0, 1).tokens == (("S", 1),)
    assert decompose_gluing(0, 1).product() == S_MATRIX
    assert decompose_gluing(1, 0).tokens == ()
    w = decompose_gluing(5, 3)
    prod = w.product()
    assert (prod[0][0], prod[1][0]) == (5, 3)


@settings(max_examples=80)
@given(a=st.integers(-60, 60), b=st.integers(1, 60))
def test_decompose_multiplies_back(a, b):
    if math.gcd(a, b) != 1:
        return
    c, d = canonical_cd(a, b)
    assert a * c + b * d == 1
    w = decompose_gluing(a, b)
    assert w.product() == ((a, -d), (b, c))
    # each Euclid step emits at most T^q S; the -I fix-up can add S S, and a final T^z
    assert len(w.tokens) <= 2 * w.euclid_steps + 3


def test_decompose_rejects_non_coprime():
    with pytest.raises(ValueError):
        decompose_gluing(4, 6)


def test_sigma_states():
    assert list(sigma_s1_state(2, 3)) == [4, 0]
    assert list(sigma_s1_state(1, 4)) == [3, 0, 1]
    for g in (1, 2, 3):
        for k in (5, 12, 31):
            exact = sigma_s1_state(g, k)
            assert all(v == 0 for v in exact[1::2])
            assert list(exact) == list(sigma_s1_state(g, k, method="verlinde"))


def test_z_k_relaxed_example():
    assert z_k(2, 0, 1, 3, relaxed=True) == pytest.approx(2 * math.sqrt(2))
    with pytest.raises(ValueError):
        z_k(2, 0, 1, 3)


@pytest.mark.parametrize("t", [-2, 1, 3])
def test_z_k_modulus_independent_of_cd(t):
    a, b = 5, 3
    c, d = canonical_cd(a, b)
    # the other solutions of ac + bd = 1 are (c + t b, d - t a)
    other = decompose_gluing(a, b, c + t * b, d - t * a)
    for k in (7, 11, 20):
        assert abs(z_k(2, a, b, k, word=other)) == pytest.approx(abs(z_k(2, a, b, k)), rel=1e-9)


def test_z_k_fast_equals_dense():
    for k in (5, 16, 29):
        assert z_k(2, 5, 3, k, method="fast") == pytest.approx(z_k(2, 5, 3, k, method="dense"), rel=1e-10)


def test_apply_word_identity():
    v = basis_vector(2, 6)
    assert np.allclose(apply_word(GluingWord(((1, 0), (0, 1)), ()), v), v)


@pytest.mark.parametrize("g,k", [(1, 3), (2, 8), (3, 13), (2, 40)])
def test_phi_coefficients_carry_extra_sqrt_two_over_k(g, k):
    # the computed coefficients equal sqrt(2/k) times the closed form, up to a unit phase
    rep = phi_basis_check(g, k)
    assert abs(rep.fitted_scale) == pytest.approx(math.sqrt(2 / k), rel=1e-10)
    assert rep.deviation_after_scale < 1e-10
    assert abs(rep.endpoint_coefficients[0]) < 1e-9 and abs(rep.endpoint_coefficients[1]) < 1e-9
