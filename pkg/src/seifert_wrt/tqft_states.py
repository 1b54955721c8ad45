"""Level-k torus representation, surface-times-circle states and the surgery pairing Z_k."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.fft

from .verlinde import genus_constant, verlinde_vector
from .xi_transform import pm

__all__ = [
    "S_MATRIX",
    "T_MATRIX",
    "GluingWord",
    "rho_T_apply",
    "rho_S_apply",
    "rho_S_dense",
    "basis_vector",
    "canonical_cd",
    "decompose_gluing",
    "apply_word",
    "sigma_s1_state",
    "z_k",
    "extended_state",
    "PhiBasisReport",
    "phi_basis_check",
]

S_MATRIX = ((0, -1), (1, 0))
T_MATRIX = ((1, 1), (0, 1))


def _matmul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _token_matrix(token):
    name, n = token
    if name == "S":
        return S_MATRIX
    return ((1, n), (0, 1))


@dataclass(frozen=True)
class GluingWord:
    """An SL(2,Z) matrix and a factorization into tokens ("S", 1) and ("T", n)."""

    matrix: tuple
    tokens: tuple
    euclid_steps: int = 0

    def product(self):
        acc = ((1, 0), (0, 1))
        for tok in self.tokens:
            acc = _matmul(acc, _token_matrix(tok))
        return acc

    def __str__(self) -> str:
        return " ".join("S" if n == "S" else f"T^{e}" for n, e in self.tokens) or "id"


def rho_T_apply(v: np.ndarray, power: int = 1) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    k = v.shape[0] + 1
    ell = np.arange(1, k)
    return np.exp(1j * np.pi * power * (ell ** 2 - 1) / (2 * k)) * v


def rho_S_dense(k: int) -> np.ndarray:
    ell = np.arange(1, k)
    return np.sqrt(2 / k) * np.sin(np.pi * np.outer(ell, ell) / k)


def rho_S_apply(v: np.ndarray, method: str = "fast") -> np.ndarray:
    """Sine kernel sqrt(2/k) sin(pi l l'/k); ``fast`` is the orthonormal type-I DST."""
    v = np.asarray(v, dtype=complex)
    if method == "fast":
        return scipy.fft.dst(v, type=1, norm="ortho")
    if method == "dense":
        return rho_S_dense(v.shape[0] + 1) @ v
    raise ValueError(f"unknown method {method!r}")


def basis_vector(ell: int, k: int) -> np.ndarray:
    v = np.zeros(k - 1, dtype=complex)
    v[ell - 1] = 1.0
    return v


def canonical_cd(a: int, b: int) -> tuple[int, int]:
    """(c, d) with ac + bd = 1, |c| minimal, ties broken towards c >= 0."""
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a}, {b}) must be 1")
    if b == 0:
        return a, 0
    modulus = abs(b)
    c0 = pow(a, -1, modulus) if modulus > 1 else 0
    best = min((c0, c0 - modulus), key=lambda c: (abs(c), c < 0))
    d, rem = divmod(1 - a * best, b)
    assert rem == 0
    return best, d


def decompose_gluing(a: int, b: int, c: int | None = None, d: int | None = None) -> GluingWord:
    """Factor [[a, -d], [b, c]] into S and T^n tokens by the Euclidean algorithm."""
    if (a, b) == (0, 0) or math.gcd(a, b) != 1:
        raise ValueError(f"(a, b) = ({a}, {b}) must be coprime")
    if c is None or d is None:
        c, d = canonical_cd(a, b)
    if a * c + b * d != 1:
        raise ValueError("need ac + bd = 1")
    source = ((a, -d), (b, c))
    m = source
    tokens = []
    steps = 0
    s_inv = ((0, 1), (-1, 0))
    while m[1][0] != 0:
        q = m[0][0] // m[1][0]
        if q:
            tokens.append(("T", q))
        tokens.append(("S", 1))
        m = _matmul(s_inv, _matmul(((1, -q), (0, 1)), m))
        steps += 1
    if m[0][0] == -1:
        tokens += [("S", 1), ("S", 1)]
        m = tuple(tuple(-e for e in row) for row in m)
    if m[0][1]:
        tokens.append(("T", m[0][1]))
    word = GluingWord(source, tuple(tokens), steps)
    if word.product() != source:
        raise AssertionError(f"word {word} does not multiply to {source}")
    return word


def apply_word(word: GluingWord, v: np.ndarray, method: str = "fast") -> np.ndarray:
    for name, n in reversed(word.tokens):
        v = rho_S_apply(v, method) if name == "S" else rho_T_apply(v, n)
    return v


def _polynomial_counts(g: int, k: int) -> np.ndarray:
    # 2 C_g k^{g-1} P_{2g-1}(k, l/k) as exact integers for odd l
    poly = pm(2 * g - 1)
    pref = 2 * genus_constant(g) * Fraction(k) ** (g - 1)
    coeffs: dict[int, Fraction] = {}
    for (q, p), c in poly.items():
        coeffs[p] = coeffs.get(p, Fraction(0)) + c * Fraction(k) ** (q - p)
    out = np.zeros(k - 1, dtype=object)
    for ell in range(1, k, 2):
        value = pref * sum(c * ell ** p for p, c in coeffs.items())
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral count at g={g}, k={k}, l={ell}")
        out[ell - 1] = int(value)
    return out


def sigma_s1_state(g: int, k: int, method: str = "exact") -> np.ndarray:
    """Coefficients N^{g,k}_l of Z_k(Sigma x S^1) in the Verlinde basis.

    ``exact`` evaluates the integer counts through P_{2g-1} in rational arithmetic
    (cheap at any k); ``verlinde`` uses the Verlinde sum. Both give the same integers.
    """
    if g < 1 or k < 2:
        raise ValueError("need g >= 1 and k >= 2")
    if method == "exact":
        return _polynomial_counts(g, k)
    if method == "verlinde":
        return verlinde_vector(g, k)
    raise ValueError(f"unknown method {method!r}")


def z_k(g: int, a: int, b: int, k: int, relaxed: bool = False, word: GluingWord | None = None,
        method: str = "fast") -> complex:
    """<Z_k(Sigma x S^1), rho_k(phi) e_1> with <u, v> = sum u_l conj(v_l).

    Defined up to powers of tau_k = exp(3 i pi/4 - 3 i pi/(2k)); deterministic for the canonical word.
    ``relaxed`` admits a = 0 (used in tests).
    """
    if g < 1 or k < 2:
        raise ValueError("need g >= 1 and k >= 2")
    if not relaxed and (a == 0 or b < 1):
        raise ValueError("need a != 0 and b >= 1")
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a}, {b}) must be 1")
    if word is None:
        word = decompose_gluing(a, b)
    v = apply_word(word, basis_vector(1, k), method)
    counts = sigma_s1_state(g, k).astype(float)
    return complex(np.sum(counts * np.conj(v)))


def extended_state(block: np.ndarray) -> np.ndarray:
    """Embed via e_l = (Psi_l - Psi_{-l})/sqrt(2) into the 2k-dimensional space."""
    block = np.asarray(block, dtype=complex)
    k = block.shape[0] + 1
    out = np.zeros(2 * k, dtype=complex)
    ell = np.arange(1, k)
    out[ell] = block / np.sqrt(2)
    out[(-ell) % (2 * k)] = -block / np.sqrt(2)
    return out


@dataclass(frozen=True)
class PhiBasisReport:
    g: int
    k: int
    deviation: float  # relative sup deviation after fitting one unit phase
    phase: float
    fitted_scale: complex  # least-squares complex factor between computed and printed coefficients
    deviation_after_scale: float
    endpoint_coefficients: tuple[complex, complex]  # coefficients at m = 0 and m = k


def phi_basis_check(g: int, k: int) -> PhiBasisReport:
    """Compare Z_k(Sigma x S^1) in the Phi basis with (sqrt(k)/2i) S_{m,1}^{1-2g}.

    Phi_l = (e^{i pi/4}/sqrt(2k)) sum_n e^{i pi l n/k} Psi_n. Only a unit phase is fitted
    for ``deviation``; ``fitted_scale`` shows the full complex factor that would be needed.
    """
    block = sigma_s1_state(g, k).astype(float)
    psi = extended_state(block)
    n = np.arange(2 * k)
    basis = np.exp(1j * np.pi / 4) * np.exp(1j * np.pi * np.outer(n, n) / k) / np.sqrt(2 * k)
    coeffs = basis.conj().T @ psi
    m = n[n % k != 0]
    s1 = np.sqrt(2 / k) * np.sin(np.pi * m / k)
    printed = np.sqrt(k) / 2j * s1 ** (1 - 2 * g)
    got = coeffs[m]
    overlap = np.vdot(printed, got)
    phase = float(np.angle(overlap))
    norm = float(np.max(np.abs(printed)))
    deviation = float(np.max(np.abs(got - np.exp(1j * phase) * printed))) / norm
    scale = overlap / np.vdot(printed, printed)
    after = float(np.max(np.abs(got - scale * printed))) / norm
    return PhiBasisReport(g, k, deviation, phase, complex(scale), after, (complex(coeffs[0]), complex(coeffs[k])))
