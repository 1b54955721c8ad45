"""The transform Xi_{m,k} of negative sine powers and the polynomials P_m.

Xi_{m,k}(x) = i^{-m} sum_{y in R_k minus {0,1}} sin(pi y)^{-m} exp(i k pi y x) on the grid
R_k = (1/k)Z / 2Z. On [0, 2] it agrees with (1 + (-1)^{kx+m}) P_m(k, x) for a polynomial
P_m with rational coefficients. P_m is built twice: by inverting the difference operator
on the grid (cumulative sums closed with power-sum polynomials) and by solving the Taylor
recurrence that links P_m to P_{m-1}.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._config import extended_precision, precision_bits
from .exact_core import BivariatePoly, NonRationalError, bernoulli, faulhaber, parity_split

__all__ = [
    "GridFunction",
    "PmCertificate",
    "xi_direct",
    "apply_T",
    "apply_L",
    "apply_L_inverse",
    "apply_Delta",
    "dft",
    "plane_wave",
    "pm_inductive",
    "pm_recurrence",
    "pm",
    "verify_dev_part",
    "DevPartReport",
]


@dataclass(frozen=True)
class GridFunction:
    """Values f(j/k) for j = 0..2k-1."""

    k: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (2 * self.k,):
            raise ValueError(f"grid function at level {self.k} needs {2 * self.k} values, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    def __call__(self, j: int) -> complex:
        return self.values[j % (2 * self.k)]

    def allclose(self, other: "GridFunction", atol: float) -> bool:
        return self.k == other.k and bool(np.max(np.abs(self.values - other.values), initial=0.0) <= atol)


def _check_level(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise ValueError(f"level k must be an integer >= 2, got {k!r}")


def _sine_weights(m: int, k: int) -> np.ndarray:
    j = np.arange(2 * k)
    s = np.sin(np.pi * j / k)
    w = np.zeros(2 * k)
    mask = (j % k) != 0
    w[mask] = s[mask] ** (-m)
    return w


def xi_direct(m: int, k: int) -> GridFunction:
    """Direct O(k^2) evaluation of Xi_{m,k} on the whole grid.

    With SEIFERT_WRT_PRECISION above 64 the sum is done in mpmath at that precision.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    _check_level(k)
    if extended_precision():
        return _xi_direct_mp(m, k)
    j = np.arange(2 * k)
    phase = np.exp(1j * np.pi * np.outer(j, j) / k)
    vals = (1j) ** (-m) * (phase @ _sine_weights(m, k))
    return GridFunction(k, vals)


def _xi_direct_mp(m: int, k: int) -> GridFunction:
    import mpmath

    with mpmath.workprec(precision_bits()):
        pref = mpmath.mpc(0, 1) ** (-m)
        ys = [j for j in range(2 * k) if j % k]
        weights = {j: mpmath.sinpi(mpmath.mpf(j) / k) ** (-m) for j in ys}
        vals = []
        for n in range(2 * k):
            acc = mpmath.mpc(0)
            for j in ys:
                acc += weights[j] * mpmath.expjpi(mpmath.mpf(j * n) / k)
            vals.append(complex(pref * acc))
    return GridFunction(k, np.array(vals))


def plane_wave(y_index: int, k: int) -> GridFunction:
    """u_y(x) = exp(i k pi y x) for y = y_index / k."""
    j = np.arange(2 * k)
    return GridFunction(k, np.exp(1j * np.pi * y_index * j / k))


def apply_T(f: GridFunction) -> GridFunction:
    signs = np.where(np.arange(2 * f.k) % 2 == 0, 1.0, -1.0)
    return GridFunction(f.k, signs * f.values)


def apply_L(f: GridFunction) -> GridFunction:
    # (Lf)(x) = f(x + 1/k)
    return GridFunction(f.k, np.roll(f.values, -1))


def apply_L_inverse(f: GridFunction) -> GridFunction:
    return GridFunction(f.k, np.roll(f.values, 1))


def apply_Delta(f: GridFunction) -> GridFunction:
    return GridFunction(f.k, 0.5 * (np.roll(f.values, -1) - np.roll(f.values, 1)))


def dft(f: GridFunction) -> GridFunction:
    """F(f)(y) = <f, u_y> with <f, g> = (1/2k) sum f conj(g)."""
    n = 2 * f.k
    return GridFunction(f.k, np.fft.fft(f.values) / n)


# exact constructions


@dataclass(frozen=True)
class PmCertificate:
    m: int
    poly: BivariatePoly
    method: str
    singular_part: BivariatePoly

    def __post_init__(self):
        for (q, p), c in self.poly.items():
            if not isinstance(c, Fraction):
                raise NonRationalError(f"coefficient of k^{q} x^{p} is not rational")
            if not (0 <= p <= q <= self.m) or (q - self.m) % 2:
                raise AssertionError(f"P_{self.m} has a monomial k^{q} x^{p} outside the allowed support")
        lead = self.singular_part.coefficient(self.m, self.m - 1)
        if lead != Fraction(1, math.factorial(self.m - 1)):
            raise AssertionError(f"P_{self.m}: coefficient of k^{self.m} x^{self.m - 1} is {lead}")


def _singular_part(m: int, poly: BivariatePoly) -> BivariatePoly:
    plus, minus = parity_split(poly)
    return minus if m % 2 == 0 else plus


def _cumulative(f: BivariatePoly) -> BivariatePoly:
    """l -> sum_{n=1}^{l} f(n), with l carried in the x-slot."""
    out = BivariatePoly()
    for (q, p), c in f.items():
        qp = faulhaber(p)
        out = out + BivariatePoly({(q, j): c * a for j, a in enumerate(qp)})
    return out


def _average_corrected_inverse(f: BivariatePoly) -> BivariatePoly:
    # L f = 2 Lt f - (2/k) sum_{l=1}^{k} Lt f(l): the inverse of the difference operator
    cum = _cumulative(f)
    total = _cumulative(cum).substitute_x(BivariatePoly.k())
    return cum * 2 - total * BivariatePoly.monomial(-1, 0, 2)


_index_of_x_odd = BivariatePoly({(1, 1): Fraction(1, 2), (0, 0): Fraction(1, 2)})  # l = (kx+1)/2
_index_of_x_even = BivariatePoly({(1, 1): Fraction(1, 2)})  # l = kx/2


def _xi0_indexed() -> BivariatePoly:
    """Cumulative sum of Xi_0 restricted to the even points x = 2(l-1)/k.

    Xi_0 = 2k delta - 1 - (-1)^{kx} gives f(1) = 2k - 2 and f(l) = -2 otherwise,
    whose running sum is 2k - 2l. Returned already summed because of the delta term.
    """
    return BivariatePoly({(1, 0): 2, (0, 1): -2})


_inductive_memo: dict[int, BivariatePoly] = {}
_recurrence_memo: dict[int, BivariatePoly] = {}
_memo_lock = threading.Lock()


def _inductive_poly(m: int) -> BivariatePoly:
    if m in _inductive_memo:
        return _inductive_memo[m]
    if m == 1:
        cum = _xi0_indexed()
        total = _cumulative(cum).substitute_x(BivariatePoly.k())
        inv = cum * 2 - total * BivariatePoly.monomial(-1, 0, 2)
        result = inv.substitute_x(_index_of_x_odd) * Fraction(1, 2)
    else:
        prev = _inductive_poly(m - 1)
        kinv = BivariatePoly.monomial(-1, 0)
        if (m - 1) % 2 == 0:
            # even -> odd: f(l) = Xi_{m-1}(2(l-1)/k), read back at l = (kx+1)/2
            x_of_l = (BivariatePoly.x() - 1) * kinv * 2
            f = prev.substitute_x(x_of_l) * 2
            result = _average_corrected_inverse(f).substitute_x(_index_of_x_odd) * Fraction(1, 2)
        else:
            # odd -> even: f(l) = Xi_{m-1}((2l-1)/k), read back at l = kx/2
            x_of_l = (BivariatePoly.x() * 2 - 1) * kinv
            f = prev.substitute_x(x_of_l) * 2
            result = _average_corrected_inverse(f).substitute_x(_index_of_x_even) * Fraction(1, 2)
    if not result.is_polynomial():
        raise AssertionError(f"inductive construction of P_{m} left negative powers of k")
    with _memo_lock:
        _inductive_memo.setdefault(m, result)
    return result


def pm_inductive(m: int) -> PmCertificate:
    """P_m by repeatedly inverting the grid difference operator, symbolically in the index."""
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")
    poly = _inductive_poly(m)
    return PmCertificate(m, poly, "inductive", _singular_part(m, poly))


def _solve_taylor_recurrence(m: int, prev: BivariatePoly) -> BivariatePoly:
    """Solve sum_l k^{1-2l}/(2l-1)! D^{2l-1} P = prev up to a polynomial in k alone."""
    blocks: dict[int, BivariatePoly] = {}
    for s in range(m - 1, -2, -1):
        q = s + 1
        rhs = prev.k_coefficient(s)
        ell = 2
        while s + 2 * ell - 1 <= m:
            higher = blocks.get(s + 2 * ell - 1)
            if higher:
                rhs = rhs - higher.diff_x(2 * ell - 1) * Fraction(1, math.factorial(2 * ell - 1))
            ell += 1
        blocks[q] = rhs.antiderivative_x()
    out = BivariatePoly()
    for q, block in blocks.items():
        out = out + block * BivariatePoly.monomial(q, 0)
    return out


def _k_only(poly: BivariatePoly) -> BivariatePoly:
    return poly.filter(lambda q, p: p == 0)


def _recurrence_poly(m: int) -> BivariatePoly:
    if m in _recurrence_memo:
        return _recurrence_memo[m]
    if m == 1:
        # seed: P_1 = k(1 - x), the closed form of the m = 1 transform
        result = BivariatePoly({(1, 0): 1, (1, 1): -1})
    else:
        prev = _recurrence_poly(m - 1)
        base = _solve_taylor_recurrence(m, prev)
        k = BivariatePoly.k()
        if m % 2 == 0:
            # k int_0^2 P dx = 4 sum_l B_{2l}/(2l)! (2/k)^{2l-1} D^{2l-1} P^-(k, 0)
            _, odd = parity_split(base)
            rhs = BivariatePoly()
            for ell in range(1, m // 2 + 2):
                deriv = odd.diff_x(2 * ell - 1).substitute_x(BivariatePoly.constant(0))
                if not deriv:
                    continue
                factor = Fraction(4) * bernoulli(2 * ell) / math.factorial(2 * ell) * Fraction(2) ** (2 * ell - 1)
                rhs = rhs + deriv * BivariatePoly.monomial(-(2 * ell - 1), 0, factor)
            lhs = base.integrate_x(0, 2) * k
            # the k-only part c(k) contributes 2k c(k) to the left side
            const = (rhs - lhs) * BivariatePoly.monomial(-1, 0, Fraction(1, 2))
        else:
            # P_m(k, 1/k) = P_{m-1}(k, 0)
            at_inv_k = base.substitute_x(BivariatePoly.monomial(-1, 0))
            const = prev.substitute_x(BivariatePoly.constant(0)) - at_inv_k
        if not const.is_polynomial() or const.degree_x > 0:
            raise AssertionError(f"initial condition for P_{m} produced a non-polynomial k-part: {const}")
        result = base - _k_only(base) + const
    with _memo_lock:
        _recurrence_memo.setdefault(m, result)
    return result


def pm_recurrence(m: int) -> PmCertificate:
    """P_m from P_{m-1} through the Taylor recurrence plus the Bernoulli or 1/k initial condition."""
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")
    poly = _recurrence_poly(m)
    return PmCertificate(m, poly, "recurrence", _singular_part(m, poly))


def pm(m: int) -> BivariatePoly:
    """P_m (from the inductive construction)."""
    return pm_inductive(m).poly


@dataclass(frozen=True)
class DevPartReport:
    m: int
    k: int
    max_abs_deviation: float
    scale: float
    tolerance: float

    @property
    def relative_deviation(self) -> float:
        return self.max_abs_deviation / self.scale

    @property
    def passed(self) -> bool:
        return self.max_abs_deviation < self.tolerance

    def __bool__(self) -> bool:
        return self.passed


def verify_dev_part(m: int, k: int, tolerance: float | None = None) -> DevPartReport:
    """Compare xi_direct with (1 + (-1)^{j+m}) P_m(k, j/k) at j = 0..2k.

    ``scale`` is the sup-norm of Xi on the grid (at least 1), so that
    ``relative_deviation`` is the deviation relative to the size of the function.
    Default tolerance is 1e-9 * k^(m+1).
    """
    _check_level(k)
    xi = xi_direct(m, k)
    poly = pm(m)
    dev = 0.0
    for j in range(2 * k + 1):
        factor = 1 + (-1) ** (j + m)
        exact = factor * float(poly.evaluate(k, Fraction(j, k))) if factor else 0.0
        value = xi(j)
        dev = max(dev, abs(value - exact))
    scale = max(1.0, float(np.max(np.abs(xi.values))))
    tol = 1e-9 * float(k) ** (m + 1) if tolerance is None else tolerance
    return DevPartReport(m, k, dev, scale, tol)
