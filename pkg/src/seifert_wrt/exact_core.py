"""Exact rational arithmetic: Bernoulli numbers, power sums and sparse polynomials in (k, x)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "NonRationalError",
    "as_rational",
    "bernoulli",
    "faulhaber",
    "eval_univariate",
    "BivariatePoly",
    "parity_split",
    "PiScaledPoly",
]


class NonRationalError(TypeError):
    """Raised when a value that must be rational is not (e.g. a float leaks in)."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise NonRationalError("booleans are not coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise NonRationalError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


@lru_cache(maxsize=None)
def _bernoulli_all(n: int) -> tuple[Fraction, ...]:
    # B_0..B_n with B_1 = -1/2, from sum_{j<=m} binom(m+1, j) B_j = 0
    table = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum((math.comb(m + 1, j) * table[j] for j in range(m)), Fraction(0))
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """Even-index Bernoulli number B_n (B_2 = 1/6, B_4 = -1/30, ...)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 0 or n % 2:
        raise ValueError(f"bernoulli expects an even non-negative integer, got {n!r}")
    return _bernoulli_all(n)[n]


@lru_cache(maxsize=None)
def faulhaber(p: int) -> tuple[Fraction, ...]:
    """Coefficients c_0..c_{p+1} of Q_p with Q_p(l) = sum_{m=1}^{l} m^p.

    Uses the Bernoulli closed form with B_1 = +1/2.
    """
    if not isinstance(p, int) or p < 0:
        raise ValueError(f"faulhaber expects a non-negative integer, got {p!r}")
    bern = _bernoulli_all(p)
    coeffs = [Fraction(0)] * (p + 2)
    for j in range(p + 1):
        bj = -bern[1] if j == 1 else bern[j]
        coeffs[p + 1 - j] += Fraction(math.comb(p + 1, j)) * bj / (p + 1)
    return tuple(coeffs)


def eval_univariate(coeffs: Iterable, t):
    acc = 0
    for c in reversed(tuple(coeffs)):
        acc = acc * t + c
    return acc


class BivariatePoly:
    """Sparse polynomial sum c[q, p] k^q x^p with exact rational coefficients.

    Negative k-exponents are allowed so that intermediate Laurent expressions in k
    can be carried; ``is_polynomial`` tells whether the result is a genuine polynomial.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[tuple[int, int], object] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        for key, value in (coeffs or {}).items():
            q, p = key
            if not isinstance(q, int) or not isinstance(p, int) or p < 0:
                raise ValueError(f"bad exponent pair {key!r}")
            c = as_rational(value)
            if c:
                clean[(q, p)] = clean.get((q, p), Fraction(0)) + c
        self._c = {key: c for key, c in clean.items() if c}
        self._hash = None

    @classmethod
    def constant(cls, c) -> "BivariatePoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, q: int, p: int, c=1) -> "BivariatePoly":
        return cls({(q, p): c})

    @classmethod
    def k(cls) -> "BivariatePoly":
        return cls.monomial(1, 0)

    @classmethod
    def x(cls) -> "BivariatePoly":
        return cls.monomial(0, 1)

    # container protocol
    def items(self):
        return sorted(self._c.items())

    def coefficient(self, q: int, p: int) -> Fraction:
        return self._c.get((q, p), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, BivariatePoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self == BivariatePoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._c:
            return "BivariatePoly(0)"
        parts = []
        for (q, p), c in sorted(self._c.items(), reverse=True):
            mono = "*".join(s for s in (f"k^{q}" if q else "", f"x^{p}" if p else "") if s)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return "BivariatePoly(" + " + ".join(parts) + ")"

    # ring operations
    def _coerce(self, other) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            return other
        return BivariatePoly.constant(as_rational(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._c)
        for key, c in other._c.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BivariatePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly({key: -c for key, c in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, BivariatePoly):
            s = as_rational(other)
            return BivariatePoly({key: c * s for key, c in self._c.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (q1, p1), c1 in self._c.items():
            for (q2, p2), c2 in other._c.items():
                key = (q1 + q2, p1 + p2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = BivariatePoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # structure
    @property
    def degree_x(self) -> int:
        return max((p for _, p in self._c), default=-1)

    @property
    def degree_k(self) -> int:
        return max((q for q, _ in self._c), default=-1)

    @property
    def min_degree_k(self) -> int:
        return min((q for q, _ in self._c), default=0)

    def is_polynomial(self) -> bool:
        return all(q >= 0 for q, _ in self._c)

    def k_coefficient(self, q: int) -> "BivariatePoly":
        """The x-polynomial multiplying k^q."""
        return BivariatePoly({(0, p): c for (qq, p), c in self._c.items() if qq == q})

    def x_coefficients(self) -> list[Fraction]:
        """Dense x-coefficients when the polynomial has no k-dependence."""
        if any(q for q, _ in self._c):
            raise ValueError("polynomial depends on k")
        out = [Fraction(0)] * (self.degree_x + 1)
        for (_, p), c in self._c.items():
            out[p] = c
        return out

    def filter(self, predicate) -> "BivariatePoly":
        return BivariatePoly({key: c for key, c in self._c.items() if predicate(*key)})

    # calculus and evaluation
    def diff_x(self, order: int = 1) -> "BivariatePoly":
        out = {}
        for (q, p), c in self._c.items():
            if p >= order:
                out[(q, p - order)] = c * math.perm(p, order)
        return BivariatePoly(out)

    def antiderivative_x(self) -> "BivariatePoly":
        return BivariatePoly({(q, p + 1): c / (p + 1) for (q, p), c in self._c.items()})

    def integrate_x(self, lo, hi) -> "BivariatePoly":
        """Definite integral in x; the result depends on k only."""
        prim = self.antiderivative_x()
        return prim.substitute_x(BivariatePoly.constant(hi)) - prim.substitute_x(BivariatePoly.constant(lo))

    def substitute_x(self, value: "BivariatePoly") -> "BivariatePoly":
        value = self._coerce(value)
        powers = {0: BivariatePoly.constant(1)}
        out = BivariatePoly()
        for (q, p), c in self._c.items():
            if p not in powers:
                powers[p] = value ** p
            out = out + BivariatePoly.monomial(q, 0, c) * powers[p]
        return out

    def scale_k(self, factor) -> "BivariatePoly":
        """Substitute k -> factor * k for a rational factor."""
        f = as_rational(factor)
        return BivariatePoly({(q, p): c * f ** q for (q, p), c in self._c.items()})

    def evaluate(self, k, x) -> Fraction:
        k = as_rational(k)
        x = as_rational(x)
        return sum((c * k ** q * x ** p for (q, p), c in self._c.items()), Fraction(0))

    def evaluate_float(self, k: float, x: float) -> float:
        return float(sum(float(c) * k ** q * x ** p for (q, p), c in self._c.items()))

    def to_monomials(self) -> list[dict]:
        return [{"q": q, "p": p, "num": c.numerator, "den": c.denominator} for (q, p), c in self.items()]

    @classmethod
    def from_monomials(cls, rows: Iterable[Mapping]) -> "BivariatePoly":
        return cls({(int(r["q"]), int(r["p"])): Fraction(int(r["num"]), int(r["den"])) for r in rows})


def parity_split(poly: BivariatePoly) -> tuple[BivariatePoly, BivariatePoly]:
    """Split into (even-in-x part, odd-in-x part)."""
    return poly.filter(lambda q, p: p % 2 == 0), poly.filter(lambda q, p: p % 2 == 1)


@dataclass(frozen=True)
class PiScaledPoly:
    """The value (2*pi)**two_pi_power * poly, kept exact until evaluation."""

    poly: BivariatePoly
    two_pi_power: int = 0

    def __float__(self) -> float:
        return float(self.poly.evaluate(0, 0)) * (2 * math.pi) ** self.two_pi_power

    def evaluate(self, x, k=0) -> float:
        return self.poly.evaluate_float(float(k), float(x)) * (2 * math.pi) ** self.two_pi_power

    def derivative(self) -> "PiScaledPoly":
        return PiScaledPoly(self.poly.diff_x(), self.two_pi_power)

    def coefficient(self, p: int) -> tuple[Fraction, int]:
        """Coefficient of x^p as (rational part, power of 2*pi)."""
        return self.poly.coefficient(0, p), self.two_pi_power

    @property
    def degree(self) -> int:
        return self.poly.degree_x
