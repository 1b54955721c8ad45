"""Verlinde numbers of a once-punctured genus-g surface, three ways, and the polynomial family P_{g,m}."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from ._config import extended_precision, precision_bits
from .exact_core import BivariatePoly, PiScaledPoly, parity_split
from .xi_transform import pm

__all__ = [
    "IntegrityError",
    "admissible",
    "admissibility_tensor",
    "s_entry",
    "verlinde_number",
    "verlinde_vector",
    "fusion_count_oracle",
    "counting_via_pm",
    "genus_constant",
    "VerlindeFamily",
    "build_family",
    "family_count",
    "volume_vg",
    "volume_vg_derivative",
]

ROUNDING_THRESHOLD = 1e-6
EXTENDED_LEVEL = 10_000
FLOAT_SAFE = 2.0 ** 30  # beyond this the float spacing approaches the 1e-6 rounding test


class IntegrityError(ArithmeticError):
    """A numerical or exact integrity check failed."""


def _check_args(g: int, k: int, ell: int | None = None) -> None:
    if g < 1:
        raise ValueError(f"genus must be >= 1, got {g}")
    if k < 2:
        raise ValueError(f"level must be >= 2, got {k}")
    if ell is not None and not 1 <= ell <= k - 1:
        raise ValueError(f"color must lie in 1..{k - 1}, got {ell}")


def admissible(a: int, b: int, c: int, k: int) -> bool:
    return (a + b + c) % 2 == 1 and abs(a - b) < c < a + b and a + b + c <= 2 * k - 1


def admissibility_tensor(k: int) -> np.ndarray:
    """adm[a-1, b-1, c-1] = 1 when (a, b, c) is admissible at level k."""
    col = np.arange(1, k)
    a, b, c = np.meshgrid(col, col, col, indexing="ij")
    ok = ((a + b + c) % 2 == 1) & (np.abs(a - b) < c) & (c < a + b) & (a + b + c <= 2 * k - 1)
    return ok.astype(np.int64)


def s_entry(m: int, p: int, k: int) -> float:
    if not (1 <= m <= k - 1 and 1 <= p <= k - 1):
        raise ValueError(f"indices ({m}, {p}) out of range 1..{k - 1}")
    return math.sqrt(2 / k) * math.sin(math.pi * m * p / k)


def _verlinde_float(g: int, k: int) -> np.ndarray:
    m = np.arange(1, k)
    s1 = np.sqrt(2 / k) * np.sin(np.pi * m / k)
    kernel = np.sqrt(2 / k) * np.sin(np.pi * np.outer(m, m) / k)
    return kernel @ (s1 ** (1 - 2 * g))


def _verlinde_mp(g: int, k: int, bits: int) -> tuple[list[int], list[float]]:
    import mpmath

    with mpmath.workprec(bits):
        norm = mpmath.sqrt(mpmath.mpf(2) / k)
        weights = [(norm * mpmath.sinpi(mpmath.mpf(m) / k)) ** (1 - 2 * g) for m in range(1, k)]
        ints, resid = [], []
        for ell in range(1, k):
            acc = mpmath.mpf(0)
            for m, w in enumerate(weights, start=1):
                acc += w * norm * mpmath.sinpi(mpmath.mpf(m * ell) / k)
            nearest = int(mpmath.nint(acc))
            ints.append(nearest)
            resid.append(float(abs(acc - nearest)))
    return ints, resid


def verlinde_vector(g: int, k: int) -> np.ndarray:
    """(N_1, ..., N_{k-1}) as Python ints in an object array, from the Verlinde sum."""
    _check_args(g, k)
    ints = None
    raw = _verlinde_float(g, k)
    magnitude = float(np.max(np.abs(raw)))
    if not (extended_precision() or k > EXTENDED_LEVEL or magnitude >= FLOAT_SAFE):
        rounded = np.rint(raw)
        if np.max(np.abs(raw - rounded)) < ROUNDING_THRESHOLD:
            ints, resid = [int(v) for v in rounded], list(np.abs(raw - rounded))
    if ints is None:
        # large counts outgrow double precision (beyond 2^53 every float is an integer,
        # so the rounding test says nothing); redo the sum with room for the integer part
        bits = max(precision_bits(), 192, int(math.log2(max(magnitude, 1.0))) + 96)
        ints, resid = _verlinde_mp(g, k, bits)
    for ell, r in enumerate(resid, start=1):
        if r >= ROUNDING_THRESHOLD:
            raise IntegrityError(f"Verlinde sum for g={g}, k={k}, l={ell} misses an integer by {r:.3g}")
    out = np.array(ints, dtype=object)
    out[1::2] = 0
    return out


def verlinde_number(g: int, k: int, ell: int) -> int:
    """N^{g,k}_l = sum_m S_{m,1}^{1-2g} S_{m,l}, rounded after an integrity check."""
    _check_args(g, k, ell)
    if ell % 2 == 0:
        return 0
    return int(verlinde_vector(g, k)[ell - 1])


def _chain_einsum_spec(g: int) -> tuple[list, list[str]]:
    """Edges of the fixed trivalent graph: g one-holed tori hung from a spine, leg on the first vertex.

    Torus piece i: a loop edge a_i closing on itself through the vertex (a_i, a_i, t_i).
    Spine: (leg, t_1, s_1), (s_1, t_2, s_2), ..., (s_{g-2}, t_{g-1}, t_g).
    """
    letters = iter("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKMNOPQRSTUVWXYZ")
    loops = [next(letters) for _ in range(g)]
    stems = [next(letters) for _ in range(g)]
    spine = [next(letters) for _ in range(max(g - 2, 0))]
    verts = [(loops[i], loops[i], stems[i]) for i in range(g)]
    if g >= 2:
        chain = ["L"] + spine + [stems[-1]]
        for i in range(g - 1):
            verts.append((chain[i], stems[i], chain[i + 1]))
    return verts, loops + stems + spine


def fusion_count_oracle(g: int, k: int, ell: int, brute: bool = False) -> int:
    """Count admissible colorings of the fixed pants graph with the leg colored ``ell``.

    The count is a sum over all colorings of a product of 0/1 admissibility indicators.
    By default the sum is evaluated as a tensor contraction (same terms, grouped);
    ``brute=True`` walks every coloring explicitly and is only sensible for tiny cases.
    """
    _check_args(g, k, ell)
    if g == 1:
        return sum(1 for a in range(1, k) if admissible(a, a, ell, k))
    verts, edges = _chain_einsum_spec(g)
    if brute:
        colors = range(1, k)
        total = 0
        for assignment in product(colors, repeat=len(edges)):
            col = dict(zip(edges, assignment))
            col["L"] = ell
            if all(admissible(col[u], col[v], col[w], k) for u, v, w in verts):
                total += 1
        return total
    adm = admissibility_tensor(k)
    diag = np.einsum("aat->at", adm)
    operands, subs = [], []
    for u, v, w in verts:
        if u == v:
            operands.append(diag)
            subs.append(u + w)
        elif u == "L":
            operands.append(adm[ell - 1])
            subs.append(v + w)
        else:
            operands.append(adm)
            subs.append(u + v + w)
    expr = ",".join(subs) + "->"
    return int(np.einsum(expr, *operands, optimize="greedy"))


def genus_constant(g: int) -> Fraction:
    """C_g = (-1)^{g-1} 2^{-g}."""
    return Fraction((-1) ** (g - 1), 2 ** g)


def counting_via_pm(g: int, k: int, ell: int) -> int:
    """2 C_g k^{g-1} P_{2g-1}(k, l/k), evaluated exactly."""
    _check_args(g, k, ell)
    if ell % 2 == 0:
        raise ValueError("counting_via_pm needs an odd color")
    value = 2 * genus_constant(g) * Fraction(k) ** (g - 1) * pm(2 * g - 1).evaluate(k, Fraction(ell, k))
    if value.denominator != 1:
        raise IntegrityError(f"polynomial count for g={g}, k={k}, l={ell} is {value}, not an integer")
    return int(value)


@dataclass(frozen=True)
class VerlindeFamily:
    g: int
    polys: tuple[PiScaledPoly, ...]
    lambdas: tuple[tuple[Fraction, int], ...]

    def degree(self, m: int) -> int:
        return self.polys[m].degree

    def lam(self, m: int) -> float:
        rational, power = self.lambdas[m]
        return float(rational) * (2 * math.pi) ** power


_family_memo: dict[int, VerlindeFamily] = {}
_family_lock = threading.Lock()


def build_family(g: int) -> VerlindeFamily:
    """P_{g,m}(x) = 2 C_g (2 pi)^{3g-2} A_{2g-1-2m}(x), A_q the k^q block of P_{2g-1}."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if g in _family_memo:
        return _family_memo[g]
    big = pm(2 * g - 1)
    pref = 2 * genus_constant(g)
    power = 3 * g - 2
    polys, lambdas = [], []
    for m in range(g):
        block = big.k_coefficient(2 * g - 1 - 2 * m) * pref
        fam = PiScaledPoly(block, power)
        expected_deg = 2 * (g - m) - 1
        if fam.degree != expected_deg:
            raise IntegrityError(f"deg P_{{{g},{m}}} = {fam.degree}, expected {expected_deg}")
        even, _ = parity_split(block)
        if len(even) != 1 or even.coefficient(0, 2 * (g - m - 1)) == 0:
            raise IntegrityError(f"even part of P_{{{g},{m}}} is not a single monomial x^{2 * (g - m - 1)}: {even}")
        polys.append(fam)
        lambdas.append((even.coefficient(0, 2 * (g - m - 1)), power))
    lead = pref / math.factorial(2 * (g - 1))
    if lambdas[0][0] != lead:
        raise IntegrityError(f"lambda_{{{g},0}} = {lambdas[0][0]} (2pi)^{power}, expected {lead} (2pi)^{power}")
    fam = VerlindeFamily(g, tuple(polys), tuple(lambdas))
    with _family_lock:
        _family_memo.setdefault(g, fam)
    return _family_memo[g]


def family_count(g: int, k: int, ell: int) -> Fraction:
    """(k/2pi)^{3g-2} sum_m k^{-2m} P_{g,m}(l/k); the powers of 2pi cancel exactly."""
    fam = build_family(g)
    x = Fraction(ell, k)
    total = Fraction(0)
    for m, poly in enumerate(fam.polys):
        if poly.two_pi_power != 3 * g - 2:
            raise IntegrityError("unexpected power of 2pi in the family")
        total += Fraction(k) ** (-2 * m) * poly.poly.evaluate(0, x)
    return Fraction(k) ** (3 * g - 2) * total


def volume_vg(g: int, t: float) -> float:
    """v_g(t) = P_{g,0}(t) for 0 < t < 1."""
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    return build_family(g).polys[0].evaluate(t)


def volume_vg_derivative(g: int, t: float) -> float:
    """v_g'(t), allowed on the closed interval [0, 1]."""
    if not 0 <= t <= 1:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return build_family(g).polys[0].derivative().evaluate(t)
