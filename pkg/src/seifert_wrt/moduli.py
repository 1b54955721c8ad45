"""Components of the character variety of the Seifert manifold, their Chern-Simons phases and
the predicted leading data of the asymptotic expansion of Z_k.

Points of the torus character variety are written y = p*mu + q*lam with (p, q) taken mod Z^2.
The curve B is the image of r -> r*nu, nu = a*mu + b*lam, r in [0, 1/2]. The surface side A is
the union of the mu-line, the lam-line and the line mu/2 + R*lam.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .tqft_states import canonical_cd
from .verlinde import build_family, volume_vg, volume_vg_derivative

__all__ = [
    "SeifertData",
    "Component",
    "PredictedExpansion",
    "enumerate_components",
    "chern_simons",
    "cs_phase_fraction",
    "predicted_expansion",
    "brute_force_component_count",
    "OMEGA_MU_LAMBDA",
]

# symplectic pairing of the two lattice generators
OMEGA_MU_LAMBDA = Fraction(4)  # in units of pi


@dataclass(frozen=True)
class SeifertData:
    g: int
    a: int
    b: int
    c: int = field(default=None)
    d: int = field(default=None)

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("genus must be >= 1")
        if self.a == 0 or self.b < 1:
            raise ValueError("need a != 0 and b >= 1")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"gcd({self.a}, {self.b}) must be 1")
        if self.c is None or self.d is None:
            c, d = canonical_cd(self.a, self.b)
            object.__setattr__(self, "c", c)
            object.__setattr__(self, "d", d)
        if self.a * self.c + self.b * self.d != 1:
            raise ValueError("need ac + bd = 1")


@dataclass(frozen=True)
class Component:
    label: str  # X1 .. X4
    r: Fraction
    angle_p: float
    angle_q: float
    cs_phase: float
    exponent_n: Fraction
    a0: complex
    exponent_m: Fraction | None = None
    b0: complex | None = None
    a0_alternatives: tuple[complex, ...] = ()
    point: str = ""  # p1..p4 for half-lattice points

    @property
    def has_b_ladder(self) -> bool:
        return self.exponent_m is not None


def _folded(t: Fraction) -> float:
    # arccos(cos(2 pi t)) computed without round-off at the special values
    frac = t - math.floor(t)
    if frac > Fraction(1, 2):
        frac = 1 - frac
    return float(2 * math.pi * frac) if frac not in (0, Fraction(1, 2)) else (0.0 if frac == 0 else math.pi)


def _omega(u: tuple[Fraction, Fraction], v: tuple[Fraction, Fraction]) -> Fraction:
    """omega(u, v) in units of pi."""
    return OMEGA_MU_LAMBDA * (u[0] * v[1] - u[1] * v[0])


def cs_phase_fraction(s: SeifertData, r: Fraction) -> Fraction:
    """Chern-Simons phase of the point [r nu] as a rational multiple of pi, in [0, 2).

    Heisenberg convention (x, u).(y, v) = (x + y, u v exp(i omega(x, y)/2)) with omega(mu, lam) = 4 pi;
    a flat section transported along a straight segment from y0 in direction v picks up
    exp(i omega(y0, v)/2). Theta_B is transported from the origin along r nu (trivially);
    Theta_A along the mu-line, the lam-line, or to mu/2 and then along lam. The lift r nu of the
    B-point is moved onto A by a lattice vector and the pairing Theta_A conj(Theta_B) read off.
    """
    yb = (r * s.a, r * s.b)
    p, q = yb
    if q.denominator == 1:
        ya, ua = (p, Fraction(0)), Fraction(0)
    elif p.denominator == 1:
        ya, ua = (Fraction(0), q), Fraction(0)
    elif (2 * p).denominator == 1:
        # origin -> mu/2 costs nothing, then along lam by q: exp(i omega(mu/2, q lam)/2)
        ya = (Fraction(1, 2), q)
        ua = _omega((Fraction(1, 2), Fraction(0)), (Fraction(0), q)) / 2
    else:
        raise ValueError(f"point r = {r} of B does not lie on A")
    shift = (yb[0] - ya[0], yb[1] - ya[1])
    if shift[0].denominator != 1 or shift[1].denominator != 1:
        raise AssertionError("lifts do not differ by a lattice vector")
    # (ya + l, u) ~ (ya, u exp(-i omega(l, ya)/2)); Theta_B equals 1 at yb
    ub_at_ya = -_omega(shift, ya) / 2
    phase = ua - ub_at_ya
    return phase % 2


def chern_simons(s: SeifertData, x: Component) -> float:
    return float(cs_phase_fraction(s, x.r)) * math.pi


@dataclass(frozen=True)
class PredictedExpansion:
    seifert: SeifertData
    components: tuple[Component, ...]
    normalization: str = "k_over_2pi"

    def a_scale(self, k: float, n) -> float:
        return (k / (2 * math.pi)) ** float(n) if self.normalization == "k_over_2pi" else float(k) ** float(n)

    def model(self, k: float) -> complex:
        total = 0j
        for x in self.components:
            total += cmath.exp(1j * k * x.cs_phase) * self.a_scale(k, x.exponent_n) * x.a0
            if x.has_b_ladder:
                total += float(k) ** float(x.exponent_m) * x.b0
        return total

    def __call__(self, k: float) -> complex:
        return self.model(k)

    def by_label(self, label: str) -> list[Component]:
        return [x for x in self.components if x.label == label]

    @property
    def max_exponent(self) -> Fraction:
        return max(x.exponent_n for x in self.components)


def _half_points(s: SeifertData) -> list[tuple[str, Fraction, str]]:
    out = [("X3", Fraction(0), "p1")]
    half = Fraction(1, 2)
    if s.b % 2 == 0:
        out.append(("X3", half, "p2"))
    elif s.a % 2 == 0:
        out.append(("X4", half, "p3"))
    else:
        out.append(("X4", half, "p4"))
    return out


def _sqrt_abs(a: int) -> float:
    # meaning of sqrt(a) for a < 0 is unspecified; the modulus is used and the phase left to the fit
    return math.sqrt(abs(a))


def enumerate_components(s: SeifertData, with_amplitudes: bool = True) -> list[Component]:
    g, a, b = s.g, s.a, s.b
    comps: list[Component] = []
    fam_ok = with_amplitudes and g >= 1
    for j in range(1, (b - 1) // 2 + 1):
        r = Fraction(j, b)
        ap = _folded(r * a)
        a0 = 0j
        if fam_ok:
            a0 = 2 * math.pi ** (g - 0.5) / math.sqrt(b) * math.sin(ap) ** (1 - 2 * g) * math.sin(s.c * ap)
        comps.append(Component("X1", r, ap, _folded(r * b), 0.0, Fraction(2 * g - 1, 2), complex(a0)))
    for j in range(1, abs(a)):
        r = Fraction(j, 2 * abs(a))
        aq = _folded(r * b)
        a0 = 0j
        if fam_ok:
            a0 = volume_vg(g, aq / math.pi) * math.sin(s.d * aq) / _sqrt_abs(a)
        comps.append(Component("X2", r, _folded(r * a), aq, 0.0, Fraction(3 * g - 2), complex(a0)))
    for label, r, point in _half_points(s):
        ap, aq = _folded(r * a), _folded(r * b)
        n = Fraction(3 * g - 3)
        if label == "X3":
            base = volume_vg_derivative(g, 0.0) / (4 * math.pi * _sqrt_abs(a) ** 3) if fam_ok else 0.0
            b0 = 0j
            if fam_ok:
                b0 = (cmath.exp(1j * math.pi / 4) * 1j ** g * b ** (g - 1.5) * _sqrt_abs(a) ** (-2 * g)
                      * (1 if a > 0 or g % 2 == 0 else -1)
                      * math.pi ** (1 - g) * math.sqrt(2) * math.factorial(g - 1) / math.factorial(2 * (g - 1)))
            comps.append(Component(label, r, ap, aq, 0.0, n, complex(base), Fraction(4 * g - 3, 2), complex(b0),
                                   (complex(base), complex(1j * base)), point))
        else:
            base = volume_vg_derivative(g, 1.0) / (4 * math.pi * _sqrt_abs(a) ** 3) if fam_ok else 0.0
            comps.append(Component(label, r, ap, aq, 0.0, n, complex(base), point=point))
    # phases come from the transport computation, never from closed forms
    return [
        Component(x.label, x.r, x.angle_p, x.angle_q, float(cs_phase_fraction(s, x.r)) * math.pi, x.exponent_n,
                  x.a0, x.exponent_m, x.b0, x.a0_alternatives, x.point)
        for x in comps
    ]


def predicted_expansion(s: SeifertData, normalization: str = "k_over_2pi") -> PredictedExpansion:
    """Leading exponents and coefficients per component.

    ``normalization`` selects (k/2pi)^n (``k_over_2pi``, as in the component-wise statements)
    or plain k^n (``plain``) for the integer-exponent ladders. The half-integer ladder of X3
    always uses plain k^m.
    """
    if normalization not in ("k_over_2pi", "plain"):
        raise ValueError(f"unknown normalization {normalization!r}")
    build_family(s.g)
    return PredictedExpansion(s, tuple(enumerate_components(s)), normalization)


def brute_force_component_count(s: SeifertData) -> int:
    """Count r in [0, 1/2] with r*b or 2*r*a integral, scanning denominators up to 2|a|b."""
    seen = set()
    top = 2 * abs(s.a) * s.b
    for den in range(1, top + 1):
        for num in range(0, den // 2 + 1):
            r = Fraction(num, den)
            if (r * s.b).denominator == 1 or (2 * r * s.a).denominator == 1:
                seen.add(r)
    return len(seen)
