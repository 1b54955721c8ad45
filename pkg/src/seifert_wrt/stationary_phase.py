"""Half-line quadratic-phase sums and their singular stationary-phase expansions.

S_k(f) = f(0)/2 + sum_{l >= 1} s^l exp(i (alpha l^2 / 2k - beta l)) f(l/k), s = +1 or -1.
The stationary point of the quadratic phase sits at the end of the summation range, which
mixes a k^{1/2 - n} ladder (even amplitudes) with a k^{-n} ladder (odd amplitudes).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import hermite_e
from sklearn.base import BaseEstimator

from ._config import precision_bits
from .exact_core import bernoulli

__all__ = [
    "TestAmplitude",
    "OscSumSpec",
    "LeadingPrediction",
    "ExpansionReport",
    "bump_monomial",
    "gaussian_amplitude",
    "eval_sum",
    "predict_leading",
    "verify_expansion",
    "richardson",
    "StationaryPhaseVerifier",
    "summation_by_parts_residual",
    "sum_part_residual",
]


def _smooth_step_np(t: np.ndarray) -> np.ndarray:
    # C-infinity step: 0 for t <= 0, 1 for t >= 1
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[t >= 1] = 1.0
    mid = (t > 0) & (t < 1)
    a = np.exp(-1.0 / t[mid])
    b = np.exp(-1.0 / (1.0 - t[mid]))
    out[mid] = a / (a + b)
    return out


def _smooth_step_mp(t):
    import mpmath

    if t <= 0:
        return mpmath.mpf(0)
    if t >= 1:
        return mpmath.mpf(1)
    a = mpmath.exp(-1 / t)
    b = mpmath.exp(-1 / (1 - t))
    return a / (a + b)


@dataclass(frozen=True)
class TestAmplitude:
    """A compactly supported amplitude with a declared jet at the origin.

    parity 'even': f(x) = lam x^{2n} + ...; parity 'odd': f(x) = lam x^{2n+1} + ...
    """

    func: Callable[[np.ndarray], np.ndarray]
    support_bound: float
    parity: str
    order: int
    lam: complex = 1.0
    mp_func: Callable | None = field(default=None, compare=False)

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.order < 0:
            raise ValueError("jet order must be non-negative")

    @property
    def vanishing_order(self) -> int:
        return 2 * self.order + (self.parity == "odd")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.func(x), dtype=complex)
        return np.where(x < self.support_bound, out, 0.0)

    def check_jet(self, tol: float = 1e-6) -> bool:
        """Probe f(h)/h^N at small h against lam, and f beyond the support."""
        n = self.vanishing_order
        hs = np.array([1e-5, 2e-5, 4e-5])
        ratios = self(hs) / hs ** n
        if np.max(np.abs(ratios - self.lam)) > tol * max(1.0, abs(self.lam)):
            return False
        beyond = self(np.array([self.support_bound, self.support_bound * 1.5]))
        return bool(np.all(beyond == 0))


def bump_monomial(parity: str, n: int, lam: complex = 1.0, support: float = 3.0, plateau: float = 0.25,
                  envelope: str = "gaussian") -> TestAmplitude:
    """lam x^{2n} rho(x) or lam x^{2n+1} rho(x), rho = 1 on [0, plateau*support], 0 past support.

    The default gaussian envelope multiplies in exp(-x^2) (same leading jet, much smaller
    cutoff remainder); "narrow" uses exp(-(10x/support)^2), so the cutoff sits far below
    double precision and the amplitude is effectively entire; "plateau" drops the envelope.
    """
    if envelope not in ("gaussian", "narrow", "plateau"):
        raise ValueError(f"unknown envelope {envelope!r}")
    power = 2 * n + (parity == "odd")
    r1 = plateau * support
    width = support - r1
    scale = {"gaussian": 1.0, "narrow": 10.0 / support, "plateau": 0.0}[envelope]

    def func(x):
        rho = 1.0 - _smooth_step_np((x - r1) / width)
        return lam * x ** power * rho * np.exp(-(scale * x) ** 2)

    def mp_func(x):
        import mpmath

        rho = 1 - _smooth_step_mp((x - r1) / width)
        return lam * x ** power * rho * mpmath.exp(-(scale * x) ** 2)

    amp = TestAmplitude(func, support, parity, n, lam, mp_func)
    if not amp.check_jet():
        raise ValueError("declared jet does not match the amplitude")
    return amp


def gaussian_amplitude(center: float, width: float):
    """exp(-(x-c)^2 / 2w^2) with exact derivatives; returns (f, derivative(order))."""

    def deriv(order: int):
        coef = np.zeros(order + 1)
        coef[order] = 1.0

        def d(x):
            t = (np.asarray(x, dtype=float) - center) / width
            return (-1.0 / width) ** order * hermite_e.hermeval(t, coef) * np.exp(-0.5 * t * t)

        return d

    return deriv(0), deriv


@dataclass(frozen=True)
class OscSumSpec:
    alpha: float
    beta: float = 0.0
    sign: str = "plus"

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if self.sign not in ("plus", "minus"):
            raise ValueError(f"sign must be 'plus' or 'minus', got {self.sign!r}")


def _terms(spec: OscSumSpec, k: float, count: int) -> np.ndarray:
    ell = np.arange(count, dtype=float)
    phase = spec.alpha * (ell * ell) / (2.0 * k) - spec.beta * ell
    if spec.sign == "minus":
        phase = phase + math.pi * (np.arange(count) % 2)
    w = np.exp(1j * np.mod(phase, 2 * math.pi))
    w[0] *= 0.5
    return w


def eval_sum(spec: OscSumSpec, f: Callable, k: float, support: float | None = None, bits: int | None = None) -> complex:
    """The finite sum S_k(f); ``support`` defaults to f.support_bound.

    ``bits`` (or SEIFERT_WRT_PRECISION above 64) switches to mpmath, which requires f.mp_func.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    bound = support if support is not None else getattr(f, "support_bound")
    count = int(math.floor(bound * k)) + 1
    bits = bits if bits is not None else precision_bits()
    if bits > 64:
        return _eval_sum_mp(spec, f, k, count, bits)
    x = np.arange(count) / float(k)
    return complex(np.sum(_terms(spec, k, count) * f(x)))


def _eval_sum_mp(spec: OscSumSpec, f, k, count, bits) -> complex:
    import mpmath

    fn = getattr(f, "mp_func", None)
    if fn is None:
        raise ValueError("extended precision needs an amplitude with mp_func")
    with mpmath.workprec(bits):
        alpha = mpmath.mpf(spec.alpha)
        beta = mpmath.mpf(spec.beta)
        kk = mpmath.mpf(k)
        acc = fn(mpmath.mpf(0)) / 2
        for ell in range(1, count):
            ph = alpha * ell * ell / (2 * kk) - beta * ell
            term = mpmath.expj(ph) * fn(ell / kk)
            if spec.sign == "minus" and ell % 2:
                term = -term
            acc += term
        return complex(acc)


@dataclass(frozen=True)
class LeadingPrediction:
    exponent: float  # -inf for rapid decay
    c0: complex | None
    case: str
    reference_c0: complex | None = None  # reported, never asserted

    @property
    def rapid_decay(self) -> bool:
        return self.exponent == -math.inf


def predict_leading(spec: OscSumSpec, parity: str, n: int, lam: complex = 1.0) -> LeadingPrediction:
    """Leading exponent and coefficient of S_k for the jet lam x^{2n} (even) or lam x^{2n+1} (odd)."""
    if parity not in ("even", "odd") or n < 0:
        raise ValueError(f"bad jet ({parity!r}, {n})")
    alpha = spec.alpha
    order = 2 * n + (parity == "odd")
    if spec.beta != 0:
        return LeadingPrediction(-float(order), None, "off-stationary")
    if spec.sign == "plus":
        if parity == "even":
            pref = math.sqrt(math.pi / (2 * abs(alpha))) * cmath.exp(1j * math.pi * math.copysign(1, alpha) / 4)
            c0 = pref * (1j / (2 * alpha)) ** n * math.factorial(2 * n) / math.factorial(n) * lam
            return LeadingPrediction(0.5 - n, complex(c0), "plus-even")
        c0 = (2j / alpha) ** (n + 1) * math.factorial(n) / 2 * lam
        return LeadingPrediction(-float(n), complex(c0), "plus-odd")
    if parity == "even":
        return LeadingPrediction(-math.inf, None, "minus-even")
    # alternating Euler-Maclaurin (Boole) term: the phase only enters at higher order
    c0 = (1 - Fraction(2) ** (2 * n + 2)) * bernoulli(2 * n + 2) / (2 * n + 2)
    return LeadingPrediction(-float(order), None, "minus-odd", complex(float(c0) * lam))


def richardson(values: Sequence[complex], ratio: float, order: int) -> tuple[complex, complex]:
    """Eliminate 1/k, ..., 1/k^order from T(k_j), k_{j+1} = ratio*k_j; returns (estimate, previous estimate)."""
    table = [np.asarray(values, dtype=complex)]
    for p in range(1, order + 1):
        prev = table[-1]
        if len(prev) < 2:
            break
        fac = ratio ** p
        table.append((fac * prev[1:] - prev[:-1]) / (fac - 1))
    last = table[-1]
    before = table[-2] if len(table) > 1 else last
    return complex(last[-1]), complex(before[-1])


@dataclass
class ExpansionReport:
    ks: np.ndarray
    values: np.ndarray
    prediction: LeadingPrediction
    measured_exponent: float
    measured_c0: complex | None
    c0_uncertainty: float | None
    measured_c1: complex | None
    exponent_tolerance: float = 0.02
    c0_tolerance: float = 0.01
    decay_threshold: float = 1e-6
    decay_from: float = 1e3

    @property
    def exponent_deviation(self) -> float:
        if self.prediction.rapid_decay:
            return math.nan
        return abs(self.measured_exponent - self.prediction.exponent)

    @property
    def c0_relative_deviation(self) -> float | None:
        if self.prediction.c0 is None or self.measured_c0 is None:
            return None
        return abs(abs(self.measured_c0) - abs(self.prediction.c0)) / abs(self.prediction.c0)

    @property
    def max_tail_modulus(self) -> float:
        mask = self.ks >= self.decay_from
        return float(np.max(np.abs(self.values[mask]))) if np.any(mask) else math.inf

    @property
    def passed(self) -> bool:
        if self.prediction.rapid_decay:
            return self.max_tail_modulus < self.decay_threshold
        ok = self.exponent_deviation <= self.exponent_tolerance
        dev = self.c0_relative_deviation
        if dev is not None:
            ok = ok and dev <= self.c0_tolerance
        return bool(ok)

    def as_dict(self) -> dict:
        def cx(z):
            return None if z is None else [z.real, z.imag]

        return {
            "case": self.prediction.case,
            "predicted_exponent": None if self.prediction.rapid_decay else self.prediction.exponent,
            "measured_exponent": self.measured_exponent,
            "predicted_c0": cx(self.prediction.c0),
            "reference_c0": cx(self.prediction.reference_c0),
            "measured_c0": cx(self.measured_c0),
            "c0_relative_deviation": self.c0_relative_deviation,
            "measured_c1": cx(self.measured_c1),
            "max_tail_modulus": self.max_tail_modulus if self.prediction.rapid_decay else None,
            "passed": self.passed,
        }


TAIL_FRACTION = 1 / 3


def _tail_slope(ks: np.ndarray, values: np.ndarray) -> float:
    count = max(3, int(math.ceil(len(ks) * TAIL_FRACTION)))
    lk = np.log(ks[-count:])
    lv = np.log(np.abs(values[-count:]))
    slope, _ = np.polyfit(lk, lv, 1)
    return float(slope)


def verify_expansion(spec: OscSumSpec, f: TestAmplitude, k_list: Sequence[float],
                     prediction: LeadingPrediction | None = None, bits: int | None = None,
                     richardson_order: int = 3) -> ExpansionReport:
    """Measure the leading exponent (tail log-log slope) and c0 (Richardson on S_k / k^e)."""
    ks = np.asarray(k_list, dtype=float)
    if len(ks) < 6 or np.any(np.diff(ks) <= 0):
        raise ValueError("need at least 6 increasing k values")
    if prediction is None:
        prediction = predict_leading(spec, f.parity, f.order, f.lam)
    values = np.array([eval_sum(spec, f, k, bits=bits) for k in ks])
    if prediction.rapid_decay:
        return ExpansionReport(ks, values, prediction, -math.inf, None, None, None)
    slope = _tail_slope(ks, values)
    exponent = prediction.exponent if math.isfinite(prediction.exponent) else round(2 * slope) / 2
    c0 = c1 = unc = None
    ratios = ks[1:] / ks[:-1]
    if np.allclose(ratios, ratios[0]):
        scaled = values / ks ** exponent
        c0, before = richardson(scaled[-(richardson_order + 2):], float(ratios[0]), richardson_order)
        unc = abs(c0 - before)
        c1, _ = richardson((ks * (scaled - c0))[-(richardson_order + 1):], float(ratios[0]), richardson_order - 1)
    return ExpansionReport(ks, values, prediction, slope, c0, unc, c1)


class StationaryPhaseVerifier(BaseEstimator):
    """Estimator wrapper: fit(k_values) measures the expansion, predict(k) evaluates the leading term."""

    def __init__(self, alpha=1.0, parity="even", n=0, sign="plus", lam=1.0, support_fraction=0.9,
                 richardson_order=3, bits=None):
        self.alpha = alpha
        self.parity = parity
        self.n = n
        self.sign = sign
        self.lam = lam
        self.support_fraction = support_fraction
        self.richardson_order = richardson_order
        self.bits = bits

    def _amplitude(self) -> TestAmplitude:
        period = (2 * math.pi if self.sign == "plus" else math.pi) / abs(self.alpha)
        envelope = "gaussian" if self.sign == "plus" else "narrow"
        return bump_monomial(self.parity, self.n, self.lam, support=self.support_fraction * period,
                             envelope=envelope)

    def _bits(self):
        if self.bits is not None:
            return self.bits
        # the k^{-(2n+1)} decay of the alternating odd case drops below double precision
        return 113 if (self.sign, self.parity) == ("minus", "odd") else None

    def fit(self, X, y=None):
        ks = np.asarray(X, dtype=float).ravel()
        spec = OscSumSpec(self.alpha, 0.0, self.sign)
        self.spec_ = spec
        self.amplitude_ = self._amplitude()
        self.report_ = verify_expansion(spec, self.amplitude_, ks, bits=self._bits(),
                                        richardson_order=self.richardson_order)
        return self

    def predict(self, X):
        pred = self.report_.prediction
        ks = np.asarray(X, dtype=float).ravel()
        if pred.rapid_decay or pred.c0 is None:
            return np.zeros_like(ks, dtype=complex)
        return pred.c0 * ks ** pred.exponent

    def score(self, X, y=None):
        return float(self.report_.passed)


def summation_by_parts_residual(spec: OscSumSpec, tau: float, center: float = 1.0, width: float = 0.15,
                                terms: int = 8) -> complex:
    """Residual of St(sigma(delta-1)) + St(delta(e^D-1)sigma) + sigma(0), e^D truncated after ``terms`` orders.

    St is the sum from l = 0 without the half weight; sigma is a narrow Gaussian.
    """
    sigma, deriv = gaussian_amplitude(center, width)
    reach = center + 40 * width
    count = int(math.ceil(reach * tau)) + 1
    ell = np.arange(count, dtype=float)
    x = ell / tau
    g = np.exp(1j * np.mod(spec.alpha * ell * ell / (2 * tau) - spec.beta * ell, 2 * math.pi))
    delta = np.exp(1j * (spec.alpha * x - spec.beta) + 1j * spec.alpha / (2 * tau))
    shift = sum(deriv(j)(x) * tau ** (-j) / math.factorial(j) for j in range(1, terms + 1))
    first = np.sum(g * sigma(x) * (delta - 1))
    second = np.sum(g * delta * shift)
    return complex(first + second + sigma(np.array([0.0]))[0])


def sum_part_residual(alpha: float, tau: float, center: float = 0.3, width: float = 0.15, terms: int = 8) -> complex:
    """Residual of S(sin(alpha.) sigma) - i sigma(0)/2 - i e^{-i alpha/2tau} (S(sinh(D) sigma) + cosh(D)sigma(0)/2)."""
    sigma, deriv = gaussian_amplitude(center, width)
    reach = center + 40 * width
    count = int(math.ceil(reach * tau)) + 1
    spec = OscSumSpec(alpha)
    w = _terms(spec, tau, count)
    x = np.arange(count) / tau
    lhs = np.sum(w * np.sin(alpha * x) * sigma(x))
    sinh_part = sum(deriv(j)(x) * tau ** (-j) / math.factorial(j) for j in range(1, terms + 1, 2))
    cosh_at0 = sum(deriv(j)(np.array([0.0]))[0] * tau ** (-j) / math.factorial(j) for j in range(0, terms + 1, 2))
    s0 = sigma(np.array([0.0]))[0]
    rhs = 0.5j * s0 + 1j * cmath.exp(-1j * alpha / (2 * tau)) * (np.sum(w * sinh_part) + 0.5 * cosh_at0)
    return complex(lhs - rhs)
