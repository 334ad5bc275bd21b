"""Closed-form single-mode observables of the STD q-deformed Bose gas.

Every formula is evaluated in complex arithmetic (a real ``q`` is just a
complex number with zero phase) and the result is checked to be real.
The thermal input is ``x = beta * hbar * omega`` of one momentum mode.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, ZeroDenominator
from .qkernel import DeformationParameter, as_real, gaussian_binomial, std_factorial

__all__ = [
    "HBAR",
    "MAX_ORDER",
    "ModeState",
    "DomainReason",
    "DomainReport",
    "domain_check",
    "mean_occupation",
    "dist_r",
    "dist_r_scale",
    "dist_2",
    "dist_3",
    "dist_4",
    "intercept_r",
    "intercept_r_displayed",
    "intercept_2",
    "intercept_3",
    "intercept_4",
    "intercept_asymptotic",
    "classical_limit_dist",
    "occupation_zero_locus",
]

HBAR = 1.054571817e-34  # J s, CODATA 2018 (exact since the SI redefinition)
MAX_ORDER = 64
NEAR_POLE_MARGIN = 1e-6
ZERO_MEAN_RTOL = 1e-14


@dataclass(frozen=True)
class ModeState:
    """Thermal state of one mode, ``x = beta * hbar * omega > 0``."""

    x: float

    def __post_init__(self):
        x = float(self.x)
        if not (x > 0.0) or math.isnan(x):
            raise DomainError(f"x = beta*hbar*omega must be positive, got {x!r}")
        object.__setattr__(self, "x", x)

    @classmethod
    def from_thermal(cls, beta: float, omega: float, hbar: float = HBAR) -> "ModeState":
        """Build from inverse temperature ``beta`` (1/J) and angular frequency ``omega`` (1/s)."""
        return cls(beta * hbar * omega)


def _mode(mode) -> ModeState:
    return mode if isinstance(mode, ModeState) else ModeState(mode)


def _order(r) -> int:
    if int(r) != r or not 1 <= r <= MAX_ORDER:
        raise DomainError(f"order r must be an integer in [1, {MAX_ORDER}], got {r!r}")
    return int(r)


class DomainReason(str, Enum):
    OK = "ok"
    NEAR_POLE = "near_pole"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class DomainReport:
    valid: bool
    margin: float
    reason: DomainReason


def domain_check(dp: DeformationParameter, mode, r: int) -> DomainReport:
    """Check that every geometric sum ``sum_n (q^m e^-x)^n``, ``|m| <= r``, converges.

    ``margin`` is ``1 - e^-x max(q, 1/q)^r`` for real ``q`` and ``1 - e^-x``
    on the unit circle; the point is valid iff the margin is positive.
    """
    x = _mode(mode).x
    r = _order(r)
    if dp.is_phase:
        margin = -math.expm1(-x)
    else:
        margin = -math.expm1(r * abs(dp.log_q.real) - x)
    if margin <= 0.0:
        reason = DomainReason.DIVERGENT
    elif margin < NEAR_POLE_MARGIN:
        reason = DomainReason.NEAR_POLE
    else:
        reason = DomainReason.OK
    return DomainReport(margin > 0.0, margin, reason)


def _require(dp, mode, r) -> float:
    rep = domain_check(dp, mode, r)
    if not rep.valid:
        raise DomainError(
            f"thermal sums diverge for {dp}, x={_mode(mode).x!r}, r={r}: need x > r|ln q| (margin {rep.margin:.3g})"
        )
    return _mode(mode).x


def _one_minus_exp(z: complex) -> complex:
    """``1 - exp(z)`` without cancellation when ``z`` is near 0."""
    a, b = z.real, z.imag
    if b == 0.0:
        return complex(-math.expm1(a), 0.0)
    s = math.sin(0.5 * b)
    em1 = math.expm1(a) * math.cos(b) - 2.0 * s * s
    return complex(-em1, -math.exp(a) * math.sin(b))


def _pole_factor(dp: DeformationParameter, m: int, x: float) -> complex:
    """``1 - q^m e^-x``."""
    return _one_minus_exp(m * dp.log_q - x)


def _occupation_parts(dp: DeformationParameter, x: float) -> tuple[complex, float]:
    # returns (value, no-cancellation magnitude scale)
    pre = 0.5 * math.exp(-x) * -math.expm1(-x)
    a = _pole_factor(dp, 1, x) ** -2
    b = _pole_factor(dp, -1, x) ** -2
    return pre * (a + b), pre * (abs(a) + abs(b))


def mean_occupation(dp: DeformationParameter, mode) -> float:
    """Thermal average ``<a^dag a> = <{N}_q>`` for one mode."""
    x = _require(dp, mode, 1)
    value, _ = _occupation_parts(dp, x)
    return as_real(value, "<a^dag a>")


def _dist_terms(dp: DeformationParameter, x: float, r: int) -> tuple[complex, float]:
    # (value, no-cancellation magnitude) of the Gaussian-binomial closed form
    half_tri = r * (r + 1) // 2
    pre = math.factorial(r) / 2.0**r * -math.expm1(-x)
    coeffs = [
        gaussian_binomial(r, k).scale_exponents(2).shift(k * (k + 1) - half_tri + (r - 2 * k) * r)
        for k in range(r + 1)
    ]
    poles = [_pole_factor(dp, r - 2 * k, x) ** (r + 1) for k in range(r + 1)]
    magnitude = math.fsum(c.evaluate_abs(dp) / abs(p) for c, p in zip(coeffs, poles))
    if math.isfinite(magnitude):
        offset, damp = 0j, math.exp(-r * x)
    else:
        # huge q-powers: fold e^{-rx} into every exponent instead
        offset, damp = complex(-r * x, 0.0), 1.0
        magnitude = math.fsum(abs(t) for t in (c.evaluate(abs(dp.as_complex()), offset) / abs(p) for c, p in zip(coeffs, poles)))
    terms = [c.evaluate(dp, offset=offset) / p for c, p in zip(coeffs, poles)]
    total = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    return pre * damp * total, pre * damp * magnitude


def dist_r(dp: DeformationParameter, mode, r: int) -> float:
    """r-particle distribution ``<(a^dag)^r a^r>`` from the Gaussian-binomial closed form.

    Parameters
    ----------
    dp : DeformationParameter
    mode : ModeState or float
        Mode state or bare ``x``.
    r : int
        Order, ``1 <= r <= 64``.
    """
    r = _order(r)
    x = _require(dp, mode, r)
    value, _ = _dist_terms(dp, x, r)
    if not cmath.isfinite(value):
        raise OverflowError(f"<(a^dag)^{r} a^{r}> overflowed at {dp}, x={x!r}")
    return as_real(value, f"<(a^dag)^{r} a^{r}>")


def dist_r_scale(dp: DeformationParameter, mode, r: int) -> float:
    """:func:`dist_r` with every monomial of the closed form replaced by its modulus.

    Equals ``|dist_r|`` for real ``q``; on the unit circle the ratio
    ``dist_r_scale / |dist_r|`` is the cancellation (condition) factor of the sum.
    """
    r = _order(r)
    x = _require(dp, mode, r)
    return _dist_terms(dp, x, r)[1]


def dist_2(dp: DeformationParameter, mode) -> float:
    x = _require(dp, mode, 2)
    q = dp.as_complex()
    e = math.exp(-x)
    bracket = q / (1 - q**2 * e) ** 3 + q**-1 / (1 - q**-2 * e) ** 3 + (q + q**-1) / (1 - e) ** 3
    return as_real(0.5 * e**2 * (1 - e) * bracket, "<(a^dag)^2 a^2>")


def dist_3(dp: DeformationParameter, mode) -> float:
    x = _require(dp, mode, 3)
    q = dp.as_complex()
    e = math.exp(-x)
    bracket = (
        q**3 / (1 - q**3 * e) ** 4
        + q**-3 / (1 - q**-3 * e) ** 4
        + q**3 * (1 + q**-2 + q**-4) / (1 - q * e) ** 4
        + q**-3 * (1 + q**2 + q**4) / (1 - q**-1 * e) ** 4
    )
    return as_real(0.75 * e**3 * (1 - e) * bracket, "<(a^dag)^3 a^3>")


def _dist_4_bracket(q: complex, e: float) -> complex:
    return (
        q**6 / (1 - q**4 * e) ** 5
        + (1 + q**2 + q**4 + q**6) / (1 - q**2 * e) ** 5
        + (q**-4 + q**-2 + 2 + q**2 + q**4) / (1 - e) ** 5
        + (1 + q**-2 + q**-4 + q**-6) / (1 - q**-2 * e) ** 5
        + q**-6 / (1 - q**-4 * e) ** 5
    )


def dist_4(dp: DeformationParameter, mode) -> float:
    x = _require(dp, mode, 4)
    q = dp.as_complex()
    e = math.exp(-x)
    return as_real(1.5 * (1 - e) * e**4 * _dist_4_bracket(q, e), "<(a^dag)^4 a^4>")


def _checked_mean(dp: DeformationParameter, x: float) -> float:
    value, scale = _occupation_parts(dp, x)
    mean = as_real(value, "<a^dag a>")
    if abs(mean) < ZERO_MEAN_RTOL * scale:
        raise ZeroDenominator(f"<a^dag a> vanishes at {dp}, x={x!r}")
    return mean


def intercept_r(dp: DeformationParameter, mode, r: int) -> float:
    """Correlation intercept ``<(a^dag)^r a^r> / <a^dag a>^r - 1``.

    Raises
    ------
    ZeroDenominator
        If the mean occupation is zero to rounding (possible for phase ``q``).
    """
    r = _order(r)
    x = _require(dp, mode, r)
    mean = _checked_mean(dp, x)
    if r == 1:
        return 0.0
    value = dist_r(dp, x, r) / mean**r - 1.0
    if __debug__:
        alt = intercept_r_displayed(dp, x, r)
        assert abs(alt - value) <= 1e-8 * (1.0 + abs(value)), (value, alt)
    return value


def intercept_r_displayed(dp: DeformationParameter, mode, r: int) -> float:
    """The intercept written as a single ratio, without forming the two averages separately."""
    r = _order(r)
    x = _require(dp, mode, r)
    _checked_mean(dp, x)
    terms = []
    for k in range(r + 1):
        coeff = gaussian_binomial(r, k).scale_exponents(2).shift((k - r) * (k - r + 1))
        terms.append(coeff.evaluate(dp) / _pole_factor(dp, r - 2 * k, x) ** (r + 1))
    num = math.factorial(r) * dp.power(-r * (r - 1) // 2) * sum(terms)
    occ = _pole_factor(dp, 1, x) ** -2 + _pole_factor(dp, -1, x) ** -2
    den = (-math.expm1(-x)) ** (r - 1) * occ**r
    return as_real(num / den, f"lambda^({r})") - 1.0


def _explicit_intercept(bracket: complex, prefactor: float, r: int, q: complex, e: float, dp, x) -> float:
    _checked_mean(dp, x)
    occ = (1 - q * e) ** -2 + (1 - q**-1 * e) ** -2
    return as_real(prefactor * bracket / ((1 - e) ** (r - 1) * occ**r), f"lambda^({r})") - 1.0


def intercept_2(dp: DeformationParameter, mode) -> float:
    x = _require(dp, mode, 2)
    q = dp.as_complex()
    e = math.exp(-x)
    bracket = q / (1 - q**2 * e) ** 3 + q**-1 / (1 - q**-2 * e) ** 3 + (q + q**-1) / (1 - e) ** 3
    return _explicit_intercept(bracket, 2.0, 2, q, e, dp, x)


def intercept_3(dp: DeformationParameter, mode) -> float:
    x = _require(dp, mode, 3)
    q = dp.as_complex()
    e = math.exp(-x)
    bracket = (
        q**3 / (1 - q**3 * e) ** 4
        + q**-3 / (1 - q**-3 * e) ** 4
        + q**3 * (1 + q**-2 + q**-4) / (1 - q * e) ** 4
        + q**-3 * (1 + q**2 + q**4) / (1 - q**-1 * e) ** 4
    )
    return _explicit_intercept(bracket, 6.0, 3, q, e, dp, x)


def intercept_4(dp: DeformationParameter, mode) -> float:
    x = _require(dp, mode, 4)
    q = dp.as_complex()
    e = math.exp(-x)
    return _explicit_intercept(_dist_4_bracket(q, e), 24.0, 4, q, e, dp, x)


def intercept_asymptotic(dp: DeformationParameter, r: int) -> float:
    """Large-``x`` limit of the r-th intercept, ``{r}_q! - 1``; depends on ``q`` and ``r`` only."""
    return std_factorial(_order(r), dp) - 1.0


def classical_limit_dist(mode, r: int) -> float:
    """Ideal Bose gas ``<(a^dag)^r a^r> = r! e^{-rx} / (1 - e^{-x})^r``."""
    x = _mode(mode).x
    r = _order(r)
    return math.factorial(r) * math.exp(-r * x) / (-math.expm1(-x)) ** r


def occupation_zero_locus(theta: float) -> float | None:
    """The ``x`` at which ``<a^dag a>`` vanishes for ``q = exp(i theta)``, if any.

    The occupation is proportional to ``Re (1 - e^{i theta - x})^-2``, which
    is zero exactly when ``e^{-x} (sin|theta| + cos theta) = 1``. A root with
    ``x > 0`` exists only for ``0 < |theta| < pi/2``.
    """
    s = math.sin(abs(theta)) + math.cos(theta)
    if s <= 1.0:
        return None
    return math.log(s)
