"""q-arithmetic for the symmetric Tamm-Dancoff oscillator.

Floating brackets and factorials, plus exact integer machinery (restricted
partition counts, Gaussian binomials, Laurent polynomials) used to build the
closed-form distributions without any 0/0 at ``q = 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import DomainError, ImaginaryResidue

__all__ = [
    "DeformationParameter",
    "Real",
    "Phase",
    "LaurentPoly",
    "as_real",
    "std_bracket",
    "bm_bracket",
    "std_factorial",
    "partition_count",
    "gaussian_binomial",
    "product_expansion",
]

IMAG_RTOL = 1e-9
INT64_MAX = 2**63 - 1


def as_real(z: complex, what: str = "value") -> float:
    """Return ``z.real`` after checking the imaginary part is rounding noise."""
    z = complex(z)
    if abs(z.imag) > IMAG_RTOL * (1.0 + abs(z.real)):
        raise ImaginaryResidue(f"{what} has imaginary residue {z.imag!r} (real part {z.real!r})")
    return z.real


@dataclass(frozen=True)
class DeformationParameter:
    """Deformation parameter ``q``: real positive, or on the unit circle.

    Internally everything is evaluated through the complex logarithm
    ``log_q`` (``ln q`` or ``i*theta``), so that :meth:`inverse` is an exact
    negation and ``q <-> 1/q`` symmetric formulas stay bitwise symmetric.
    """

    kind: str
    value: float
    log_q: complex = field(default=0j, compare=False, repr=False)

    def __post_init__(self):
        value = float(self.value)
        object.__setattr__(self, "value", value)
        if self.kind == "real":
            if not (value > 0.0 and math.isfinite(value)):
                raise DomainError(f"real deformation parameter must be positive and finite, got {value!r}")
            if self.log_q == 0j:
                object.__setattr__(self, "log_q", complex(math.log(value), 0.0))
        elif self.kind == "phase":
            if not (math.isfinite(value) and abs(value) <= math.pi):
                raise DomainError(f"phase must lie in [-pi, pi], got {value!r}")
            object.__setattr__(self, "log_q", complex(0.0, value))
        else:
            raise DomainError(f"unknown deformation kind {self.kind!r}")

    @classmethod
    def real(cls, q: float) -> "DeformationParameter":
        return cls("real", q)

    @classmethod
    def phase(cls, theta: float) -> "DeformationParameter":
        return cls("phase", theta)

    @property
    def is_phase(self) -> bool:
        return self.kind == "phase"

    @property
    def is_classical(self) -> bool:
        return self.log_q == 0j

    def as_complex(self) -> complex:
        if self.kind == "real":
            return complex(self.value, 0.0)
        return cmath.exp(self.log_q)

    def power(self, m: int) -> complex:
        """``q**m`` evaluated as ``exp(m * log q)``."""
        return cmath.exp(m * self.log_q)

    def inverse(self) -> "DeformationParameter":
        if self.kind == "real":
            return DeformationParameter("real", 1.0 / self.value, -self.log_q)
        return DeformationParameter("phase", -self.value)

    def __str__(self) -> str:
        if self.kind == "real":
            return f"q={self.value!r}"
        return f"theta={self.value!r}"


def Real(q: float) -> DeformationParameter:
    """Shorthand for ``DeformationParameter.real(q)``."""
    return DeformationParameter.real(q)


def Phase(theta: float) -> DeformationParameter:
    """Shorthand for ``DeformationParameter.phase(theta)``."""
    return DeformationParameter.phase(theta)


class LaurentPoly:
    """Laurent polynomial in one variable with exact integer coefficients.

    Stored canonically: a mapping ``exponent -> coefficient`` with no zero
    coefficients. Instances are immutable and hashable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            if int(c) != c or int(e) != e:
                raise TypeError("LaurentPoly needs integer exponents and coefficients")
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self._terms.items())

    def coeff(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> int | None:
        return next(iter(self._terms), None)

    def max_degree(self) -> int | None:
        return next(reversed(self._terms), None) if self._terms else None

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return LaurentPoly(list(self.items()) + list(other.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        acc: dict[int, int] = {}
        for e1, c1 in self.items():
            for e2, c2 in other.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def shift(self, m: int) -> "LaurentPoly":
        """Multiply by ``q**m``."""
        return LaurentPoly({e + m: c for e, c in self.items()})

    def scale_exponents(self, factor: int) -> "LaurentPoly":
        """Substitute ``q -> q**factor`` (e.g. ``factor=2`` turns ``b`` into ``q**2``)."""
        return LaurentPoly({e * factor: c for e, c in self.items()})

    def at_one(self) -> int:
        """Exact value at ``q = 1``."""
        return sum(self._terms.values())

    def evaluate(self, dp, offset: complex = 0j) -> complex:
        """Evaluate at ``q`` (a :class:`DeformationParameter` or a number).

        ``offset`` is added to every exponent's log before exponentiating,
        i.e. the result is ``exp(offset) * P(q)`` without overflowing
        intermediates.
        """
        if isinstance(dp, DeformationParameter):
            log_q = dp.log_q
        else:
            log_q = cmath.log(complex(dp))
        re, im = [], []
        for e, c in self.items():
            t = c * cmath.exp(e * log_q + offset)
            re.append(t.real)
            im.append(t.imag)
        return complex(math.fsum(re), math.fsum(im))

    def evaluate_abs(self, dp) -> float:
        """``sum_e |c_e| |q|^e``: the value with every cancellation removed."""
        log_abs = dp.log_q.real if isinstance(dp, DeformationParameter) else math.log(abs(complex(dp)))
        return math.fsum(abs(c) * math.exp(e * log_abs) for e, c in self.items())

    def __repr__(self):
        if not self._terms:
            return "LaurentPoly(0)"
        parts = []
        for e, c in self.items():
            if e == 0:
                parts.append(f"{c}")
            elif e == 1:
                parts.append(f"{c}*q")
            else:
                parts.append(f"{c}*q^{e}")
        return "LaurentPoly(" + " + ".join(parts) + ")"


def _check_n(n: int, name: str = "n") -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def std_bracket(n: int, dp: DeformationParameter) -> float:
    """STD q-number ``{n}_q = (n/2) (q**(n-1) + q**(1-n))``.

    Parameters
    ----------
    n : int
        Occupation number, ``n >= 0``.
    dp : DeformationParameter
        Deformation parameter.

    Returns
    -------
    float
        The bracket; for a phase ``q = exp(i theta)`` this is
        ``n cos((n-1) theta)``.
    """
    n = _check_n(n)
    h = (n - 1) * dp.log_q
    z = 0.5 * n * (cmath.exp(h) + cmath.exp(-h))
    return as_real(z, f"{{{n}}}_q")


def bm_bracket(n: int, dp: DeformationParameter) -> float:
    """Biedenharn-Macfarlane bracket ``[n]_q = (q**n - q**-n) / (q - 1/q)``.

    The removable singularities at ``q = 1`` and ``q = -1`` (phase ``+-pi``)
    are returned as their limits ``n`` and ``(-1)**(n-1) n``.
    """
    n = _check_n(n)
    if dp.is_classical:
        return float(n)
    if dp.is_phase and abs(dp.value) == math.pi:
        return float(n if n % 2 else -n)
    z = cmath.sinh(n * dp.log_q) / cmath.sinh(dp.log_q)
    return as_real(z, f"[{n}]_q")


def std_factorial(r: int, dp: DeformationParameter) -> float:
    """``{r}_q! = {1}_q {2}_q ... {r}_q``; the empty product is 1."""
    r = _check_n(r, "r")
    out = 1.0
    for k in range(1, r + 1):
        out *= std_bracket(k, dp)
    return out


@lru_cache(maxsize=None)
def _partitions(k: int, r: int, s: int) -> int:
    # either the largest allowed part r is used or it is not
    if k == 0:
        return 1 if s == 0 else 0
    if k > r or s < k * (k + 1) // 2 or s > (2 * r - k + 1) * k // 2:
        return 0
    total = _partitions(k, r - 1, s) + _partitions(k - 1, r - 1, s - r)
    if total > INT64_MAX:
        raise OverflowError(f"p({k},{r},{s}) exceeds 64-bit range")
    return total


def partition_count(k: int, r: int, s: int) -> int:
    """Number of ways to write ``s`` as a sum of ``k`` distinct parts from ``1..r``.

    Out-of-range arguments (negative, ``k > r``, ``s`` outside the attainable
    window) give 0; ``p(0, r, 0) = 1``.
    """
    if min(k, r, s) < 0:
        return 0
    return _partitions(int(k), int(r), int(s))


@lru_cache(maxsize=None)
def gaussian_binomial(r: int, k: int) -> LaurentPoly:
    """Gaussian binomial ``(r choose k)_b`` as an exact polynomial in ``b``.

    Built with the recurrence
    ``(r, k)_b = (r-1, k-1)_b + b**k (r-1, k)_b``; evaluate at ``b = q**2``
    via ``gaussian_binomial(r, k).scale_exponents(2)``.
    """
    if int(r) != r or int(k) != k or k < 0 or k > r:
        raise DomainError(f"gaussian_binomial needs 0 <= k <= r, got r={r!r}, k={k!r}")
    if k == 0 or k == r:
        return LaurentPoly.one()
    return gaussian_binomial(r - 1, k - 1) + gaussian_binomial(r - 1, k).shift(k)


def product_expansion(r: int) -> list[tuple[int, LaurentPoly]]:
    """Coefficients of ``prod_{j=1}^r (1 + (q^2)^(j-N))`` in powers of ``(q^2)^(-N)``.

    Returns ``[(k, P_k), ...]`` for ``k = 0..r`` where
    ``P_k(q) = sum_s p(k, r, s) q^(2s)``.
    """
    if int(r) != r or r < 1:
        raise DomainError(f"product_expansion needs r >= 1, got {r!r}")
    out = []
    for k in range(r + 1):
        lo = k * (k + 1) // 2
        hi = (2 * r - k + 1) * k // 2
        out.append((k, LaurentPoly({2 * s: partition_count(k, r, s) for s in range(lo, hi + 1)})))
    return out
