"""Brute-force reference values by direct summation over Fock states.

Nothing here uses the closed forms of :mod:`stdqbose.model`: thermal
averages are formed term by term from the structure function, and the
oscillator algebra is checked on explicit truncated matrices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _series
from .errors import DomainError, NonConvergent, ZeroDenominator
from .model import _mode
from .qkernel import DeformationParameter, as_real, partition_count

__all__ = [
    "StructureFunction",
    "STD",
    "BiedenharnMacfarlane",
    "Classical",
    "SeriesConfig",
    "thermal_average",
    "phi_falling_product",
    "oracle_dist_r",
    "oracle_intercept_r",
    "fock_algebra_check",
    "direct_product",
    "expanded_product",
]


class StructureFunction:
    """A deformed-oscillator structure function ``n -> phi(n)``, with ``phi(0) = 0``.

    Subclasses implement :meth:`__call__`. Overriding :meth:`values` gives a
    vectorised path; returning a ``(kind, log_q)`` pair from
    :meth:`kernel_spec` routes sums through the compiled series kernel.
    """

    def __call__(self, n: int) -> complex:
        raise NotImplementedError

    def values(self, n: np.ndarray) -> np.ndarray:
        return np.fromiter((complex(self(int(k))) for k in n), dtype=np.complex128, count=len(n))

    def kernel_spec(self) -> tuple[int, complex] | None:
        return None


class Classical(StructureFunction):
    """Undeformed boson, ``phi(n) = n``."""

    def __call__(self, n):
        return complex(n) if n > 0 else 0j

    def kernel_spec(self):
        return _series.KIND_CLASSICAL, 0j

    def __repr__(self):
        return "Classical()"


@dataclass(frozen=True)
class STD(StructureFunction):
    """Symmetric Tamm-Dancoff ``phi(n) = (n/2)(q^(n-1) + q^(1-n))``."""

    dp: DeformationParameter

    def __call__(self, n):
        if n <= 0:
            return 0j
        h = (n - 1) * self.dp.log_q
        return 0.5 * n * (cmath.exp(h) + cmath.exp(-h))

    def kernel_spec(self):
        return _series.KIND_STD, self.dp.log_q


@dataclass(frozen=True)
class BiedenharnMacfarlane(StructureFunction):
    """``phi(n) = (q^n - q^-n) / (q - q^-1)``, with the limit ``n`` at ``q = 1``."""

    dp: DeformationParameter

    def __call__(self, n):
        if n <= 0:
            return 0j
        L = self.dp.log_q
        if L == 0:
            return complex(n)
        if self.dp.is_phase and abs(self.dp.value) == math.pi:
            return complex(n if n % 2 else -n)
        return cmath.sinh(n * L) / cmath.sinh(L)

    def kernel_spec(self):
        if self.dp.is_phase and abs(self.dp.value) == math.pi:
            return None
        return _series.KIND_BM, self.dp.log_q


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if self.max_terms < 10:
            raise ValueError(f"max_terms must be at least 10, got {self.max_terms!r}")


DEFAULT_CONFIG = SeriesConfig()


def _finish(total: complex, n_terms: int, status: int, x: float, what: str) -> complex:
    if status == _series.STATUS_MAX_TERMS:
        raise NonConvergent(f"{what}: tail bound not met after {n_terms} terms at x={x!r}")
    if status == _series.STATUS_OVERFLOW:
        raise NonConvergent(f"{what}: terms overflowed at n={n_terms}, x={x!r} (divergent sum)")
    return -math.expm1(-x) * total


def thermal_average(f: Callable[[int], complex], mode, cfg: SeriesConfig = DEFAULT_CONFIG) -> complex:
    """``(1 - e^-x) sum_n f(n) e^{-nx}``, truncated by a geometric tail bound.

    ``f`` may be any callable on nonnegative integers; objects with a
    ``values(n_array)`` method are evaluated a chunk at a time.
    """
    x = _mode(mode).x
    values = f.values if hasattr(f, "values") else (
        lambda n: np.fromiter((complex(f(int(k))) for k in n), dtype=np.complex128, count=len(n))
    )
    total, n_terms, status = _series.sum_series_numpy(values, x, cfg.rel_tol, cfg.max_terms)
    return _finish(total, n_terms, status, x, "thermal_average")


def phi_falling_product(f: StructureFunction, n: int, r: int) -> complex:
    """``phi(n) phi(n-1) ... phi(n-r+1)``, zero when ``n < r``."""
    if n < r:
        return 0j
    out = 1 + 0j
    for m in range(n - r + 1, n + 1):
        out *= f(m)
    return out


class _FallingProduct:
    def __init__(self, f: StructureFunction, r: int):
        self.f, self.r = f, r

    def __call__(self, n):
        return phi_falling_product(self.f, n, self.r)

    def values(self, n):
        fv = self.f.values(np.arange(0, int(n[-1]) + 1, dtype=np.int64))
        out = np.ones(len(n), dtype=np.complex128)
        for j in range(self.r):
            idx = n - j
            out *= np.where(idx > 0, fv[np.clip(idx, 0, None)], 0j)
        return out


def oracle_dist_r(f: StructureFunction, mode, r: int, cfg: SeriesConfig = DEFAULT_CONFIG, backend: str | None = None) -> float:
    """Reference ``<(a^dag)^r a^r>`` summed state by state.

    Built-in structure functions go through the compiled series kernel
    (``backend`` overrides the process default); anything else through
    :func:`thermal_average`.
    """
    x = _mode(mode).x
    if int(r) != r or r < 1:
        raise DomainError(f"order r must be a positive integer, got {r!r}")
    spec = f.kernel_spec()
    if spec is None:
        value = thermal_average(_FallingProduct(f, int(r)), x, cfg)
    else:
        kind, log_q = spec
        total, n_terms, status = _series.falling_series(kind, log_q, int(r), x, cfg.rel_tol, cfg.max_terms, backend)
        value = _finish(total, n_terms, status, x, f"oracle_dist_r(r={r})")
    return as_real(value, f"oracle <(a^dag)^{r} a^{r}>")


def oracle_intercept_r(f: StructureFunction, mode, r: int, cfg: SeriesConfig = DEFAULT_CONFIG, backend: str | None = None) -> float:
    mean = oracle_dist_r(f, mode, 1, cfg, backend)
    if mean == 0.0:
        raise ZeroDenominator(f"oracle <a^dag a> is zero at x={_mode(mode).x!r}")
    return oracle_dist_r(f, mode, r, cfg, backend) / mean**r - 1.0


def fock_algebra_check(dp: DeformationParameter, n_max: int) -> float:
    """Largest residual of the deformed oscillator relations on ``|0>..|n_max-1>``.

    Ladder matrices are built from ``a|n> = sqrt({n}_q)|n-1>`` and
    ``a^dag|n> = sqrt({n+1}_q)|n+1>`` (principal complex square roots, so a
    negative bracket on the unit circle is fine) in an ``n_max + 1``
    dimensional space. The commutator is compared against
    ``(1 + (1 - 1/q) N) q^N / 2 + (1 + (1 - q) N) q^-N / 2``.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max!r}")
    dim = n_max + 1
    phi = STD(dp)
    roots = np.array([cmath.sqrt(phi(n)) for n in range(1, dim)], dtype=np.complex128)
    a = np.diag(roots, 1)
    ad = np.diag(roots, -1)
    n = np.arange(dim)
    N = np.diag(n.astype(np.complex128))
    qn = np.exp(n * dp.log_q)
    q = dp.as_complex()
    rhs = np.diag(0.5 * (1 + (1 - 1 / q) * n) * qn + 0.5 * (1 + (1 - q) * n) / qn)

    keep = slice(0, n_max)  # the top state sees the truncation
    residuals = [
        a @ ad - ad @ a - rhs,
        N @ ad - ad @ N - ad,
        N @ a - a @ N + a,
    ]
    return max(float(np.abs(m[:, keep]).max()) for m in residuals)


def direct_product(dp: DeformationParameter, n: int, r: int) -> complex:
    """``prod_{j=1}^r (q^(n-j) + q^(j-n))`` multiplied out numerically."""
    out = 1 + 0j
    for j in range(1, r + 1):
        out *= dp.power(n - j) + dp.power(j - n)
    return out


def expanded_product(dp: DeformationParameter, n: int, r: int) -> complex:
    """The same product via its restricted-partition expansion.

    ``q^(rn - r(r+1)/2) sum_k (q^2)^(-kn) sum_s p(k, r, s) q^(2s)``.
    """
    lead = r * n - r * (r + 1) // 2
    out = 0j
    for k in range(r + 1):
        for s in range(k * (k + 1) // 2, (2 * r - k + 1) * k // 2 + 1):
            c = partition_count(k, r, s)
            if c:
                out += c * dp.power(lead - 2 * k * n + 2 * s)
    return out
