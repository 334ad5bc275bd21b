"""Self-verification suites: every closed form against its independent counterpart.

Each family scans a grid, records the worst residual and where it occurred,
and passes iff that residual is under the family tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import model, oracle
from .qkernel import (
    DeformationParameter,
    Phase,
    Real,
    bm_bracket,
    gaussian_binomial,
    partition_count,
    product_expansion,
    std_bracket,
    std_factorial,
)

__all__ = ["FamilyResult", "VerifyReport", "run_verify", "PRESETS"]


@dataclass
class FamilyResult:
    name: str
    tolerance: float
    worst: float = 0.0
    point: str = ""
    checks: int = 0
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.checks > 0 and self.worst < self.tolerance

    def record(self, residual: float, point: str) -> None:
        self.checks += 1
        if not residual <= self.worst:  # NaN must surface as the worst case
            self.worst = residual
            self.point = point


@dataclass
class VerifyReport:
    preset: str
    families: list[FamilyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    def lines(self) -> list[str]:
        out = []
        for f in self.families:
            tag = "PASS" if f.passed else "FAIL"
            out.append(
                f"{tag} {f.name:<16} worst={f.worst:.3e} tol={f.tolerance:.0e} "
                f"checks={f.checks} ({f.seconds:.2f}s) at {f.point or '-'}"
            )
        out.append(f"{'PASS' if self.passed else 'FAIL'} overall ({self.preset})")
        return out


def rel_err(a: float, b: float) -> float:
    if b == 0.0:
        return abs(a)
    return abs(a - b) / abs(b)


def scaled_err(a: float, b: float, scale: float) -> float:
    """``|a - b|`` relative to ``max(|b|, scale)``.

    ``scale`` is the no-cancellation magnitude of the quantity, so for real
    ``q`` (where ``scale == |b|``) this is the plain relative error.
    """
    return abs(a - b) / max(abs(b), scale)


def _where(dp, x=None, r=None, **extra) -> str:
    parts = [str(dp)]
    if x is not None:
        parts.append(f"x={x:.6g}")
    if r is not None:
        parts.append(f"r={r}")
    parts.extend(f"{k}={v}" for k, v in extra.items())
    return ", ".join(parts)


@dataclass(frozen=True)
class Grid:
    real_q: tuple[float, ...]
    thetas: tuple[float, ...]
    n_x: int
    orders: tuple[int, ...]
    n_max: int
    max_r_identity: int


PRESETS = {
    "quick": Grid((0.7, 0.9, 1.2, 1.4), (0.2, 0.7, math.pi / 3), 4, (1, 2, 3, 4, 5), 12, 8),
    "full": Grid(
        tuple(np.round(np.linspace(0.7, 1.4, 8), 10)) + (0.5, 2.0),
        (0.2, 0.7, math.pi / 3, 1.0, 1.5, 2.0, 2.5, 3.0, -0.4),
        10,
        (1, 2, 3, 4, 5),
        12,
        12,
    ),
}


def _deformations(grid: Grid) -> list[DeformationParameter]:
    return [Real(q) for q in grid.real_q] + [Phase(t) for t in grid.thetas]


def _x_values(dp, r, n, x_hi=6.0):
    lo = r * abs(dp.log_q.real) + 0.5 if not dp.is_phase else 0.2
    return [float(v) for v in np.linspace(lo, x_hi, n)]


def _limit(grid: Grid) -> FamilyResult:
    fam = FamilyResult("limit", 1e-12)
    q1 = Real(1.0)
    for r in range(1, 7):
        for x in (0.1, 0.5, 1.0, 2.0, 5.0):
            fam.record(rel_err(model.dist_r(q1, x, r), model.classical_limit_dist(x, r)), _where(q1, x, r))
            fam.record(rel_err(model.intercept_r(q1, x, r), math.factorial(r) - 1.0), _where(q1, x, r, what="intercept"))
    return fam


def _asymptotic(grid: Grid) -> FamilyResult:
    fam = FamilyResult("asymptotic", 1e-10)
    dps = [Real(0.5), Real(0.8), Real(1.25), Real(2.0), Phase(0.3), Phase(math.pi / 4)]
    for dp in dps:
        for r in (2, 3, 4, 5):
            fam.record(abs(model.intercept_r(dp, 40.0, r) - (std_factorial(r, dp) - 1.0)), _where(dp, 40.0, r))
    return fam


def _oracle(grid: Grid) -> FamilyResult:
    fam = FamilyResult("oracle", 1e-9)
    cfg = oracle.SeriesConfig(rel_tol=1e-12)
    for dp in _deformations(grid):
        if not dp.is_phase and not 0.7 <= dp.value <= 1.4:
            continue
        f = oracle.STD(dp)
        for r in grid.orders:
            for x in _x_values(dp, r, grid.n_x):
                ref = oracle.oracle_dist_r(f, x, r, cfg)
                scale = model.dist_r_scale(dp, x, r)
                fam.record(scaled_err(model.dist_r(dp, x, r), ref, scale), _where(dp, x, r))
                if r == 1:
                    fam.record(scaled_err(model.mean_occupation(dp, x), ref, scale), _where(dp, x, r, what="mean"))
                if r in (2, 3, 4):
                    fam.record(scaled_err(getattr(model, f"dist_{r}")(dp, x), ref, scale),
                               _where(dp, x, r, what=f"dist_{r}"))
    return fam


def _specialization(grid: Grid) -> FamilyResult:
    fam = FamilyResult("specialization", 1e-12)
    for dp in _deformations(grid):
        for r in (2, 3, 4):
            explicit = getattr(model, f"dist_{r}")
            for x in _x_values(dp, r, grid.n_x):
                ref = model.dist_r(dp, x, r)
                fam.record(scaled_err(explicit(dp, x), ref, model.dist_r_scale(dp, x, r)), _where(dp, x, r))
    return fam


def _intercept_condition(dp, x, r) -> float:
    # first-order condition number of dist_r / mean**r
    dist = model.dist_r(dp, x, r)
    mean = model.mean_occupation(dp, x)
    k_dist = model.dist_r_scale(dp, x, r) / abs(dist) if dist else math.inf
    k_mean = model.dist_r_scale(dp, x, 1) / abs(mean)
    return k_dist + r * k_mean


def _intercept_forms(grid: Grid) -> FamilyResult:
    # lambda + 1 is the computed ratio, so errors are measured against 1 + |lambda|,
    # inflated by the cancellation factor of the two sums on the unit circle
    fam = FamilyResult("intercept_forms", 1e-12)
    for dp in _deformations(grid):
        for r in grid.orders:
            if r == 1:
                continue
            for x in _x_values(dp, r, grid.n_x):
                lam = model.intercept_r(dp, x, r)
                alt = [model.intercept_r_displayed(dp, x, r)]
                if r in (2, 3, 4):
                    alt.append(getattr(model, f"intercept_{r}")(dp, x))
                scale = (1.0 + abs(lam)) * (_intercept_condition(dp, x, r) / (r + 1) if dp.is_phase else 1.0)
                for a in alt:
                    fam.record(abs(a - lam) / scale, _where(dp, x, r))
    return fam


def _symmetry(grid: Grid) -> FamilyResult:
    fam = FamilyResult("symmetry", 1e-12)
    for dp in _deformations(grid):
        inv = dp.inverse()
        for n in range(21):
            a, b = std_bracket(n, dp), std_bracket(n, inv)
            fam.record(abs(a - b) / max(abs(a), 1.0), _where(dp, what=f"bracket n={n}"))
        for r in grid.orders:
            for x in _x_values(dp, r, grid.n_x):
                fam.record(rel_err(model.dist_r(inv, x, r), model.dist_r(dp, x, r)), _where(dp, x, r))
                fam.record(rel_err(model.intercept_r(inv, x, r), model.intercept_r(dp, x, r)),
                           _where(dp, x, r, what="intercept"))
    return fam


def _bracket_scale(n: int, dp: DeformationParameter) -> float:
    return 0.5 * n * (abs(dp.power(n - 1)) + abs(dp.power(1 - n)))


def _identity(grid: Grid) -> FamilyResult:
    fam = FamilyResult("identity", 1e-12)
    for r in range(1, grid.max_r_identity + 1):
        for k, poly in product_expansion(r):
            target = gaussian_binomial(r, k).scale_exponents(2).shift(k * (k + 1))
            fam.record(0.0 if poly == target else math.inf, f"product_expansion r={r}, k={k}")
            total = sum(partition_count(k, r, s) for s in range(r * (r + 1) // 2 + 1))
            fam.record(0.0 if total == comb(r, k) else math.inf, f"partition sum r={r}, k={k}")
            fam.record(0.0 if gaussian_binomial(r, k).at_one() == comb(r, k) else math.inf, f"binomial at 1 r={r}, k={k}")
    for dp in _deformations(grid) + [Real(1.0)]:
        for n in range(1, 21):
            v = std_bracket(n, dp)
            scale = _bracket_scale(n, dp)
            lower = -1.0 if n == 1 else bm_bracket(n - 2, dp)  # [-1] = -[1]
            fam.record(abs(n * (bm_bracket(n, dp) - lower) / 2 - v) / scale, _where(dp, what=f"hybrid-difference n={n}"))
            if n >= 2:
                den = bm_bracket(n - 1, dp)
                if abs(den) > 1e-9 * (n - 1):
                    fam.record(abs(n * bm_bracket(2 * (n - 1), dp) / (2 * den) - v) / scale,
                               _where(dp, what=f"hybrid-ratio n={n}"))
        for r in range(1, 7):
            for n in range(31):
                direct = oracle.direct_product(dp, n, r)
                scale = math.prod(abs(dp.power(n - j)) + abs(dp.power(j - n)) for j in range(1, r + 1))
                fam.record(abs(oracle.expanded_product(dp, n, r) - direct) / scale, _where(dp, r=r, what=f"expansion n={n}"))
    return fam


def _algebra(grid: Grid) -> FamilyResult:
    fam = FamilyResult("algebra", 1e-11)
    for dp in [Real(0.5), Real(1.0), Real(2.0), Phase(math.pi / 6), Phase(math.pi / 4), Phase(2.0)] + _deformations(grid):
        fam.record(oracle.fock_algebra_check(dp, grid.n_max), _where(dp, n_max=grid.n_max))
    return fam


def _degenerate(grid: Grid) -> FamilyResult:
    """At theta = pi/4 every fourth bracket vanishes, so all r >= 4 distributions are 0."""
    fam = FamilyResult("degenerate", 1e-12)
    for theta, first in ((math.pi / 4, 4), (-math.pi / 4, 4), (math.pi / 6, 6)):
        dp = Phase(theta)
        for r in range(first, first + 2):
            for x in _x_values(dp, r, grid.n_x):
                scale = model.dist_r_scale(dp, x, r)
                fam.record(abs(model.dist_r(dp, x, r)) / scale, _where(dp, x, r))
                f = oracle.STD(dp)
                # the brute-force sum is exactly zero term by term and never meets a relative tail bound
                terms = [oracle.phi_falling_product(f, n, r) for n in range(4 * first + 40)]
                fam.record(max(abs(t) for t in terms) / max(abs(f(n)) for n in range(1, 4 * first + 40)) ** r,
                           _where(dp, r=r, what="falling products"))
    return fam


def _occupation_zeros(grid: Grid) -> FamilyResult:
    """The analytic zero locus of <a^dag a> on the unit circle, checked by brute force."""
    fam = FamilyResult("occupation_zeros", 1e-10)
    cfg = oracle.SeriesConfig(rel_tol=1e-13)
    for theta in np.linspace(-1.5, 1.5, 13 if grid is PRESETS["full"] else 5):
        dp = Phase(float(theta))
        x0 = model.occupation_zero_locus(float(theta))
        if x0 is None:
            # no root: the brute-force occupation keeps its sign along x
            signs = {np.sign(oracle.oracle_dist_r(oracle.STD(dp), x, 1, cfg)) for x in (0.05, 0.3, 1.0, 3.0)}
            fam.record(0.0 if len(signs) == 1 else math.inf, _where(dp, what="no root"))
            continue
        f = oracle.STD(dp)
        at = oracle.oracle_dist_r(f, x0, 1, cfg)
        lo = oracle.oracle_dist_r(f, x0 * 0.9, 1, cfg)
        hi = oracle.oracle_dist_r(f, x0 * 1.1, 1, cfg)
        fam.record(abs(at) / max(abs(lo), abs(hi)), _where(dp, x0))
        fam.record(0.0 if lo * hi < 0 else math.inf, _where(dp, x0, what="sign change"))
    return fam


FAMILIES = (_limit, _asymptotic, _oracle, _specialization, _intercept_forms, _symmetry, _identity, _algebra, _degenerate, _occupation_zeros)


def run_verify(grid_preset: str = "quick") -> VerifyReport:
    """Run every verification family on the named grid preset (``quick`` or ``full``)."""
    if grid_preset not in PRESETS:
        raise ValueError(f"unknown preset {grid_preset!r}; choose from {sorted(PRESETS)}")
    grid = PRESETS[grid_preset]
    report = VerifyReport(grid_preset)
    for family in FAMILIES:
        t0 = time.perf_counter()
        try:
            result = family(grid)
        except Exception as exc:  # a crash inside a family is a failure of that family
            result = FamilyResult(family.__name__.lstrip("_"), 0.0, math.inf, f"{type(exc).__name__}: {exc}", 1)
        result.seconds = time.perf_counter() - t0
        report.families.append(result)
    return report
