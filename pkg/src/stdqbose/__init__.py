"""Exact and brute-force numerics for the symmetric Tamm-Dancoff q-deformed Bose gas."""

from .errors import ConfigError, DomainError, ImaginaryResidue, NonConvergent, ZeroDenominator
from .model import (
    ModeState,
    classical_limit_dist,
    dist_2,
    dist_3,
    dist_4,
    dist_r,
    domain_check,
    intercept_2,
    intercept_3,
    intercept_4,
    intercept_asymptotic,
    intercept_r,
    mean_occupation,
)
from .oracle import STD, BiedenharnMacfarlane, Classical, SeriesConfig, fock_algebra_check, oracle_dist_r, oracle_intercept_r
from .qkernel import (
    DeformationParameter,
    LaurentPoly,
    Phase,
    Real,
    bm_bracket,
    gaussian_binomial,
    partition_count,
    product_expansion,
    std_bracket,
    std_factorial,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DomainError",
    "ImaginaryResidue",
    "NonConvergent",
    "ZeroDenominator",
    "ModeState",
    "classical_limit_dist",
    "dist_2",
    "dist_3",
    "dist_4",
    "dist_r",
    "domain_check",
    "intercept_2",
    "intercept_3",
    "intercept_4",
    "intercept_asymptotic",
    "intercept_r",
    "mean_occupation",
    "STD",
    "BiedenharnMacfarlane",
    "Classical",
    "SeriesConfig",
    "fock_algebra_check",
    "oracle_dist_r",
    "oracle_intercept_r",
    "DeformationParameter",
    "LaurentPoly",
    "Phase",
    "Real",
    "bm_bracket",
    "gaussian_binomial",
    "partition_count",
    "product_expansion",
    "std_bracket",
    "std_factorial",
]
