"""Exception types raised by the library."""


class DomainError(ValueError):
    """Arguments fall outside the region where the thermal sums converge."""


class ImaginaryResidue(ArithmeticError):
    """A quantity that must be real came out with a non-negligible imaginary part.

    This always indicates an arithmetic bug, never a legitimate domain case.
    """


class ZeroDenominator(ZeroDivisionError):
    """The mean occupation vanishes, so the intercept is undefined."""


class NonConvergent(ArithmeticError):
    """A brute-force series failed to meet its tail bound."""


class ConfigError(ValueError):
    """Malformed sweep specification or command-line input."""
