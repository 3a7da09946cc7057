"""Exception types shared across the package."""


class HyperheatError(Exception):
    """Base class for all package-specific errors."""


class PoleError(HyperheatError):
    """Evaluation point is within the guard distance of a pole."""


class FlavorMismatch(HyperheatError):
    """Attempt to combine circular and hyperbolic expressions."""


class AmbiguousOrder(HyperheatError):
    """Laurent fit did not resolve the pole order cleanly."""


class DifferentiationFailure(HyperheatError):
    """No usable derivative oracle for the supplied function."""


class InconsistentCalibration(HyperheatError):
    """Plancherel constant fitted at different times disagrees."""


class DecayViolation(HyperheatError):
    """Supplied decay bound fails a sampled check."""


class TruncationWarning(UserWarning):
    """Discarded spectral tail mass exceeds the reporting threshold."""


class NonConvergence(HyperheatError):
    """Residuals failed to decrease along the limit sequence."""


class DivergenceDetected(HyperheatError):
    """Monotone partial integrals exceed the cap with positive trend."""


class InvalidTarget(HyperheatError):
    """Contour endpoint lies outside the admissible pole-free region."""


class ToleranceNotMet(HyperheatError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ConfigError(HyperheatError):
    """Invalid run configuration."""
