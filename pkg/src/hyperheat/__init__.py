"""hyperheat: certified Segal-Bargmann isometry and inversion on H^{2n+1}.

Modules
-------
trigexpr   exact Gaussian x r-power x trig-rational calculus
spherical  closed forms of the spherical functions phi_{lam,k}
kernels    heat kernels nu_t, gamma_t, rho_t, w_t and the shift operators
spectral   spherical Fourier transform and calibrated Plancherel density
limits     pole-avoiding contours, I(R) / J(R) limits, surjectivity test
cli        command-line harness
"""

from .errors import (AmbiguousOrder, ConfigError, DecayViolation,
                     DifferentiationFailure, DivergenceDetected,
                     FlavorMismatch, HyperheatError, InconsistentCalibration,
                     InvalidTarget, NonConvergence, PoleError, ToleranceNotMet,
                     TruncationWarning)
from .kernels import ModelParams, build_kernels
from .spectral import (SpectralDensity, SpectralProfile, calibrate_plancherel,
                       forward_transform, heat_multiplier, inverse_transform,
                       plancherel_norm, sobolev_norm)
from .spherical import phi_i, phi_real
from .trigexpr import CIRCULAR, HYPERBOLIC, SymExpr, SymTerm

__version__ = "0.1.0"

__all__ = [
    "AmbiguousOrder", "ConfigError", "DecayViolation",
    "DifferentiationFailure", "DivergenceDetected", "FlavorMismatch",
    "HyperheatError", "InconsistentCalibration", "InvalidTarget",
    "NonConvergence", "PoleError", "ToleranceNotMet", "TruncationWarning",
    "ModelParams", "build_kernels",
    "SpectralDensity", "SpectralProfile", "calibrate_plancherel",
    "forward_transform", "heat_multiplier", "inverse_transform",
    "plancherel_norm", "sobolev_norm",
    "phi_i", "phi_real",
    "CIRCULAR", "HYPERBOLIC", "SymExpr", "SymTerm",
    "__version__",
]
