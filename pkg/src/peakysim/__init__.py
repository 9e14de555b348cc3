"""Link-level toolkit for peaky (low-duty-cycle) modulation.

Exact symbol error probabilities, MAP detection thresholds, Monte Carlo
simulation, and random-coding error exponents for on-off phase keying
and on-off frequency keying over coherent and noncoherent Rician fading.
"""

from .analytic import (
    ErrorProbabilityBreakdown,
    average_breakdown_over_fading,
    average_over_fading,
    error_probability,
    oopsk_noncoherent_error_floor,
    pe_oofsk_coherent_given_h,
    pe_oofsk_noncoherent,
    pe_oopsk_coherent_given_h,
    pe_oopsk_noncoherent,
)
from .detectors import (
    oofsk_coherent_detect,
    oofsk_coherent_threshold,
    oofsk_noncoherent_detect,
    oofsk_noncoherent_threshold,
    oopsk_coherent_detect,
    oopsk_coherent_threshold,
    oopsk_noncoherent_detect,
    oopsk_noncoherent_threshold,
)
from .exponents import (
    ExponentCurve,
    ExponentPoint,
    e0,
    e0_profile,
    error_exponent,
    exponent_curve,
)
from .model import (
    FadingSpec,
    LinkOperatingPoint,
    ModulationSpec,
    Regime,
    Scenario,
    Scheme,
    alpha_from_snr,
    db_to_linear,
    ebn0_from_snr,
    fading_magnitude_pdf,
    linear_to_db,
)
from .montecarlo import SimulationResult, get_backend, set_backend, simulate
from .specfun import (
    DomainError,
    NumericError,
    NumericTolerance,
    source_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ErrorProbabilityBreakdown",
    "ExponentCurve",
    "ExponentPoint",
    "FadingSpec",
    "LinkOperatingPoint",
    "ModulationSpec",
    "NumericError",
    "NumericTolerance",
    "Regime",
    "Scenario",
    "Scheme",
    "SimulationResult",
    "alpha_from_snr",
    "average_breakdown_over_fading",
    "average_over_fading",
    "db_to_linear",
    "e0",
    "e0_profile",
    "ebn0_from_snr",
    "error_exponent",
    "error_probability",
    "exponent_curve",
    "fading_magnitude_pdf",
    "get_backend",
    "linear_to_db",
    "oofsk_coherent_detect",
    "oofsk_coherent_threshold",
    "oofsk_noncoherent_detect",
    "oofsk_noncoherent_threshold",
    "oopsk_coherent_detect",
    "oopsk_coherent_threshold",
    "oopsk_noncoherent_detect",
    "oopsk_noncoherent_threshold",
    "oopsk_noncoherent_error_floor",
    "pe_oofsk_coherent_given_h",
    "pe_oofsk_noncoherent",
    "pe_oopsk_coherent_given_h",
    "pe_oopsk_noncoherent",
    "set_backend",
    "simulate",
    "source_entropy",
]
