"""Exact error probabilities, fading averages, and asymptotic predictors.

Each detector has a closed-form (or one-dimensional integral) symbol error
probability.  This module evaluates them:

* phase keying — wedge-plus-threshold region integrals under the Gaussian
  conditional law of the matched-filter output;
* energy detection — products and alternating binomial sums of Marcum Q
  terms, with an equivalent single-integral form used when the alternating
  sum would cancel catastrophically;
* coherent links — averaged over the Rician magnitude law by fixed-order
  Gauss-Legendre quadrature;
* asymptotics — the high-SNR error floor of noncoherent phase keying.

All probabilities are reported as a breakdown (pe, pc_s0, pc_s1) where
pc_s0 / pc_s1 are the correct-detection probabilities given silence / given
a transmitted signal, tied together by
pe = 1 - ((1-nu) pc_s0 + nu pc_s1); pc_s0 is 1 by convention at nu = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as _integrate
from scipy import special as _sp

from .detectors import (
    oofsk_coherent_threshold,
    oofsk_noncoherent_threshold,
    oopsk_coherent_threshold,
    oopsk_noncoherent_threshold,
)
from .model import FadingSpec, Regime, Scenario, Scheme
from .specfun import (
    DEFAULT_TOL,
    DomainError,
    NumericError,
    NumericTolerance,
    gaussian_q,
    marcum_q1,
)

__all__ = [
    "ErrorProbabilityBreakdown",
    "pe_oopsk_coherent_given_h",
    "pe_oofsk_coherent_given_h",
    "pe_oopsk_noncoherent",
    "pe_oofsk_noncoherent",
    "average_over_fading",
    "average_breakdown_over_fading",
    "error_probability",
    "oopsk_noncoherent_error_floor",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT2 = math.sqrt(2.0)
# The Gaussian weights e^{-x^2} carry mass < 1e-85 beyond |x| = 14, far below
# every tolerance used here, so integrals are truncated there.
_X_MAX = 14.0
# Alternating Marcum sums stay well conditioned up to this constellation
# size; beyond it the single-integral form takes over.
_MAX_ALTERNATING_M = 16
_FADING_NODES = 128
_FADING_TAIL_MASS = 1e-12

_PROB_SLACK = 1e-9


def _clip_probability(value: float, label: str) -> float:
    """Snap quadrature round-off onto [0, 1]; reject anything worse."""
    if math.isnan(value) or value < -_PROB_SLACK or value > 1.0 + _PROB_SLACK:
        raise NumericError(f"{label} = {value!r} is not a probability")
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class ErrorProbabilityBreakdown:
    """Symbol error probability with its conditional correct-detection
    terms."""

    pe: float
    pc_s0: float
    pc_s1: float

    def __post_init__(self) -> None:
        for name in ("pe", "pc_s0", "pc_s1"):
            value = getattr(self, name)
            if math.isnan(value) or not (0.0 <= value <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {value!r}")

    @classmethod
    def from_conditionals(
        cls, nu: float, pc_s0: float, pc_s1: float
    ) -> "ErrorProbabilityBreakdown":
        """Assemble the breakdown from the conditional probabilities.

        At nu = 1 the silence hypothesis never occurs and pc_s0 is fixed at
        1 by convention so the identity pe = 1 - ((1-nu) pc_s0 + nu pc_s1)
        holds degenerately.
        """
        pc_s0 = 1.0 if nu == 1.0 else _clip_probability(pc_s0, "pc_s0")
        pc_s1 = _clip_probability(pc_s1, "pc_s1")
        pe = 1.0 - ((1.0 - nu) * pc_s0 + nu * pc_s1)
        return cls(pe=_clip_probability(pe, "pe"), pc_s0=pc_s0, pc_s1=pc_s1)


def _quad(f, lo: float, hi: float, tol: NumericTolerance) -> float:
    """Adaptive quadrature with failure detection."""
    if hi <= lo:
        return 0.0
    result = _integrate.quad(
        f, lo, hi, epsabs=tol.abs_tol, epsrel=tol.rel_tol, limit=200, full_output=1
    )
    value, abserr = result[0], result[1]
    if len(result) == 4:  # quadpack reported a problem
        if abserr > 1e3 * (tol.abs_tol + tol.rel_tol * abs(value)):
            raise NumericError(
                f"quadrature failed on [{lo}, {hi}]: {result[3].splitlines()[0]}"
            )
    return value


def _wedge_factor(x, tan_half_sector: float):
    """P(|y_im| < x * tan(pi/M) | y_re = x) for isotropic unit-variance
    complex noise; the M = 2 sector is the full half-plane, factor 1."""
    if math.isinf(tan_half_sector):
        return np.ones_like(np.asarray(x, dtype=float))
    return 1.0 - 2.0 * gaussian_q(_SQRT2 * tan_half_sector * np.asarray(x, dtype=float))


def _tan_half_sector(M: int) -> float:
    return math.inf if M == 2 else math.tan(math.pi / M)


# ---------------------------------------------------------------------------
# Phase keying, coherent
# ---------------------------------------------------------------------------


def pe_oopsk_coherent_given_h(
    h_mag: float,
    alpha: float,
    M: int,
    nu: float,
    tol: NumericTolerance = DEFAULT_TOL,
) -> ErrorProbabilityBreakdown:
    """Error probability of coherent phase keying conditioned on |h|.

    P_{c|s0} = M * int_0^tau (1 - 2Q(sqrt(2) x tan(pi/M))) e^{-x^2}/sqrt(pi) dx
    P_{c|s1} = int_tau^inf (1 - 2Q(sqrt(2) x tan(pi/M)))
               e^{-(x - alpha|h|)^2}/sqrt(pi) dx
    """
    if M < 2:
        raise DomainError(f"phase keying requires M >= 2, got {M}")
    tau = oopsk_coherent_threshold(alpha, h_mag, M, nu)
    tan_sector = _tan_half_sector(M)
    gain = alpha * h_mag

    if math.isinf(tau):
        # Silence always wins: the s0 wedge integral saturates at 1/M each.
        return ErrorProbabilityBreakdown.from_conditionals(nu, 1.0, 0.0)

    if nu == 1.0 or tau == 0.0:
        pc_s0 = 0.0
    else:
        pc_s0 = M * _quad(
            lambda x: _wedge_factor(x, tan_sector) * math.exp(-x * x) / _SQRT_PI,
            0.0,
            min(tau, _X_MAX),
            tol,
        )

    lo = max(tau - gain, -_X_MAX)
    if lo >= _X_MAX:
        pc_s1 = 0.0
    else:
        pc_s1 = _quad(
            lambda u: _wedge_factor(u + gain, tan_sector)
            * math.exp(-u * u)
            / _SQRT_PI,
            lo,
            _X_MAX,
            tol,
        )
    return ErrorProbabilityBreakdown.from_conditionals(nu, pc_s0, pc_s1)


# ---------------------------------------------------------------------------
# Energy detection, coherent
# ---------------------------------------------------------------------------


def _oofsk_pc_s0(tau: float, M: int) -> float:
    """(1 - e^{-tau})^M, the probability that all M unit-mean exponential
    energies stay below the threshold."""
    if math.isinf(tau):
        return 1.0
    if tau <= 0.0:
        return 0.0
    return (-math.expm1(-tau)) ** M


def _pc_s1_oofsk_coherent_sum(tau: float, gain: float, M: int) -> float:
    """Alternating binomial Marcum sum for the on-signal correct-detection
    probability of coherent energy detection."""
    gain2 = gain * gain
    terms = []
    for n in range(M):
        weight = ((-1.0) ** n) * math.comb(M - 1, n) / (n + 1.0)
        exponent = -(n / (n + 1.0)) * gain2
        q_val = marcum_q1(
            math.sqrt(2.0 / (n + 1.0)) * gain, math.sqrt(2.0 * (n + 1.0) * tau)
        )
        terms.append(weight * math.exp(exponent) * q_val)
    return math.fsum(terms)


def _pc_s1_oofsk_coherent_integral(
    tau: float, gain: float, M: int, tol: NumericTolerance
) -> float:
    """Single-integral form of the same probability, used for large M.

    With u = sqrt(x) the noncentral chi-square weight becomes the Rician
    density of u, and the exponentially scaled Bessel keeps the integrand
    bounded: 2u (1-e^{-u^2})^{M-1} e^{-(u-g)^2} i0e(2 g u).
    """

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        shell = (M - 1) * math.log1p(-math.exp(-u * u))
        core = -((u - gain) ** 2) + math.log(_sp.i0e(2.0 * gain * u))
        return 2.0 * u * math.exp(shell + core)

    lo = math.sqrt(tau)
    hi = max(gain, lo) + _X_MAX
    return _quad(integrand, lo, hi, tol)


def pe_oofsk_coherent_given_h(
    h_mag: float,
    alpha: float,
    M: int,
    nu: float,
    tol: NumericTolerance = DEFAULT_TOL,
) -> ErrorProbabilityBreakdown:
    """Error probability of coherent energy detection conditioned on |h|.

    P_{c|s0} = (1 - e^{-tau})^M and P_{c|s1} is the alternating binomial
    Marcum-Q sum (constellations above M = 16 switch to the equivalent
    integral form to dodge catastrophic cancellation).
    """
    if M < 1:
        raise DomainError(f"energy detection requires M >= 1, got {M}")
    tau = oofsk_coherent_threshold(alpha, h_mag, M, nu)
    gain = alpha * h_mag
    pc_s0 = _oofsk_pc_s0(tau, M)
    if math.isinf(tau):
        pc_s1 = 0.0
    elif M <= _MAX_ALTERNATING_M:
        pc_s1 = _pc_s1_oofsk_coherent_sum(tau, gain, M)
    else:
        pc_s1 = _pc_s1_oofsk_coherent_integral(tau, gain, M, tol)
    return ErrorProbabilityBreakdown.from_conditionals(nu, pc_s0, pc_s1)


# ---------------------------------------------------------------------------
# Phase keying, noncoherent
# ---------------------------------------------------------------------------


def _oopsk_noncoherent_breakdown(
    alpha: float,
    d_mag: float,
    gamma2: float,
    M: int,
    nu: float,
    tol: NumericTolerance,
    cap_sign: float,
) -> ErrorProbabilityBreakdown:
    """Region-probability evaluation of noncoherent phase keying.

    The silence region is the intersection of a disc (radius set by tau)
    with the complement of the union of M wedges; integrating its
    probability radially splits each sector into a pure wedge part on
    [0, tau_hat] and a circular-cap part on [tau_hat, tau_tilde].  cap_sign
    selects how the cap part enters P_{c|s0} (+1 is the region sum; -1 is
    the differenced variant kept only for the validation report).
    """
    if M < 2:
        raise DomainError(f"phase keying requires M >= 2, got {M}")
    if gamma2 <= 0.0:
        raise DomainError(f"noncoherent analysis requires gamma2 > 0, got {gamma2!r}")
    if alpha <= 0.0:
        raise DomainError(f"noncoherent phase keying requires alpha > 0, got {alpha!r}")
    a_term = alpha * alpha * gamma2
    tau = 0.0 if nu == 1.0 else oopsk_noncoherent_threshold(alpha, d_mag, gamma2, M, nu)
    offset = d_mag / (alpha * gamma2)  # |d| / (alpha gamma^2)
    tan_sector = _tan_half_sector(M)
    if math.isinf(tan_sector):
        tau_hat = 0.0
    else:
        sec2 = 1.0 + tan_sector * tan_sector
        tau_hat = (math.sqrt(offset * offset + tau * sec2) - offset) / sec2
    tau_tilde = math.sqrt(offset * offset + tau) - offset
    spread = math.sqrt(1.0 + a_term)  # std scale of the on-signal law
    mean = alpha * d_mag

    def cap_extent(x: float) -> float:
        value = tau - x * x - 2.0 * offset * x
        return math.sqrt(value) if value > 0.0 else 0.0

    def weight(x: float) -> float:
        return math.exp(-x * x) / _SQRT_PI

    wedge_part = _quad(
        lambda x: _wedge_factor(x, tan_sector) * weight(x),
        0.0,
        min(tau_hat, _X_MAX),
        tol,
    )
    cap_part = _quad(
        lambda x: (1.0 - 2.0 * gaussian_q(_SQRT2 * cap_extent(x))) * weight(x),
        min(tau_hat, _X_MAX),
        min(tau_tilde, _X_MAX),
        tol,
    )
    pc_s0 = M * (wedge_part + cap_sign * cap_part)

    u_hat = (tau_hat - mean) / spread
    u_tilde = (tau_tilde - mean) / spread
    lo = max(u_hat, -_X_MAX)
    if lo >= _X_MAX:
        pc_s1 = 0.0
    else:
        tail = _quad(
            lambda u: _wedge_factor(u + mean / spread, tan_sector) * weight(u),
            lo,
            _X_MAX,
            tol,
        )
        cap_s1 = _quad(
            lambda u: (
                1.0 - 2.0 * gaussian_q(_SQRT2 * cap_extent(mean + spread * u) / spread)
            )
            * weight(u),
            lo,
            min(u_tilde, _X_MAX),
            tol,
        )
        pc_s1 = tail - cap_s1
    return ErrorProbabilityBreakdown.from_conditionals(nu, pc_s0, pc_s1)


def pe_oopsk_noncoherent(
    alpha: float,
    d_mag: float,
    gamma2: float,
    M: int,
    nu: float,
    tol: NumericTolerance = DEFAULT_TOL,
) -> ErrorProbabilityBreakdown:
    """Error probability of noncoherent phase keying over Rician fading.

    Uses the region-sum form of the silence probability (wedge part plus
    circular-cap part), which is the variant consistent with Monte Carlo;
    see the validation command for the side-by-side comparison with the
    differenced variant.
    """
    return _oopsk_noncoherent_breakdown(
        alpha, d_mag, gamma2, M, nu, tol, cap_sign=+1.0
    )


# ---------------------------------------------------------------------------
# Energy detection, noncoherent
# ---------------------------------------------------------------------------


def _pc_s1_oofsk_noncoherent_sum(
    tau: float, a_term: float, b_term: float, M: int
) -> float:
    """Alternating binomial Marcum sum for noncoherent energy detection."""
    one_plus_a = 1.0 + a_term
    terms = []
    for n in range(M):
        scale = n * one_plus_a + 1.0
        weight = ((-1.0) ** n) * math.comb(M - 1, n) / scale
        exponent = -n * b_term / scale
        q_val = marcum_q1(
            math.sqrt(2.0 * b_term / (one_plus_a * scale)),
            math.sqrt(2.0 * scale * tau / one_plus_a),
        )
        terms.append(weight * math.exp(exponent) * q_val)
    return math.fsum(terms)


def _pc_s1_oofsk_noncoherent_integral(
    tau: float, a_term: float, b_term: float, M: int, tol: NumericTolerance
) -> float:
    """Single-integral form: int_tau^inf (1-e^{-x})^{M-1} f_on(x) dx with
    f_on the on-signal energy density, evaluated in u = sqrt(x)."""
    one_plus_a = 1.0 + a_term
    root_b = math.sqrt(b_term)

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        shell = (M - 1) * math.log1p(-math.exp(-u * u))
        core = -((u - root_b) ** 2) / one_plus_a + math.log(
            _sp.i0e(2.0 * u * root_b / one_plus_a)
        )
        return (2.0 * u / one_plus_a) * math.exp(shell + core)

    lo = math.sqrt(tau)
    hi = math.sqrt(b_term + one_plus_a) + _X_MAX * math.sqrt(one_plus_a / 2.0)
    return _quad(integrand, lo, max(hi, lo + 1.0), tol)


def pe_oofsk_noncoherent(
    alpha: float,
    d_mag: float,
    gamma2: float,
    M: int,
    nu: float,
    tol: NumericTolerance = DEFAULT_TOL,
) -> ErrorProbabilityBreakdown:
    """Error probability of noncoherent energy detection over Rician fading."""
    if M < 1:
        raise DomainError(f"energy detection requires M >= 1, got {M}")
    if gamma2 <= 0.0:
        raise DomainError(f"noncoherent analysis requires gamma2 > 0, got {gamma2!r}")
    a_term = alpha * alpha * gamma2
    b_term = alpha * alpha * d_mag * d_mag
    tau = 0.0 if nu == 1.0 else oofsk_noncoherent_threshold(alpha, d_mag, gamma2, M, nu)
    pc_s0 = _oofsk_pc_s0(tau, M)
    if math.isinf(tau):
        pc_s1 = 0.0
    elif M <= _MAX_ALTERNATING_M:
        pc_s1 = _pc_s1_oofsk_noncoherent_sum(tau, a_term, b_term, M)
    else:
        pc_s1 = _pc_s1_oofsk_noncoherent_integral(tau, a_term, b_term, M, tol)
    return ErrorProbabilityBreakdown.from_conditionals(nu, pc_s0, pc_s1)


# ---------------------------------------------------------------------------
# Fading averages and asymptotics
# ---------------------------------------------------------------------------


def _rician_truncation_radius(fading: FadingSpec) -> float:
    """Radius containing all but < 1e-12 of the fading magnitude mass."""
    k = fading.k_factor
    sigma = math.sqrt(fading.gamma2 / 2.0)
    a = math.sqrt(2.0 * k) if not math.isinf(k) else 0.0
    for extent in range(4, 64):
        radius = fading.d_mag + extent * sigma
        if marcum_q1(a, radius / sigma) < _FADING_TAIL_MASS:
            return radius
    raise NumericError("failed to bound the fading magnitude tail")


def average_over_fading(
    pe_given_h: Callable[[float], float],
    fading: FadingSpec,
    tol: NumericTolerance = DEFAULT_TOL,
) -> float:
    """Average a conditional error probability over the fading magnitude.

    Fixed 128-node Gauss-Legendre quadrature against the Rician magnitude
    density on [0, r_max], r_max chosen so the excluded tail mass is below
    1e-12.  A pure line-of-sight channel (gamma2 = 0) has a deterministic
    magnitude and the conditional value is returned directly.
    """
    from .model import fading_magnitude_pdf

    if fading.regime is not Regime.COHERENT:
        raise DomainError("average_over_fading applies to the coherent regime only")
    if fading.gamma2 == 0.0:
        return float(pe_given_h(fading.d_mag))
    r_max = _rician_truncation_radius(fading)
    nodes, weights = leggauss(_FADING_NODES)
    radii = 0.5 * r_max * (nodes + 1.0)
    scale = 0.5 * r_max
    density = fading_magnitude_pdf(radii, fading)
    values = np.array([pe_given_h(float(r)) for r in radii])
    return float(np.sum(weights * density * values) * scale)


def average_breakdown_over_fading(
    breakdown_given_h: Callable[[float], ErrorProbabilityBreakdown],
    fading: FadingSpec,
    nu: float,
    tol: NumericTolerance = DEFAULT_TOL,
) -> ErrorProbabilityBreakdown:
    """Average a conditional breakdown componentwise over the fading law.

    The conditional terms average linearly, so the identity tying pe to
    pc_s0 / pc_s1 survives the averaging.
    """
    pc_s0 = average_over_fading(
        lambda r: breakdown_given_h(r).pc_s0, fading, tol
    )
    pc_s1 = average_over_fading(
        lambda r: breakdown_given_h(r).pc_s1, fading, tol
    )
    return ErrorProbabilityBreakdown.from_conditionals(nu, pc_s0, pc_s1)


def error_probability(
    scenario: Scenario, tol: NumericTolerance = DEFAULT_TOL
) -> ErrorProbabilityBreakdown:
    """Breakdown for a complete scenario, averaging coherent links over the
    fading magnitude."""
    modulation = scenario.modulation
    fading = scenario.fading
    alpha = scenario.operating_point.alpha
    if fading.regime is Regime.NONCOHERENT:
        if modulation.scheme is Scheme.OOPSK:
            return pe_oopsk_noncoherent(
                alpha, fading.d_mag, fading.gamma2, modulation.M, modulation.nu, tol
            )
        return pe_oofsk_noncoherent(
            alpha, fading.d_mag, fading.gamma2, modulation.M, modulation.nu, tol
        )
    if modulation.scheme is Scheme.OOPSK:
        conditional = lambda r: pe_oopsk_coherent_given_h(
            r, alpha, modulation.M, modulation.nu, tol
        )
    else:
        conditional = lambda r: pe_oofsk_coherent_given_h(
            r, alpha, modulation.M, modulation.nu, tol
        )
    if fading.gamma2 == 0.0:
        return conditional(fading.d_mag)
    return average_breakdown_over_fading(conditional, fading, modulation.nu, tol)


def oopsk_noncoherent_error_floor(
    k_factor: float,
    M: int,
    nu: float,
    tol: NumericTolerance = DEFAULT_TOL,
) -> float:
    """High-SNR error floor of noncoherent phase keying.

    P_{c,inf|s1} = int_{-sqrt(K)}^{inf}
        (1 - 2Q(sqrt(2) tan(pi/M) (x + sqrt(K)))) e^{-x^2}/sqrt(pi) dx
    and the floor is nu (1 - P_{c,inf|s1}).  K = 0 gives P = 1/M (all signal
    hypotheses collapse), K -> inf gives P = 1 and no floor.
    """
    if M < 2:
        raise DomainError(f"phase keying requires M >= 2, got {M}")
    if math.isnan(k_factor) or k_factor < 0.0:
        raise DomainError(f"K must be >= 0, got {k_factor!r}")
    if not (0.0 < nu <= 1.0):
        raise DomainError(f"nu must lie in (0, 1], got {nu!r}")
    if math.isinf(k_factor):
        return 0.0
    root_k = math.sqrt(k_factor)
    tan_sector = _tan_half_sector(M)
    p_correct = _quad(
        lambda x: _wedge_factor(x + root_k, tan_sector)
        * math.exp(-x * x)
        / _SQRT_PI,
        max(-root_k, -_X_MAX),
        _X_MAX,
        tol,
    )
    return nu * (1.0 - _clip_probability(p_correct, "floor correct-probability"))
