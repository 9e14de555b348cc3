"""Optimal MAP decision rules for on-off PSK/FSK over Rician fading.

Each of the four receivers (phase keying vs. energy detection, coherent vs.
noncoherent) reduces to an argmax over the M candidate signals followed by a
scalar threshold test that decides between "best candidate" and "nothing was
sent".  This module implements the threshold computations and the resulting
deterministic detectors.  Detectors expect pre-derotated observations: the
caller removes the known fading phase (coherent) or the phase of the fading
mean (noncoherent) before invoking them, which makes every rule a function
of magnitudes only.

A decision is the integer index of the detected hypothesis: 0 means "no
transmission", 1..M identify the signals.  Ties in the argmax break toward
the lowest index so that repeated runs are reproducible.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.optimize import brentq

from .specfun import DomainError, bessel_i0_inverse_from_log, log_i0

__all__ = [
    "oopsk_coherent_threshold",
    "oopsk_coherent_detect",
    "oofsk_coherent_threshold",
    "oofsk_coherent_detect",
    "oopsk_noncoherent_threshold",
    "oopsk_noncoherent_detect",
    "oofsk_noncoherent_threshold",
    "oofsk_noncoherent_detect",
]

# Below this value of alpha*|h| the on-signal likelihoods are numerically
# indistinguishable from the off-signal one and the threshold formulas
# degenerate; the analytic limit takes over.
_DEGENERATE_GAIN = 1e-12


def _log_prior_ratio(M: int, nu: float) -> float:
    """ln(M (1 - nu) / nu), the prior odds of silence vs. one signal."""
    return math.log(M * (1.0 - nu) / nu)


def _check_common(alpha: float, M: int, nu: float, min_m: int) -> None:
    if math.isnan(alpha) or alpha < 0.0:
        raise DomainError(f"alpha must be >= 0, got {alpha!r}")
    if M < min_m:
        raise DomainError(f"M must be >= {min_m}, got {M}")
    if math.isnan(nu) or not (0.0 < nu <= 1.0):
        raise DomainError(f"nu must lie in (0, 1], got {nu!r}")


def oopsk_coherent_threshold(alpha: float, h_mag: float, M: int, nu: float) -> float:
    """Radial threshold for coherent phase keying.

    The no-transmission region is {Re(y~ e^{-j theta_i*}) <= tau} with
    tau = max(0, alpha|h|/2 + ln(M(1-nu)/nu) / (2 alpha|h|)).  At nu = 1
    the silence hypothesis has prior zero and tau = 0; when alpha|h|
    degenerates to zero the threshold goes to +inf whenever silence is the
    a-priori favourite (nu < M/(M+1)) and to 0 otherwise.
    """
    _check_common(alpha, M, nu, min_m=2)
    if nu == 1.0:
        return 0.0
    gain = alpha * h_mag
    log_ratio = _log_prior_ratio(M, nu)
    if gain < _DEGENERATE_GAIN:
        return math.inf if log_ratio > 0.0 else 0.0
    zeta = 0.5 * gain + log_ratio / (2.0 * gain)
    return max(zeta, 0.0)


def oopsk_coherent_detect(y: complex, h: complex, alpha: float, M: int, nu: float) -> int:
    """Coherent phase-keying decision for a single observation.

    Derotates by the known fading phase, picks the best constellation phase
    i* = argmax Re(y~ e^{-j theta_i}), and declares silence unless the
    winning projection exceeds the threshold.
    """
    _check_common(alpha, M, nu, min_m=2)
    phase = cmath.phase(h) if h != 0 else 0.0
    y_rot = y * cmath.exp(-1j * phase)
    phases = 2.0 * np.pi * np.arange(M) / M
    projections = y_rot.real * np.cos(phases) + y_rot.imag * np.sin(phases)
    best = int(np.argmax(projections))
    if nu == 1.0:
        return best + 1
    tau = oopsk_coherent_threshold(alpha, abs(h), M, nu)
    return best + 1 if projections[best] > tau else 0


def oofsk_coherent_threshold(alpha: float, h_mag: float, M: int, nu: float) -> float:
    """Energy threshold for coherent frequency keying.

    Silence wins while max_m R_m <= tau with
    tau = [I0^{-1}(xi)]^2 / (4 alpha^2 |h|^2), xi = M(1-nu) e^{alpha^2|h|^2}/nu.
    xi overflows long before the threshold does, so the inversion runs on
    ln(xi).  xi < 1 (in particular the nu = 1 case) collapses tau to 0.
    """
    _check_common(alpha, M, nu, min_m=1)
    if nu == 1.0:
        return 0.0
    gain = alpha * h_mag
    log_xi = _log_prior_ratio(M, nu) + gain * gain
    if log_xi < 0.0:
        return 0.0
    if gain < _DEGENERATE_GAIN:
        return math.inf
    root = bessel_i0_inverse_from_log(log_xi)
    return root * root / (4.0 * gain * gain)


def oofsk_coherent_detect(R, h_mag: float, alpha: float, M: int, nu: float) -> int:
    """Coherent energy-detection decision over the M-bin energy vector."""
    _check_common(alpha, M, nu, min_m=1)
    energies = np.asarray(R, dtype=float)
    if energies.shape != (M,):
        raise DomainError(f"energy vector must have exactly M={M} entries")
    if np.any(energies < 0.0):
        raise DomainError("energies must be nonnegative")
    best = int(np.argmax(energies))
    if nu == 1.0:
        return best + 1
    tau = oofsk_coherent_threshold(alpha, h_mag, M, nu)
    return best + 1 if energies[best] > tau else 0


def _check_noncoherent(alpha: float, d_mag: float, gamma2: float) -> None:
    if math.isnan(d_mag) or d_mag < 0.0:
        raise DomainError(f"d_mag must be >= 0, got {d_mag!r}")
    if math.isnan(gamma2) or gamma2 <= 0.0:
        raise DomainError(
            f"noncoherent detection requires gamma2 > 0, got {gamma2!r}"
        )


def oopsk_noncoherent_threshold(
    alpha: float, d_mag: float, gamma2: float, M: int, nu: float
) -> float:
    """Decision threshold for noncoherent phase keying.

    tau = max(0, |d|^2/gamma^2
              + (1 + 1/(alpha^2 gamma^2)) ln((M(1-nu)/nu)(1 + alpha^2 gamma^2))).
    Grows without bound both as alpha -> 0 (silence favoured a priori when
    nu < M/(M+1)) and as alpha -> infinity (the ln(1 + alpha^2 gamma^2) term).
    """
    _check_common(alpha, M, nu, min_m=2)
    _check_noncoherent(alpha, d_mag, gamma2)
    if nu == 1.0:
        return 0.0
    a2g2 = alpha * alpha * gamma2
    if a2g2 == 0.0:
        log_ratio = _log_prior_ratio(M, nu)
        return math.inf if log_ratio > 0.0 else 0.0
    zeta = d_mag * d_mag / gamma2 + (1.0 + 1.0 / a2g2) * (
        _log_prior_ratio(M, nu) + math.log1p(a2g2)
    )
    return max(zeta, 0.0)


def oopsk_noncoherent_detect(
    y: complex, alpha: float, d_mag: float, gamma2: float, M: int, nu: float
) -> int:
    """Noncoherent phase-keying decision.

    Expects y already derotated by the phase of the fading mean.  The best
    phase is the nearest-phase argmax; the silence test uses the statistic
    |y|^2 + (2|d| / (alpha gamma^2)) Re(y e^{-j theta_i*}).
    """
    _check_common(alpha, M, nu, min_m=2)
    _check_noncoherent(alpha, d_mag, gamma2)
    phases = 2.0 * np.pi * np.arange(M) / M
    projections = y.real * np.cos(phases) + y.imag * np.sin(phases)
    best = int(np.argmax(projections))
    if nu == 1.0:
        return best + 1
    tau = oopsk_noncoherent_threshold(alpha, d_mag, gamma2, M, nu)
    statistic = abs(y) ** 2 + (2.0 * d_mag / (alpha * gamma2)) * projections[best]
    return best + 1 if statistic > tau else 0


def oofsk_noncoherent_threshold(
    alpha: float, d_mag: float, gamma2: float, M: int, nu: float
) -> float:
    """Energy threshold for noncoherent frequency keying.

    Solves Phi(tau) = xi where
      Phi(x) = e^{A x/(1+A)} I0(2 sqrt(x B)/(1+A)),  A = alpha^2 gamma^2,
      B = alpha^2 |d|^2,
      xi = (M(1-nu)/nu)(1+A) e^{B/(1+A)},
    working on ln(Phi) throughout.  The Rayleigh case B = 0 inverts in
    closed form: tau = ((1+A)/A) ln(xi).
    """
    _check_common(alpha, M, nu, min_m=1)
    _check_noncoherent(alpha, d_mag, gamma2)
    if nu == 1.0:
        return 0.0
    a_term = alpha * alpha * gamma2
    b_term = alpha * alpha * d_mag * d_mag
    one_plus_a = 1.0 + a_term
    log_xi = _log_prior_ratio(M, nu) + math.log(one_plus_a) + b_term / one_plus_a
    if log_xi <= 0.0:
        return 0.0
    if a_term == 0.0:
        return math.inf
    if b_term == 0.0:
        return (one_plus_a / a_term) * log_xi

    def log_phi(x: float) -> float:
        return a_term * x / one_plus_a + log_i0(2.0 * math.sqrt(x * b_term) / one_plus_a)

    # ln Phi(x) >= A x/(1+A) gives a certified upper bracket; dropping the
    # Bessel term below its chord I0(z) <= e^z gives the lower one.
    hi = (one_plus_a / a_term) * log_xi
    sqrt_lo = (
        -math.sqrt(b_term) + math.sqrt(b_term + a_term * one_plus_a * log_xi)
    ) / a_term
    lo = sqrt_lo * sqrt_lo
    if log_phi(hi) < log_xi:  # guard against rounding at the bracket edge
        hi *= 1.0 + 1e-12
    root = brentq(lambda x: log_phi(x) - log_xi, lo, hi, xtol=1e-14, rtol=8.9e-16)
    return float(root)


def oofsk_noncoherent_detect(
    R, alpha: float, d_mag: float, gamma2: float, M: int, nu: float
) -> int:
    """Noncoherent energy-detection decision over the M-bin energy vector."""
    _check_common(alpha, M, nu, min_m=1)
    _check_noncoherent(alpha, d_mag, gamma2)
    energies = np.asarray(R, dtype=float)
    if energies.shape != (M,):
        raise DomainError(f"energy vector must have exactly M={M} entries")
    if np.any(energies < 0.0):
        raise DomainError("energies must be nonnegative")
    best = int(np.argmax(energies))
    if nu == 1.0:
        return best + 1
    tau = oofsk_noncoherent_threshold(alpha, d_mag, gamma2, M, nu)
    return best + 1 if energies[best] > tau else 0
