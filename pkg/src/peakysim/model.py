"""Scenario configuration: modulation, fading, and link operating point.

The discrete channel treated throughout is y = alpha * h * e^{j*theta} + n
with unit-variance circularly symmetric noise.  This module owns the three
immutable value types describing a scenario, the unit conversions between
SNR, the on-symbol amplitude alpha, and the per-bit ratio Eb/N0, and the
Rician fading-magnitude density used for coherent averaging.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .specfun import DomainError, bessel_i0_scaled, source_entropy

__all__ = [
    "Scheme",
    "Regime",
    "ModulationSpec",
    "FadingSpec",
    "LinkOperatingPoint",
    "Scenario",
    "alpha_from_snr",
    "ebn0_from_snr",
    "fading_magnitude_pdf",
    "db_to_linear",
    "linear_to_db",
]


class Scheme(enum.Enum):
    """Signalling family: phase keying or frequency keying, both on-off."""

    OOPSK = "oopsk"
    OOFSK = "oofsk"


class Regime(enum.Enum):
    """Receiver knowledge: per-symbol fading known (coherent) or only its
    statistics (noncoherent)."""

    COHERENT = "coherent"
    NONCOHERENT = "noncoherent"


@dataclass(frozen=True)
class ModulationSpec:
    """Constellation description: scheme, size M, and duty cycle nu.

    With probability 1 - nu nothing is transmitted; otherwise one of the M
    signals is sent, each with probability nu / M.
    """

    scheme: Scheme
    M: int
    nu: float

    def __post_init__(self) -> None:
        if not isinstance(self.scheme, Scheme):
            raise DomainError(f"scheme must be a Scheme, got {self.scheme!r}")
        min_m = 2 if self.scheme is Scheme.OOPSK else 1
        if self.M < min_m:
            raise DomainError(
                f"{self.scheme.value} requires M >= {min_m}, got {self.M}"
            )
        if math.isnan(self.nu) or not (0.0 < self.nu <= 1.0):
            raise DomainError(f"nu must lie in (0, 1], got {self.nu!r}")

    @property
    def par(self) -> float:
        """Peak-to-average power ratio, 1 / nu."""
        return 1.0 / self.nu

    @property
    def phases(self) -> np.ndarray:
        """Constellation phases theta_i = 2*pi*(i-1)/M, i = 1..M."""
        return 2.0 * np.pi * np.arange(self.M) / self.M

    @property
    def priors(self) -> np.ndarray:
        """Prior vector (1 - nu, nu/M, ..., nu/M) over indices 0..M."""
        return np.concatenate(
            [[1.0 - self.nu], np.full(self.M, self.nu / self.M)]
        )


@dataclass(frozen=True)
class FadingSpec:
    """Rician fading description: regime plus mean magnitude and diffuse
    variance.

    h = d + z with z circularly symmetric complex Gaussian of variance
    gamma2; only |d| matters for error rates, so the spec carries the
    magnitude.  Derived accessors expose the Rician factor K = |d|^2/gamma2
    and the total energy Omega = |d|^2 + gamma2.
    """

    regime: Regime
    d_mag: float
    gamma2: float

    def __post_init__(self) -> None:
        if not isinstance(self.regime, Regime):
            raise DomainError(f"regime must be a Regime, got {self.regime!r}")
        if math.isnan(self.d_mag) or self.d_mag < 0.0:
            raise DomainError(f"d_mag must be >= 0, got {self.d_mag!r}")
        if math.isnan(self.gamma2) or self.gamma2 < 0.0:
            raise DomainError(f"gamma2 must be >= 0, got {self.gamma2!r}")
        if self.d_mag == 0.0 and self.gamma2 == 0.0:
            raise DomainError("fading requires d_mag^2 + gamma2 > 0")

    @classmethod
    def from_k_omega(cls, regime: Regime, k_factor: float, omega: float = 1.0) -> "FadingSpec":
        """Build from the Rician factor K and total energy Omega = E{|h|^2}.

        K may be math.inf for a pure line-of-sight channel.
        """
        if math.isnan(omega) or omega <= 0.0:
            raise DomainError(f"omega must be > 0, got {omega!r}")
        if math.isnan(k_factor) or k_factor < 0.0:
            raise DomainError(f"K must be >= 0, got {k_factor!r}")
        if math.isinf(k_factor):
            return cls(regime, math.sqrt(omega), 0.0)
        d_mag = math.sqrt(omega * k_factor / (1.0 + k_factor))
        gamma2 = omega / (1.0 + k_factor)
        return cls(regime, d_mag, gamma2)

    @property
    def k_factor(self) -> float:
        """Rician factor |d|^2 / gamma2; infinite for pure line of sight."""
        if self.gamma2 == 0.0:
            return math.inf
        return self.d_mag * self.d_mag / self.gamma2

    @property
    def omega(self) -> float:
        """Total fading energy E{|h|^2} = |d|^2 + gamma2."""
        return self.d_mag * self.d_mag + self.gamma2


@dataclass(frozen=True)
class LinkOperatingPoint:
    """Operating point: SNR with its derived amplitude and per-bit ratio.

    snr is the average symbol energy over the noise spectral density; the
    on-symbol amplitude is alpha = sqrt(snr / nu), and ebn0 = snr / H(nu)
    with the source entropy H in bits.
    """

    snr: float
    alpha: float
    ebn0: float

    @classmethod
    def from_snr(cls, snr: float, modulation: ModulationSpec) -> "LinkOperatingPoint":
        alpha = alpha_from_snr(snr, modulation)
        ebn0 = ebn0_from_snr(snr, modulation)
        return cls(snr=float(snr), alpha=alpha, ebn0=ebn0)

    @classmethod
    def from_ebn0(cls, ebn0: float, modulation: ModulationSpec) -> "LinkOperatingPoint":
        if math.isnan(ebn0) or ebn0 <= 0.0:
            raise DomainError(f"ebn0 must be > 0, got {ebn0!r}")
        entropy = source_entropy(modulation.M, modulation.nu)
        if entropy == 0.0:
            raise DomainError("source entropy is zero; Eb/N0 is undefined")
        return cls.from_snr(ebn0 * entropy, modulation)


def alpha_from_snr(snr: float, spec: ModulationSpec) -> float:
    """On-symbol amplitude alpha = sqrt(snr / nu).

    Transmitting with probability nu at amplitude alpha spends average
    energy alpha^2 * nu = snr per symbol, giving peak-to-average ratio 1/nu.
    """
    snr = float(snr)
    if math.isnan(snr) or snr <= 0.0:
        raise DomainError(f"snr must be > 0, got {snr!r}")
    return math.sqrt(snr / spec.nu)


def ebn0_from_snr(snr: float, spec: ModulationSpec) -> float:
    """Per-bit ratio Eb/N0 = snr / H(nu), with H in bits per symbol."""
    snr = float(snr)
    if math.isnan(snr) or snr <= 0.0:
        raise DomainError(f"snr must be > 0, got {snr!r}")
    entropy = source_entropy(spec.M, spec.nu)
    if entropy == 0.0:
        raise DomainError("source entropy is zero; Eb/N0 is undefined")
    return snr / entropy


def db_to_linear(x_db: float) -> float:
    """Convert a dB quantity to its linear ratio."""
    return 10.0 ** (float(x_db) / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a positive linear ratio to dB."""
    x = float(x)
    if math.isnan(x) or x <= 0.0:
        raise DomainError(f"linear_to_db requires x > 0, got {x!r}")
    return 10.0 * math.log10(x)


def fading_magnitude_pdf(r, fading: FadingSpec):
    """Rician magnitude density of |h| for a coherent fading description.

    f(r) = (2 r (1+K) / Omega) exp(-K - (1+K) r^2 / Omega)
           * I0(2 r sqrt(K (1+K) / Omega))
    evaluated through the scaled Bessel function so large K stays finite.
    Reduces to the Rayleigh density 2 r e^{-r^2/Omega} / Omega at K = 0.
    """
    if fading.regime is not Regime.COHERENT:
        raise DomainError("fading_magnitude_pdf applies to the coherent regime only")
    if fading.gamma2 == 0.0:
        raise DomainError("pure line-of-sight fading has no magnitude density")
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise DomainError(f"fading_magnitude_pdf requires r >= 0, got {r!r}")
    k = fading.k_factor
    omega = fading.omega
    bessel_arg = 2.0 * arr * math.sqrt(k * (1.0 + k) / omega)
    log_weight = -k - (1.0 + k) * arr * arr / omega + bessel_arg
    out = (
        (2.0 * arr * (1.0 + k) / omega)
        * np.exp(log_weight)
        * bessel_i0_scaled(bessel_arg)
    )
    return float(out) if np.ndim(r) == 0 else out


@dataclass(frozen=True)
class Scenario:
    """A complete link scenario: modulation, fading, and operating point."""

    modulation: ModulationSpec
    fading: FadingSpec
    operating_point: LinkOperatingPoint

    @classmethod
    def build(
        cls,
        scheme: Scheme | str,
        M: int,
        nu: float,
        regime: Regime | str,
        k_factor: float,
        omega: float = 1.0,
        *,
        snr: float | None = None,
        ebn0: float | None = None,
    ) -> "Scenario":
        """Assemble a scenario from elementary parameters.

        Exactly one of snr / ebn0 must be given (linear, not dB).
        """
        if (snr is None) == (ebn0 is None):
            raise DomainError("specify exactly one of snr or ebn0")
        scheme = Scheme(scheme) if not isinstance(scheme, Scheme) else scheme
        regime = Regime(regime) if not isinstance(regime, Regime) else regime
        modulation = ModulationSpec(scheme, M, nu)
        fading = FadingSpec.from_k_omega(regime, k_factor, omega)
        if snr is not None:
            point = LinkOperatingPoint.from_snr(snr, modulation)
        else:
            point = LinkOperatingPoint.from_ebn0(ebn0, modulation)
        return cls(modulation, fading, point)

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        """Parse the JSON scenario schema.

        Expected keys: scheme ("oopsk"|"oofsk"), M, nu, regime
        ("coherent"|"noncoherent"), K (number or "inf"), omega, and exactly
        one of snr_db / ebn0_db.
        """
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid scenario JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise DomainError("scenario JSON must be an object")
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "Scenario":
        required = {"scheme", "M", "nu", "regime", "K", "omega"}
        missing = required - raw.keys()
        if missing:
            raise DomainError(f"scenario is missing keys: {sorted(missing)}")
        k_raw = raw["K"]
        k_factor = math.inf if k_raw == "inf" else float(k_raw)
        has_snr = "snr_db" in raw
        has_ebn0 = "ebn0_db" in raw
        if has_snr == has_ebn0:
            raise DomainError("scenario needs exactly one of snr_db / ebn0_db")
        snr = db_to_linear(raw["snr_db"]) if has_snr else None
        ebn0 = db_to_linear(raw["ebn0_db"]) if has_ebn0 else None
        return cls.build(
            raw["scheme"],
            int(raw["M"]),
            float(raw["nu"]),
            raw["regime"],
            k_factor,
            float(raw["omega"]),
            snr=snr,
            ebn0=ebn0,
        )

    def to_dict(self) -> dict:
        k = self.fading.k_factor
        return {
            "scheme": self.modulation.scheme.value,
            "M": self.modulation.M,
            "nu": self.modulation.nu,
            "regime": self.fading.regime.value,
            "K": "inf" if math.isinf(k) else k,
            "omega": self.fading.omega,
            "snr_db": linear_to_db(self.operating_point.snr),
        }

    def with_snr(self, snr: float) -> "Scenario":
        """Same modulation and fading at a different operating SNR."""
        return Scenario(
            self.modulation,
            self.fading,
            LinkOperatingPoint.from_snr(snr, self.modulation),
        )
