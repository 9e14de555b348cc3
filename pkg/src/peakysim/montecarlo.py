"""Monte Carlo link simulator with deterministic, parallel-safe streams.

The simulator draws in fixed-size chunks of 65536 trials.  Chunk k of a
run with seed s uses a counter-based generator keyed by (s, k), so

* results do not depend on the number of worker threads: every chunk's
  error count is an integer and integer addition commutes;
* a run of n trials is a prefix of any longer run with the same seed: a
  partial final chunk draws the same leading rows the full chunk would.

All random variates (symbol selectors, fading normals, carrier phases,
noise normals) are prepared as NumPy arrays shared verbatim by the
compiled and NumPy counting backends, which keeps the two backends
bit-for-bit interchangeable.  The compiled backend is the default; set
PEAKY_DISABLE_NUMBA=1 (or call set_backend("numpy")) to run pure NumPy.

Diagnostic knobs: noise_scale multiplies the noise standard deviation and
tau_scale multiplies every decision threshold; both default to 1 and exist
so that validation runs can confirm the simulator and the analytic
formulas disagree when the link is deliberately perturbed.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.special import ndtri

from . import _kernels
from .detectors import oofsk_noncoherent_threshold, oopsk_noncoherent_threshold
from .model import Regime, Scenario, Scheme
from .specfun import DomainError

__all__ = [
    "CHUNK_SIZE",
    "SimulationResult",
    "simulate",
    "get_backend",
    "set_backend",
]

CHUNK_SIZE = 1 << 16
# Shifting uniforms from [0, 1) to (0, 1) keeps the normal quantile finite;
# the largest representable uniform stays strictly below 1.
_U_SHIFT = 2.0**-54
_TWO_PI = 2.0 * math.pi

_VALID_BACKENDS = ("numba", "numpy")

_logger = logging.getLogger("peakysim.montecarlo")


def _initial_backend() -> str:
    flag = os.environ.get("PEAKY_DISABLE_NUMBA", "").strip().lower()
    if flag not in ("", "0", "false", "no"):
        return "numpy"
    if not _kernels.HAVE_NUMBA:  # pragma: no cover - depends on environment
        _logger.warning("numba is unavailable; using the NumPy backend")
        return "numpy"
    return "numba"


_BACKEND = _initial_backend()


def get_backend() -> str:
    """Name of the counting backend currently in use."""
    return _BACKEND


def set_backend(name: str) -> None:
    """Select the counting backend: "numba" or "numpy"."""
    global _BACKEND
    if name not in _VALID_BACKENDS:
        raise DomainError(f"backend must be one of {_VALID_BACKENDS}, got {name!r}")
    if name == "numba" and not _kernels.HAVE_NUMBA:
        raise DomainError("the numba backend is not available in this environment")
    _BACKEND = name


@dataclass(frozen=True)
class SimulationResult:
    """Outcome of a simulation run."""

    errors: int
    trials: int
    pe: float
    stderr: float
    seed: int


def _symbol_stream(u: np.ndarray, M: int, nu: float) -> np.ndarray:
    """Map uniforms to symbols: 0 is silence (probability 1 - nu), symbols
    1..M split the remaining mass evenly."""
    scaled = (u - (1.0 - nu)) / nu * M
    idx = np.minimum(scaled.astype(np.int64), M - 1)
    return np.where(u < 1.0 - nu, 0, idx + 1)


def _normals(u: np.ndarray) -> np.ndarray:
    return ndtri(u + _U_SHIFT)


def _draw_chunk(
    scenario: Scenario,
    seed: int,
    chunk_index: int,
    n: int,
    noise_scale: float,
) -> Dict[str, np.ndarray]:
    """Draw the random inputs for one chunk, shared by both backends.

    Column layout of the underlying uniform matrix (row-major, so shorter
    chunks are prefixes of longer ones): symbol selector, two fading
    normals, then for coherent links one carrier-phase uniform, then the
    noise normals (2 for phase keying, 2M for energy detection).
    """
    modulation = scenario.modulation
    fading = scenario.fading
    M = modulation.M
    coherent = fading.regime is Regime.COHERENT
    n_noise = 2 if modulation.scheme is Scheme.OOPSK else 2 * M
    cols = 3 + (1 if coherent else 0) + n_noise
    bitgen = np.random.Philox(key=np.array([seed, chunk_index], dtype=np.uint64))
    u = np.random.Generator(bitgen).random((n, cols))

    out: Dict[str, np.ndarray] = {"sym": _symbol_stream(u[:, 0], M, modulation.nu)}
    sigma = math.sqrt(fading.gamma2 / 2.0)
    z1 = _normals(u[:, 1])
    z2 = _normals(u[:, 2])
    if coherent:
        out["r"] = np.hypot(fading.d_mag + sigma * z1, sigma * z2)
        phase = _TWO_PI * u[:, 3]
        out["cph"] = np.cos(phase)
        out["sph"] = np.sin(phase)
        first_noise = 4
    else:
        out["h_re"] = fading.d_mag + sigma * z1
        out["h_im"] = sigma * z2
        first_noise = 3
    w = _normals(u[:, first_noise:]) * (math.sqrt(0.5) * noise_scale)
    if modulation.scheme is Scheme.OOPSK:
        out["w_re"] = np.ascontiguousarray(w[:, 0])
        out["w_im"] = np.ascontiguousarray(w[:, 1])
    else:
        out["w"] = np.ascontiguousarray(w)
    return out


def _count_chunk(
    scenario: Scenario,
    seed: int,
    chunk_index: int,
    n: int,
    noise_scale: float,
    tau_scale: float,
    backend: str,
    params: Dict[str, object],
) -> int:
    draws = _draw_chunk(scenario, seed, chunk_index, n, noise_scale)
    scheme = scenario.modulation.scheme
    coherent = scenario.fading.regime is Regime.COHERENT
    jit = backend == "numba"
    if scheme is Scheme.OOPSK and not coherent:
        fn = (
            _kernels.oopsk_noncoherent_errors_jit
            if jit
            else _kernels.oopsk_noncoherent_errors_np
        )
        return int(
            fn(
                draws["sym"],
                draws["h_re"],
                draws["h_im"],
                draws["w_re"],
                draws["w_im"],
                params["cos_tbl"],
                params["sin_tbl"],
                params["alpha"],
                params["d_coeff"],
                params["tau"],
            )
        )
    if scheme is Scheme.OOPSK:
        fn = (
            _kernels.oopsk_coherent_errors_jit
            if jit
            else _kernels.oopsk_coherent_errors_np
        )
        return int(
            fn(
                draws["sym"],
                draws["r"],
                draws["cph"],
                draws["sph"],
                draws["w_re"],
                draws["w_im"],
                params["cos_tbl"],
                params["sin_tbl"],
                params["alpha"],
                params["log_ratio"],
                tau_scale,
                params["full_duty"],
            )
        )
    if not coherent:
        fn = (
            _kernels.oofsk_noncoherent_errors_jit
            if jit
            else _kernels.oofsk_noncoherent_errors_np
        )
        return int(
            fn(
                draws["sym"],
                draws["h_re"],
                draws["h_im"],
                draws["w"],
                params["alpha"],
                params["tau"],
            )
        )
    fn = (
        _kernels.oofsk_coherent_errors_jit
        if jit
        else _kernels.oofsk_coherent_errors_np
    )
    return int(
        fn(
            draws["sym"],
            draws["r"],
            draws["cph"],
            draws["sph"],
            draws["w"],
            params["alpha"],
            params["log_ratio"],
            tau_scale,
            params["full_duty"],
        )
    )


def _simulation_params(scenario: Scenario, tau_scale: float) -> Dict[str, object]:
    modulation = scenario.modulation
    fading = scenario.fading
    M = modulation.M
    nu = modulation.nu
    alpha = scenario.operating_point.alpha
    full_duty = nu == 1.0
    params: Dict[str, object] = {"alpha": alpha, "full_duty": full_duty}
    if modulation.scheme is Scheme.OOPSK:
        params["cos_tbl"] = np.cos(modulation.phases)
        params["sin_tbl"] = np.sin(modulation.phases)
    coherent = fading.regime is Regime.COHERENT
    if coherent:
        # the per-sample threshold needs only the prior log-odds
        params["log_ratio"] = (
            0.0 if full_duty else math.log(M * (1.0 - nu) / nu)
        )
    elif modulation.scheme is Scheme.OOPSK:
        params["d_coeff"] = 2.0 * fading.d_mag / (alpha * fading.gamma2)
        params["tau"] = (
            -math.inf
            if full_duty
            else oopsk_noncoherent_threshold(alpha, fading.d_mag, fading.gamma2, M, nu)
            * tau_scale
        )
    else:
        params["tau"] = (
            -math.inf
            if full_duty
            else oofsk_noncoherent_threshold(alpha, fading.d_mag, fading.gamma2, M, nu)
            * tau_scale
        )
    return params


def simulate(
    scenario: Scenario,
    trials: int,
    seed: int,
    workers: int = 1,
    noise_scale: float = 1.0,
    tau_scale: float = 1.0,
) -> SimulationResult:
    """Estimate the symbol error probability by direct simulation.

    The result is fully determined by (scenario, trials, seed, noise_scale,
    tau_scale): neither the worker count nor the backend changes it.
    """
    if not isinstance(trials, (int, np.integer)) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    if not isinstance(seed, (int, np.integer)) or not (0 <= seed < 2**64):
        raise DomainError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    if not isinstance(workers, (int, np.integer)) or workers < 1:
        raise DomainError(f"workers must be a positive integer, got {workers!r}")
    if math.isnan(noise_scale) or noise_scale < 0.0:
        raise DomainError(f"noise_scale must be >= 0, got {noise_scale!r}")
    if math.isnan(tau_scale) or tau_scale <= 0.0 or math.isinf(tau_scale):
        raise DomainError(f"tau_scale must be positive and finite, got {tau_scale!r}")

    backend = get_backend()
    params = _simulation_params(scenario, tau_scale)
    trials = int(trials)
    n_chunks = (trials + CHUNK_SIZE - 1) // CHUNK_SIZE

    def run(chunk_index: int) -> int:
        n = min(CHUNK_SIZE, trials - chunk_index * CHUNK_SIZE)
        return _count_chunk(
            scenario, int(seed), chunk_index, n, noise_scale, tau_scale, backend, params
        )

    if workers == 1 or n_chunks == 1:
        errors = sum(run(ci) for ci in range(n_chunks))
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            errors = sum(pool.map(run, range(n_chunks)))

    pe = errors / trials
    stderr = math.sqrt(pe * (1.0 - pe) / trials)
    _logger.debug(
        "simulated %d trials (seed=%d, backend=%s): %d errors, pe=%.3e",
        trials,
        seed,
        backend,
        errors,
        pe,
    )
    return SimulationResult(
        errors=int(errors), trials=trials, pe=pe, stderr=stderr, seed=int(seed)
    )
