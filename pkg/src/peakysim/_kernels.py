"""Error-counting kernels for the link simulator.

Every kernel exists twice: a JIT-compiled scalar loop and a vectorized
NumPy twin.  The two are kept bit-compatible so simulation results are
identical whichever backend runs:

* every random draw (uniforms, normals, channel magnitudes, carrier
  phases) is prepared once in NumPy and handed to both backends;
* kernels use only IEEE-exact float64 arithmetic (+, -, *, /, sqrt,
  comparisons) in the same per-sample order as their twin;
* the one transcendental needed inside a kernel - log I0 for the
  energy-detection threshold rule under a known channel - is provided as a
  hand-rolled fixed-iteration series/asymptotic pair whose scalar and
  array versions execute identical operation sequences.

fastmath stays off so the compiler cannot contract or reorder float
operations away from the NumPy twin.
"""

from __future__ import annotations

import math

import numpy as np

try:  # pragma: no cover - exercised implicitly by backend selection
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(**_kwargs):
        def decorate(func):
            return func

        return decorate


JIT_OPTIONS = dict(nogil=True, cache=True)

# Decisions against near-zero channel gains follow the same degenerate
# branch as the threshold formulas.
_DEGENERATE_GAIN = 1e-12

_TWO_PI = 2.0 * math.pi
# Switch point between the power series and the asymptotic expansion of
# log I0; at 18 the six-term tail is accurate to ~3e-9 and the series
# needs 48 terms for full precision.
_I0_SWITCH = 18.0
_I0_SERIES_TERMS = 48
# Asymptotic coefficients ((2k-1)!!)^2 / (k! 8^k) - all exactly
# representable dyadic rationals.
_A1 = 1.0 / 8.0
_A2 = 9.0 / 128.0
_A3 = 75.0 / 1024.0
_A4 = 3675.0 / 32768.0
_A5 = 59535.0 / 262144.0
_A6 = 2401245.0 / 4194304.0


@njit(**JIT_OPTIONS)
def _log_i0_scalar(x: float) -> float:
    """log I0(x) for x >= 0 via fixed-order series / asymptotic tail."""
    if x <= _I0_SWITCH:
        t = 0.25 * x * x
        total = 1.0
        term = 1.0
        for k in range(1, _I0_SERIES_TERMS + 1):
            term = term * (t / (k * k))
            total = total + term
        return math.log(total)
    r = 1.0 / x
    p = r * (_A1 + r * (_A2 + r * (_A3 + r * (_A4 + r * (_A5 + r * _A6)))))
    return x - 0.5 * math.log(_TWO_PI * x) + math.log1p(p)


def _log_i0_array(x: np.ndarray) -> np.ndarray:
    """Vectorized twin of _log_i0_scalar with identical operation order."""
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        t = 0.25 * x * x
        total = np.ones_like(x)
        term = np.ones_like(x)
        for k in range(1, _I0_SERIES_TERMS + 1):
            term = term * (t / (k * k))
            total = total + term
        series = np.log(total)
        r = 1.0 / x
        p = r * (_A1 + r * (_A2 + r * (_A3 + r * (_A4 + r * (_A5 + r * _A6)))))
        asym = x - 0.5 * np.log(_TWO_PI * x) + np.log1p(p)
    return np.where(x <= _I0_SWITCH, series, asym)


# ---------------------------------------------------------------------------
# Phase keying, noncoherent
# ---------------------------------------------------------------------------


@njit(**JIT_OPTIONS)
def oopsk_noncoherent_errors_jit(
    sym, h_re, h_im, w_re, w_im, cos_tbl, sin_tbl, alpha, d_coeff, tau
):
    n = sym.shape[0]
    m = cos_tbl.shape[0]
    errors = 0
    for t in range(n):
        s = sym[t]
        if s > 0:
            ct = cos_tbl[s - 1]
            st = sin_tbl[s - 1]
            y_re = alpha * (h_re[t] * ct - h_im[t] * st) + w_re[t]
            y_im = alpha * (h_re[t] * st + h_im[t] * ct) + w_im[t]
        else:
            y_re = w_re[t]
            y_im = w_im[t]
        best = 0
        best_proj = y_re * cos_tbl[0] + y_im * sin_tbl[0]
        for i in range(1, m):
            proj = y_re * cos_tbl[i] + y_im * sin_tbl[i]
            if proj > best_proj:
                best_proj = proj
                best = i
        stat = y_re * y_re + y_im * y_im + d_coeff * best_proj
        decision = best + 1 if stat > tau else 0
        if decision != s:
            errors += 1
    return errors


def oopsk_noncoherent_errors_np(
    sym, h_re, h_im, w_re, w_im, cos_tbl, sin_tbl, alpha, d_coeff, tau
):
    on = sym > 0
    idx = np.maximum(sym - 1, 0)
    ct = np.where(on, cos_tbl[idx], 0.0)
    st = np.where(on, sin_tbl[idx], 0.0)
    gain = np.where(on, alpha, 0.0)
    y_re = gain * (h_re * ct - h_im * st) + w_re
    y_im = gain * (h_re * st + h_im * ct) + w_im
    proj = y_re[:, None] * cos_tbl[None, :] + y_im[:, None] * sin_tbl[None, :]
    best = np.argmax(proj, axis=1)
    best_proj = proj[np.arange(sym.shape[0]), best]
    stat = y_re * y_re + y_im * y_im + d_coeff * best_proj
    decision = np.where(stat > tau, best + 1, 0)
    return int(np.count_nonzero(decision != sym))


# ---------------------------------------------------------------------------
# Phase keying, coherent
# ---------------------------------------------------------------------------


@njit(**JIT_OPTIONS)
def oopsk_coherent_errors_jit(
    sym,
    r,
    cph,
    sph,
    w_re,
    w_im,
    cos_tbl,
    sin_tbl,
    alpha,
    log_ratio,
    tau_scale,
    full_duty,
):
    n = sym.shape[0]
    m = cos_tbl.shape[0]
    errors = 0
    for t in range(n):
        s = sym[t]
        if s > 0:
            # carrier at channel phase plus the symbol phase
            ct = cph[t] * cos_tbl[s - 1] - sph[t] * sin_tbl[s - 1]
            st = cph[t] * sin_tbl[s - 1] + sph[t] * cos_tbl[s - 1]
            y_re = alpha * r[t] * ct + w_re[t]
            y_im = alpha * r[t] * st + w_im[t]
        else:
            y_re = w_re[t]
            y_im = w_im[t]
        # receiver derotates by the known channel phase
        z_re = y_re * cph[t] + y_im * sph[t]
        z_im = y_im * cph[t] - y_re * sph[t]
        best = 0
        best_proj = z_re * cos_tbl[0] + z_im * sin_tbl[0]
        for i in range(1, m):
            proj = z_re * cos_tbl[i] + z_im * sin_tbl[i]
            if proj > best_proj:
                best_proj = proj
                best = i
        if full_duty:
            decision = best + 1
        else:
            gain = alpha * r[t]
            if gain < _DEGENERATE_GAIN:
                tau = math.inf if log_ratio > 0.0 else 0.0
            else:
                tau = 0.5 * gain + log_ratio / (2.0 * gain)
                if tau < 0.0:
                    tau = 0.0
            decision = best + 1 if best_proj > tau * tau_scale else 0
        if decision != s:
            errors += 1
    return errors


def oopsk_coherent_errors_np(
    sym,
    r,
    cph,
    sph,
    w_re,
    w_im,
    cos_tbl,
    sin_tbl,
    alpha,
    log_ratio,
    tau_scale,
    full_duty,
):
    on = sym > 0
    idx = np.maximum(sym - 1, 0)
    cs = cos_tbl[idx]
    ss = sin_tbl[idx]
    ct = cph * cs - sph * ss
    st = cph * ss + sph * cs
    gain_tx = np.where(on, alpha, 0.0) * r
    y_re = gain_tx * ct + w_re
    y_im = gain_tx * st + w_im
    z_re = y_re * cph + y_im * sph
    z_im = y_im * cph - y_re * sph
    proj = z_re[:, None] * cos_tbl[None, :] + z_im[:, None] * sin_tbl[None, :]
    best = np.argmax(proj, axis=1)
    best_proj = proj[np.arange(sym.shape[0]), best]
    if full_duty:
        decision = best + 1
    else:
        gain = alpha * r
        with np.errstate(divide="ignore"):
            tau = 0.5 * gain + log_ratio / (2.0 * gain)
        tau = np.maximum(tau, 0.0)
        degenerate = math.inf if log_ratio > 0.0 else 0.0
        tau = np.where(gain < _DEGENERATE_GAIN, degenerate, tau)
        decision = np.where(best_proj > tau * tau_scale, best + 1, 0)
    return int(np.count_nonzero(decision != sym))


# ---------------------------------------------------------------------------
# Energy detection, noncoherent
# ---------------------------------------------------------------------------


@njit(**JIT_OPTIONS)
def oofsk_noncoherent_errors_jit(sym, h_re, h_im, w, alpha, tau):
    n = sym.shape[0]
    m = w.shape[1] // 2
    errors = 0
    for t in range(n):
        s = sym[t]
        best = 0
        best_energy = -1.0
        for i in range(m):
            a_re = alpha * h_re[t] if s == i + 1 else 0.0
            a_im = alpha * h_im[t] if s == i + 1 else 0.0
            b_re = w[t, 2 * i] + a_re
            b_im = w[t, 2 * i + 1] + a_im
            energy = b_re * b_re + b_im * b_im
            if energy > best_energy:
                best_energy = energy
                best = i
        decision = best + 1 if best_energy > tau else 0
        if decision != s:
            errors += 1
    return errors


def oofsk_noncoherent_errors_np(sym, h_re, h_im, w, alpha, tau):
    n = sym.shape[0]
    m = w.shape[1] // 2
    rows = np.arange(n)
    a_re = np.zeros((n, m))
    a_im = np.zeros((n, m))
    on = sym > 0
    a_re[rows[on], sym[on] - 1] = alpha * h_re[on]
    a_im[rows[on], sym[on] - 1] = alpha * h_im[on]
    b_re = w[:, 0::2] + a_re
    b_im = w[:, 1::2] + a_im
    energy = b_re * b_re + b_im * b_im
    best = np.argmax(energy, axis=1)
    best_energy = energy[rows, best]
    decision = np.where(best_energy > tau, best + 1, 0)
    return int(np.count_nonzero(decision != sym))


# ---------------------------------------------------------------------------
# Energy detection, coherent
# ---------------------------------------------------------------------------


@njit(**JIT_OPTIONS)
def oofsk_coherent_errors_jit(
    sym, r, cph, sph, w, alpha, log_ratio, tau_scale, full_duty
):
    n = sym.shape[0]
    m = w.shape[1] // 2
    errors = 0
    for t in range(n):
        s = sym[t]
        amp_re = alpha * r[t] * cph[t]
        amp_im = alpha * r[t] * sph[t]
        best = 0
        best_energy = -1.0
        for i in range(m):
            a_re = amp_re if s == i + 1 else 0.0
            a_im = amp_im if s == i + 1 else 0.0
            b_re = w[t, 2 * i] + a_re
            b_im = w[t, 2 * i + 1] + a_im
            energy = b_re * b_re + b_im * b_im
            if energy > best_energy:
                best_energy = energy
                best = i
        if full_duty:
            decision = best + 1
        else:
            gain = alpha * r[t]
            if gain < _DEGENERATE_GAIN:
                decision = 0 if log_ratio > 0.0 else best + 1
            else:
                # best_energy > tau * tau_scale with tau the Bessel-inverse
                # threshold is equivalent, by monotonicity of I0, to
                # log I0(2 gain sqrt(best_energy / tau_scale)) exceeding
                # log_ratio + gain^2; this needs no per-sample inversion.
                arg = 2.0 * gain * math.sqrt(best_energy / tau_scale)
                on_side = _log_i0_scalar(arg) > log_ratio + gain * gain
                decision = best + 1 if on_side else 0
        if decision != s:
            errors += 1
    return errors


def oofsk_coherent_errors_np(
    sym, r, cph, sph, w, alpha, log_ratio, tau_scale, full_duty
):
    n = sym.shape[0]
    m = w.shape[1] // 2
    rows = np.arange(n)
    amp_re = alpha * r * cph
    amp_im = alpha * r * sph
    a_re = np.zeros((n, m))
    a_im = np.zeros((n, m))
    on = sym > 0
    a_re[rows[on], sym[on] - 1] = amp_re[on]
    a_im[rows[on], sym[on] - 1] = amp_im[on]
    b_re = w[:, 0::2] + a_re
    b_im = w[:, 1::2] + a_im
    energy = b_re * b_re + b_im * b_im
    best = np.argmax(energy, axis=1)
    best_energy = energy[rows, best]
    if full_duty:
        decision = best + 1
    else:
        gain = alpha * r
        arg = 2.0 * gain * np.sqrt(best_energy / tau_scale)
        on_side = _log_i0_array(arg) > log_ratio + gain * gain
        degenerate = gain < _DEGENERATE_GAIN
        if log_ratio > 0.0:
            on_side = np.where(degenerate, False, on_side)
        else:
            on_side = np.where(degenerate, True, on_side)
        decision = np.where(on_side, best + 1, 0)
    return int(np.count_nonzero(decision != sym))
