"""Tests for the four MAP decision rules.

The load-bearing checks are the posterior-oracle equivalences: each detector
is compared, on >= 1e5 random observations, against a brute-force argmax of
prior times likelihood computed directly from the conditional densities of
the channel model.  The detectors implement algebraically reduced forms of
those posteriors, so exact index agreement is required.
"""

import math

import numpy as np
import pytest

from peakysim.detectors import (
    oofsk_coherent_detect,
    oofsk_coherent_threshold,
    oofsk_noncoherent_detect,
    oofsk_noncoherent_threshold,
    oopsk_coherent_detect,
    oopsk_coherent_threshold,
    oopsk_noncoherent_detect,
    oopsk_noncoherent_threshold,
)
from peakysim.specfun import DomainError, log_i0

N_ORACLE = 100_000


def _posterior_argmax(log_posteriors: np.ndarray) -> np.ndarray:
    """Argmax over hypothesis columns with lowest-index tie-break."""
    return np.argmax(log_posteriors, axis=1)


def _assert_map_equivalent(got: np.ndarray, log_post: np.ndarray) -> None:
    """The detector must return an index attaining the posterior maximum.

    Where the maximizer is unique this forces exact agreement with the
    posterior argmax.  Columns can tie exactly (all signal hypotheses share
    one density when the fading mean vanishes), in which case any maximizer
    is MAP-optimal and the detector's own deterministic tie-break is
    accepted; silence vs. signal must still match exactly because that
    comparison is strict.
    """
    n = log_post.shape[0]
    expected = _posterior_argmax(log_post)
    best = log_post[np.arange(n), expected]
    attained = log_post[np.arange(n), got]
    assert np.array_equal(attained, best)
    assert np.array_equal(got == 0, expected == 0)


class TestOopskCoherentThreshold:
    def test_balanced_prior_point(self):
        # nu = M/(M+1) makes the prior odds 1 and the log term vanish.
        M = 4
        nu = M / (M + 1)
        tau = oopsk_coherent_threshold(2.0, 1.5, M, nu)
        assert tau == pytest.approx(2.0 * 1.5 / 2.0, rel=1e-12)

    def test_full_duty_is_psk(self):
        assert oopsk_coherent_threshold(1.0, 1.0, 8, 1.0) == 0.0

    def test_degenerate_gain_limits(self):
        assert math.isinf(oopsk_coherent_threshold(1e-15, 1.0, 4, 0.3))
        assert oopsk_coherent_threshold(1e-15, 1.0, 4, 0.9) == 0.0

    def test_monotone_in_nu(self):
        nus = np.linspace(0.05, 1.0, 20)
        taus = [oopsk_coherent_threshold(1.0, 1.0, 4, nu) for nu in nus]
        assert np.all(np.diff(taus) <= 1e-12)


class TestOopskCoherentDetect:
    def test_zero_observation_is_silence(self):
        assert oopsk_coherent_detect(0.0 + 0.0j, 1.0 + 0.0j, 1.0, 4, 0.3) == 0

    def test_dominant_projection(self):
        M, alpha = 8, 1.0
        h = 0.7 + 0.4j
        theta3 = 2.0 * np.pi * 2 / M  # index 3 uses phase theta_{i=3}
        y = 10.0 * alpha * h * np.exp(1j * theta3)
        assert oopsk_coherent_detect(y, h, alpha, M, 0.5) == 3

    def test_full_duty_never_silent(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            y = complex(*rng.normal(size=2)) * rng.uniform(0.01, 3.0)
            h = complex(*rng.normal(size=2))
            if h == 0:
                continue
            assert oopsk_coherent_detect(y, h, 1.0, 4, 1.0) != 0

    def test_common_rotation_invariance(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            y = complex(*rng.normal(size=2, scale=2.0))
            h = complex(*rng.normal(size=2))
            if h == 0:
                continue
            rot = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
            d1 = oopsk_coherent_detect(y, h, 1.2, 8, 0.4)
            d2 = oopsk_coherent_detect(y * rot, h * rot, 1.2, 8, 0.4)
            assert d1 == d2

    @pytest.mark.parametrize("M,nu", [(2, 0.5), (4, 0.3), (8, 1.0)])
    def test_posterior_oracle(self, M, nu):
        rng = np.random.default_rng(1000 + M)
        alpha = 1.3
        h = complex(0.9, -0.5)
        n = N_ORACLE
        idx = np.where(
            rng.random(n) < 1.0 - nu, 0, rng.integers(1, M + 1, size=n)
        )
        thetas = 2.0 * np.pi * (idx - 1) / M
        means = np.where(idx > 0, alpha * h * np.exp(1j * thetas), 0.0)
        noise_scale = rng.choice([1.0, 2.5], size=n)  # widen to probe regions
        y = means + noise_scale * (
            rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ) / math.sqrt(2.0)

        # Oracle: argmax_j p_j f(y | s_j, h) from the conditional densities
        # f(y|s_i,h) = (1/pi) exp(-|y - alpha h e^{j theta_i}|^2).
        phases = 2.0 * np.pi * np.arange(M) / M
        centers = alpha * h * np.exp(1j * phases)
        log_post = np.empty((n, M + 1))
        log_post[:, 0] = (
            -np.inf if nu == 1.0 else math.log(1.0 - nu) - np.abs(y) ** 2
        )
        for i in range(M):
            log_post[:, i + 1] = math.log(nu / M) - np.abs(y - centers[i]) ** 2
        got = np.array(
            [oopsk_coherent_detect(complex(v), h, alpha, M, nu) for v in y]
        )
        _assert_map_equivalent(got, log_post)


class TestOofskCoherentThreshold:
    def test_full_duty(self):
        assert oofsk_coherent_threshold(1.0, 1.0, 2, 1.0) == 0.0

    def test_roundtrip_definition(self):
        # tau satisfies I0(2 sqrt(alpha^2 h^2 tau)) = xi whenever xi >= 1.
        alpha, h, M, nu = 1.0, 1.0, 2, 0.5
        tau = oofsk_coherent_threshold(alpha, h, M, nu)
        log_xi = math.log(M * (1.0 - nu) / nu) + (alpha * h) ** 2
        assert log_i0(2.0 * math.sqrt(alpha * alpha * h * h * tau)) == pytest.approx(
            log_xi, rel=1e-9
        )

    def test_explicit_value(self):
        # (M=2, nu=0.5, alpha|h|=1): xi = 2e, tau = [I0^{-1}(2e)]^2 / 4.
        # oracle: mpmath root-find of I0(x) = 2e gives x = 3.1323632980721084.
        tau = oofsk_coherent_threshold(1.0, 1.0, 2, 0.5)
        assert tau == pytest.approx(2.4529249577772941, rel=1e-9)

    def test_subunit_xi_collapses(self):
        # nu close to 1 makes xi < 1 at small gain, so tau = 0.
        assert oofsk_coherent_threshold(0.1, 0.1, 2, 0.9) == 0.0

    def test_monotone_in_nu(self):
        nus = np.linspace(0.05, 1.0, 20)
        taus = [oofsk_coherent_threshold(1.0, 1.0, 4, nu) for nu in nus]
        assert np.all(np.diff(taus) <= 1e-12)

    def test_huge_gain_stays_finite(self):
        # xi overflows any float here; the log-domain path must not.
        tau = oofsk_coherent_threshold(100.0, 1.0, 4, 0.1)
        assert np.isfinite(tau)
        assert tau > 0.0


class TestOofskCoherentDetect:
    def test_all_zero_energies(self):
        assert oofsk_coherent_detect([0.0, 0.0], 1.0, 1.0, 2, 0.5) == 0

    def test_max_exceeds_threshold(self):
        # Threshold at these parameters is ~1.13, between the two energies.
        tau = oofsk_coherent_threshold(1.0, 1.0, 2, 0.5)
        assert 0.1 < tau < 9.0
        assert oofsk_coherent_detect([0.1, 9.0], 1.0, 1.0, 2, 0.5) == 2

    def test_single_bin_on_off(self):
        tau = oofsk_coherent_threshold(1.0, 1.5, 1, 0.4)
        assert oofsk_coherent_detect([tau * 1.01], 1.5, 1.0, 1, 0.4) == 1
        assert oofsk_coherent_detect([tau * 0.99], 1.5, 1.0, 1, 0.4) == 0

    @pytest.mark.parametrize("M,nu", [(2, 0.5), (4, 0.2), (8, 1.0)])
    def test_posterior_oracle(self, M, nu):
        rng = np.random.default_rng(2000 + M)
        alpha, h = 1.2, 0.8
        n = N_ORACLE
        idx = np.where(
            rng.random(n) < 1.0 - nu, 0, rng.integers(1, M + 1, size=n)
        )
        noise = (
            rng.standard_normal((n, M)) + 1j * rng.standard_normal((n, M))
        ) / math.sqrt(2.0)
        signal = np.zeros((n, M), dtype=complex)
        on = idx > 0
        signal[np.arange(n)[on], idx[on] - 1] = alpha * h
        R = np.abs(signal + noise) ** 2

        # Oracle: log f(R|s_i) - log f(R|s_0) = -alpha^2 h^2 + ln I0(2 alpha h sqrt(R_i)),
        # from the joint density (noncentral chi-square in bin i, exponential
        # elsewhere).
        gain2 = (alpha * h) ** 2
        delta = -gain2 + log_i0(2.0 * alpha * h * np.sqrt(R))
        log_post = np.empty((n, M + 1))
        log_post[:, 0] = -np.inf if nu == 1.0 else math.log(1.0 - nu)
        log_post[:, 1:] = math.log(nu / M) + delta
        got = np.array(
            [oofsk_coherent_detect(R[k], h, alpha, M, nu) for k in range(n)]
        )
        _assert_map_equivalent(got, log_post)


class TestOopskNoncoherentThreshold:
    def test_low_snr_divergence(self):
        tau_small = oopsk_noncoherent_threshold(1e-6, 0.5, 0.5, 4, 0.3)
        assert tau_small > 1e10

    def test_high_snr_divergence(self):
        taus = [
            oopsk_noncoherent_threshold(a, 0.5, 0.5, 4, 0.3)
            for a in (10.0, 100.0, 1000.0)
        ]
        assert taus[0] < taus[1] < taus[2]
        assert taus[2] > 2.0 * math.log(1000.0)

    def test_monotone_in_nu(self):
        nus = np.linspace(0.05, 1.0, 20)
        taus = [oopsk_noncoherent_threshold(1.0, 0.7, 0.51, 4, nu) for nu in nus]
        assert np.all(np.diff(taus) <= 1e-12)

    def test_rejects_pure_los(self):
        with pytest.raises(DomainError):
            oopsk_noncoherent_threshold(1.0, 1.0, 0.0, 4, 0.5)


class TestOopskNoncoherentDetect:
    def test_zero_observation_is_silence(self):
        assert oopsk_noncoherent_detect(0.0 + 0.0j, 1.0, 0.5, 0.5, 4, 0.3) == 0

    def test_rayleigh_reduces_to_energy_plus_phase(self):
        # d = 0 removes the linear term: silence iff |y|^2 <= tau.
        alpha, gamma2, M, nu = 1.5, 1.0, 4, 0.3
        tau = oopsk_noncoherent_threshold(alpha, 0.0, gamma2, M, nu)
        r_in = math.sqrt(tau) * 0.99
        r_out = math.sqrt(tau) * 1.01
        assert oopsk_noncoherent_detect(r_in + 0.0j, alpha, 0.0, gamma2, M, nu) == 0
        assert oopsk_noncoherent_detect(r_out + 0.0j, alpha, 0.0, gamma2, M, nu) == 1

    def test_full_duty_never_silent(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            y = complex(*rng.normal(size=2, scale=1.5))
            assert oopsk_noncoherent_detect(y, 1.0, 0.7, 0.51, 4, 1.0) != 0

    @pytest.mark.parametrize(
        "M,nu,d_mag,gamma2",
        [(2, 0.5, 0.7, 0.51), (4, 0.3, 0.0, 1.0), (8, 0.1, 0.953, 0.0909), (4, 1.0, 0.7, 0.51)],
    )
    def test_posterior_oracle(self, M, nu, d_mag, gamma2):
        rng = np.random.default_rng(3000 + M)
        alpha = 1.4
        a2g2 = alpha * alpha * gamma2
        n = N_ORACLE
        idx = np.where(
            rng.random(n) < 1.0 - nu, 0, rng.integers(1, M + 1, size=n)
        )
        thetas = 2.0 * np.pi * (idx - 1) / M
        h = d_mag + math.sqrt(gamma2 / 2.0) * (
            rng.standard_normal(n) + 1j * rng.standard_normal(n)
        )
        means = np.where(idx > 0, alpha * h * np.exp(1j * thetas), 0.0)
        y = means + (
            rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ) / math.sqrt(2.0)

        # Oracle densities: y|s_i ~ CN(alpha d e^{j theta_i}, 1 + alpha^2 gamma^2),
        # y|s_0 ~ CN(0, 1).
        phases = 2.0 * np.pi * np.arange(M) / M
        centers = alpha * d_mag * np.exp(1j * phases)
        var_on = 1.0 + a2g2
        log_post = np.empty((n, M + 1))
        log_post[:, 0] = (
            -np.inf if nu == 1.0 else math.log(1.0 - nu) - np.abs(y) ** 2
        )
        for i in range(M):
            log_post[:, i + 1] = (
                math.log(nu / M)
                - np.abs(y - centers[i]) ** 2 / var_on
                - math.log(var_on)
            )
        got = np.array(
            [
                oopsk_noncoherent_detect(complex(v), alpha, d_mag, gamma2, M, nu)
                for v in y
            ]
        )
        _assert_map_equivalent(got, log_post)


class TestOofskNoncoherentThreshold:
    def test_full_duty(self):
        assert oofsk_noncoherent_threshold(1.0, 0.5, 0.5, 2, 1.0) == 0.0

    def test_rayleigh_closed_form(self):
        alpha, gamma2, M, nu = 1.3, 0.8, 4, 0.2
        a2g2 = alpha * alpha * gamma2
        log_xi = math.log(M * (1.0 - nu) / nu) + math.log1p(a2g2)
        expected = (1.0 + a2g2) / a2g2 * log_xi
        assert oofsk_noncoherent_threshold(alpha, 0.0, gamma2, M, nu) == pytest.approx(
            expected, rel=1e-12
        )

    def test_root_finder_matches_rayleigh_limit(self):
        # The generic log-domain root-finder (d > 0) must approach the
        # closed-form Rayleigh inversion as d -> 0.
        alpha, gamma2, M, nu = 1.3, 0.8, 4, 0.2
        closed = oofsk_noncoherent_threshold(alpha, 0.0, gamma2, M, nu)
        near = oofsk_noncoherent_threshold(alpha, 1e-8, gamma2, M, nu)
        assert near == pytest.approx(closed, rel=1e-6)

    def test_roundtrip_definition(self):
        alpha, d_mag, gamma2, M, nu = 1.1, 0.9, 0.6, 4, 0.3
        a_term = alpha * alpha * gamma2
        b_term = alpha * alpha * d_mag * d_mag
        tau = oofsk_noncoherent_threshold(alpha, d_mag, gamma2, M, nu)
        log_phi = a_term * tau / (1.0 + a_term) + log_i0(
            2.0 * math.sqrt(tau * b_term) / (1.0 + a_term)
        )
        log_xi = (
            math.log(M * (1.0 - nu) / nu)
            + math.log1p(a_term)
            + b_term / (1.0 + a_term)
        )
        assert log_phi == pytest.approx(log_xi, rel=1e-12)

    def test_logarithmic_growth(self):
        # tau grows like 2 ln alpha for large alpha: consecutive decades add
        # about 2 ln 10.
        taus = [
            oofsk_noncoherent_threshold(a, 0.7, 0.51, 4, 0.3)
            for a in (1e2, 1e3, 1e4)
        ]
        step = 2.0 * math.log(10.0)
        assert taus[1] - taus[0] == pytest.approx(step, abs=0.1)
        assert taus[2] - taus[1] == pytest.approx(step, abs=0.1)

    def test_monotone_in_nu(self):
        nus = np.linspace(0.05, 1.0, 20)
        taus = [oofsk_noncoherent_threshold(1.0, 0.7, 0.51, 4, nu) for nu in nus]
        assert np.all(np.diff(taus) <= 1e-12)


class TestOofskNoncoherentDetect:
    def test_all_below_threshold(self):
        tau = oofsk_noncoherent_threshold(1.0, 0.5, 0.5, 4, 0.3)
        R = np.full(4, tau * 0.9)
        assert oofsk_noncoherent_detect(R, 1.0, 0.5, 0.5, 4, 0.3) == 0

    def test_single_bin_on_off(self):
        tau = oofsk_noncoherent_threshold(1.0, 0.5, 0.5, 1, 0.4)
        assert oofsk_noncoherent_detect([tau * 1.01], 1.0, 0.5, 0.5, 1, 0.4) == 1
        assert oofsk_noncoherent_detect([tau * 0.99], 1.0, 0.5, 0.5, 1, 0.4) == 0

    @pytest.mark.parametrize(
        "M,nu,d_mag,gamma2",
        [(2, 0.5, 0.0, 1.0), (4, 0.2, 0.953, 0.0909), (8, 1.0, 0.5, 0.5)],
    )
    def test_posterior_oracle(self, M, nu, d_mag, gamma2):
        rng = np.random.default_rng(4000 + M)
        alpha = 1.2
        a_term = alpha * alpha * gamma2
        b_term = alpha * alpha * d_mag * d_mag
        n = N_ORACLE
        idx = np.where(
            rng.random(n) < 1.0 - nu, 0, rng.integers(1, M + 1, size=n)
        )
        h = d_mag + math.sqrt(gamma2 / 2.0) * (
            rng.standard_normal(n) + 1j * rng.standard_normal(n)
        )
        noise = (
            rng.standard_normal((n, M)) + 1j * rng.standard_normal((n, M))
        ) / math.sqrt(2.0)
        signal = np.zeros((n, M), dtype=complex)
        on = idx > 0
        signal[np.arange(n)[on], idx[on] - 1] = alpha * h[on]
        R = np.abs(signal + noise) ** 2

        # Oracle: log f(R|s_i) - log f(R|s_0)
        #   = R_i - (R_i + B)/(1+A) - ln(1+A) + ln I0(2 sqrt(R_i B)/(1+A)).
        delta = (
            R
            - (R + b_term) / (1.0 + a_term)
            - math.log1p(a_term)
            + log_i0(2.0 * np.sqrt(R * b_term) / (1.0 + a_term))
        )
        log_post = np.empty((n, M + 1))
        log_post[:, 0] = -np.inf if nu == 1.0 else math.log(1.0 - nu)
        log_post[:, 1:] = math.log(nu / M) + delta
        got = np.array(
            [
                oofsk_noncoherent_detect(R[k], alpha, d_mag, gamma2, M, nu)
                for k in range(n)
            ]
        )
        _assert_map_equivalent(got, log_post)
