"""Tests for the exact error probability formulas.

Oracles: textbook closed forms for the binary full-duty special cases
(antipodal and orthogonal signalling), the exponential-order statistics of
energy detection over Rayleigh fading, limit behaviour at vanishing and
diverging SNR, and cross-checks between alternating-sum and
single-integral evaluations of the same probability.  Regression pins were
frozen after the implementation was arbitrated against direct 2e6-sample
simulations of the detector semantics (max |z| comfortably inside the
sampling band).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peakysim.analytic import (
    ErrorProbabilityBreakdown,
    _pc_s1_oofsk_coherent_integral,
    _pc_s1_oofsk_coherent_sum,
    _pc_s1_oofsk_noncoherent_integral,
    _pc_s1_oofsk_noncoherent_sum,
    average_breakdown_over_fading,
    average_over_fading,
    error_probability,
    oopsk_noncoherent_error_floor,
    pe_oofsk_coherent_given_h,
    pe_oofsk_noncoherent,
    pe_oopsk_coherent_given_h,
    pe_oopsk_noncoherent,
)
from peakysim.detectors import oofsk_noncoherent_threshold
from peakysim.model import FadingSpec, Regime, Scenario
from peakysim.specfun import DEFAULT_TOL, DomainError, NumericError, gaussian_q

SQRT2 = math.sqrt(2.0)


def _assert_breakdown_consistent(b: ErrorProbabilityBreakdown, nu: float) -> None:
    assert 0.0 <= b.pe <= 1.0
    assert 0.0 <= b.pc_s0 <= 1.0
    assert 0.0 <= b.pc_s1 <= 1.0
    assert b.pe == pytest.approx(
        1.0 - ((1.0 - nu) * b.pc_s0 + nu * b.pc_s1), abs=1e-12
    )
    if nu == 1.0:
        assert b.pc_s0 == 1.0


class TestBreakdownType:
    def test_identity_holds_by_construction(self):
        b = ErrorProbabilityBreakdown.from_conditionals(0.3, 0.9, 0.8)
        assert b.pe == pytest.approx(1.0 - (0.7 * 0.9 + 0.3 * 0.8), abs=1e-15)

    def test_full_duty_pins_pc_s0_to_one(self):
        b = ErrorProbabilityBreakdown.from_conditionals(1.0, 0.0, 0.75)
        assert b.pc_s0 == 1.0
        assert b.pe == pytest.approx(0.25, abs=1e-15)

    def test_tiny_negative_roundoff_is_clipped(self):
        b = ErrorProbabilityBreakdown.from_conditionals(0.5, -1e-12, 1.0)
        assert b.pc_s0 == 0.0

    def test_gross_violations_are_rejected(self):
        with pytest.raises(NumericError):
            ErrorProbabilityBreakdown.from_conditionals(0.5, 1.2, 0.5)
        with pytest.raises(DomainError):
            ErrorProbabilityBreakdown(pe=-0.1, pc_s0=0.5, pc_s1=0.5)


class TestCoherentPhaseKeying:
    def test_full_duty_binary_is_antipodal_signalling(self):
        # nu = 1, M = 2 is BPSK with amplitude alpha|h| against unit-variance
        # complex noise: pe = Q(sqrt(2) alpha |h|).
        for alpha, h in [(1.0, 1.0), (1.7, 1.3), (0.4, 2.5), (3.0, 0.2)]:
            b = pe_oopsk_coherent_given_h(h, alpha, 2, 1.0)
            assert b.pe == pytest.approx(
                float(gaussian_q(SQRT2 * alpha * h)), abs=1e-10
            )
            _assert_breakdown_consistent(b, 1.0)

    def test_vanishing_gain_forces_silence_decision(self):
        # With nu < M/(M+1) the threshold diverges as the gain vanishes:
        # the receiver always declares silence, so pe -> nu.
        b = pe_oopsk_coherent_given_h(1.0, 1e-300, 4, 0.1)
        assert b.pc_s0 == 1.0
        assert b.pc_s1 == 0.0
        assert b.pe == pytest.approx(0.1, abs=1e-15)

    def test_zero_threshold_signal_side_is_sector_mass(self):
        # nu >= M/(M+1) with vanishing gain gives tau = 0 and the correct
        # decision reduces to landing in the right sector: probability 1/M.
        b = pe_oopsk_coherent_given_h(1e-300, 1.0, 2, 0.9)
        assert b.pc_s1 == pytest.approx(0.5, abs=1e-10)
        assert b.pc_s0 == 0.0

    def test_error_decreasesing_in_channel_gain(self):
        pes = [
            pe_oopsk_coherent_given_h(h, 1.5, 8, 0.4).pe
            for h in (0.2, 0.5, 1.0, 2.0, 4.0)
        ]
        assert all(a > b for a, b in zip(pes, pes[1:]))

    @pytest.mark.parametrize(
        "alpha,h,M,nu,pe,pc_s0,pc_s1",
        [
            (1.0, 1.0, 4, 0.3, 0.27377251862972596, 0.956043330638806, 0.18999049974369953),
            (2.0, 0.8, 8, 0.5, 0.33288301758393557, 0.8904850427146053, 0.4437489221175236),
            (1.5, 1.2, 2, 0.9, 0.07759493449126798, 0.504719822225996, 0.9688145369845915),
        ],
    )
    def test_regression_pins(self, alpha, h, M, nu, pe, pc_s0, pc_s1):
        b = pe_oopsk_coherent_given_h(h, alpha, M, nu)
        assert b.pe == pytest.approx(pe, rel=1e-9)
        assert b.pc_s0 == pytest.approx(pc_s0, rel=1e-9)
        assert b.pc_s1 == pytest.approx(pc_s1, rel=1e-9)


class TestCoherentEnergyDetection:
    def test_full_duty_binary_is_orthogonal_signalling(self):
        # nu = 1, M = 2 energy detection at gain g errs with probability
        # exp(-g^2/2)/2, the classic binary orthogonal result.
        for alpha, h in [(1.0, 1.0), (1.7, 1.3), (2.5, 0.6)]:
            g = alpha * h
            b = pe_oofsk_coherent_given_h(h, alpha, 2, 1.0)
            assert b.pe == pytest.approx(0.5 * math.exp(-0.5 * g * g), abs=1e-10)
            _assert_breakdown_consistent(b, 1.0)

    def test_vanishing_gain_forces_silence_decision(self):
        b = pe_oofsk_coherent_given_h(1.0, 1e-300, 4, 0.1)
        assert b.pc_s0 == 1.0
        assert b.pc_s1 == 0.0
        assert b.pe == pytest.approx(0.1, abs=1e-15)

    @pytest.mark.parametrize("M", [2, 4, 8, 16])
    def test_sum_and_integral_forms_agree(self, M):
        for tau, gain in [(0.5, 1.0), (2.0, 2.0), (5.0, 0.7), (1.0, 4.0)]:
            s = _pc_s1_oofsk_coherent_sum(tau, gain, M)
            q = _pc_s1_oofsk_coherent_integral(tau, gain, M, DEFAULT_TOL)
            assert q == pytest.approx(s, abs=1e-9)

    @pytest.mark.parametrize(
        "alpha,h,M,nu,pe,pc_s0,pc_s1",
        [
            (1.0, 1.0, 4, 0.3, 0.2967201298043295, 0.990624720345352, 0.03280855317974711),
        ],
    )
    def test_regression_pins(self, alpha, h, M, nu, pe, pc_s0, pc_s1):
        b = pe_oofsk_coherent_given_h(h, alpha, M, nu)
        assert b.pe == pytest.approx(pe, rel=1e-9)
        assert b.pc_s0 == pytest.approx(pc_s0, rel=1e-9)
        assert b.pc_s1 == pytest.approx(pc_s1, rel=1e-9)


class TestNoncoherentPhaseKeying:
    def test_full_duty_binary_matches_scaled_antipodal_form(self):
        # nu = 1, M = 2: the line-of-sight component carries the decision
        # and the fading contributes extra variance; pe = Q(sqrt(2) alpha d
        # / sqrt(1 + alpha^2 gamma^2)).
        for alpha, d, g2 in [(1.7, 1.3, 0.8), (1.0, 1.0, 1.0), (2.2, 0.5, 0.1)]:
            expected = float(
                gaussian_q(SQRT2 * alpha * d / math.sqrt(1.0 + alpha * alpha * g2))
            )
            b = pe_oopsk_noncoherent(alpha, d, g2, 2, 1.0)
            assert b.pe == pytest.approx(expected, abs=1e-10)
            _assert_breakdown_consistent(b, 1.0)

    def test_low_snr_error_approaches_duty_cycle(self):
        # snr -> 0 with nu < M/(M+1): always-silence is optimal, pe -> nu.
        nu, M = 0.1, 4
        alpha = math.sqrt(1e-6 / nu)
        for d, g2 in [(0.0, 1.0), (math.sqrt(10.0 / 11.0), 1.0 / 11.0)]:
            b = pe_oopsk_noncoherent(alpha, d, g2, M, nu)
            assert b.pe == pytest.approx(nu, abs=1e-3)

    def test_high_snr_reaches_rayleigh_floor(self):
        nu, M = 0.1, 4
        alpha = math.sqrt(1e6 / nu)
        b = pe_oopsk_noncoherent(alpha, 0.0, 1.0, M, nu)
        floor = nu * (1.0 - 1.0 / M)
        assert abs(b.pe - floor) / floor < 0.05
        assert abs(b.pe - floor) / floor < 1e-5  # convergence is in fact tight

    def test_high_snr_reaches_rician_floor_integral(self):
        nu, M, K = 0.1, 4, 10.0
        alpha = math.sqrt(1e6 / nu)
        b = pe_oopsk_noncoherent(
            alpha, math.sqrt(K / (K + 1.0)), 1.0 / (K + 1.0), M, nu
        )
        floor = oopsk_noncoherent_error_floor(K, M, nu)
        assert abs(b.pe - floor) <= 1e-3 * nu

    @pytest.mark.parametrize(
        "alpha,d,g2,M,nu,pe,pc_s0,pc_s1",
        [
            (1.0, 1.0, 1.0, 4, 0.3, 0.25099431625392976, 0.9689960992141426, 0.23569471432056838),
            (2.0, 0.0, 1.0, 4, 0.1, 0.09453975827458205, 0.9984832661873836, 0.06825302156772664),
            (1.5, 2.0, 0.5, 8, 0.5, 0.17295675937163657, 0.9713015964888198, 0.682784884767907),
            (3.0, 1.0, 0.2, 2, 0.8, 0.061870004613214014, 0.8804627228595482, 0.9525468135185954),
            (0.7, 0.5, 2.0, 16, 1.0, 0.9064169590892723, 1.0, 0.09358304091072771),
        ],
    )
    def test_regression_pins(self, alpha, d, g2, M, nu, pe, pc_s0, pc_s1):
        b = pe_oopsk_noncoherent(alpha, d, g2, M, nu)
        assert b.pe == pytest.approx(pe, rel=1e-9)
        assert b.pc_s0 == pytest.approx(pc_s0, rel=1e-9)
        assert b.pc_s1 == pytest.approx(pc_s1, rel=1e-9)

    def test_rejects_zero_alpha_and_zero_gamma2(self):
        with pytest.raises(DomainError):
            pe_oopsk_noncoherent(0.0, 1.0, 1.0, 4, 0.5)
        with pytest.raises(DomainError):
            pe_oopsk_noncoherent(1.0, 1.0, 0.0, 4, 0.5)


class TestNoncoherentEnergyDetection:
    def test_full_duty_binary_rayleigh_is_exponential_race(self):
        # nu = 1, M = 2, d = 0: the occupied bin holds Exp(1 + A) energy and
        # the empty bin Exp(1); the empty bin wins with probability
        # 1/(2 + A).
        for alpha, g2 in [(1.0, 1.0), (math.sqrt(2.0), 1.0), (0.5, 3.0)]:
            a_term = alpha * alpha * g2
            b = pe_oofsk_noncoherent(alpha, 0.0, g2, 2, 1.0)
            assert b.pe == pytest.approx(1.0 / (2.0 + a_term), abs=1e-12)
            _assert_breakdown_consistent(b, 1.0)

    def test_single_bin_rayleigh_closed_form(self):
        # M = 1 over Rayleigh fading: tau = ((1+A)/A) ln xi with
        # xi = ((1-nu)/nu)(1+A), the silence side is 1 - e^{-tau} and the
        # signal side e^{-tau/(1+A)}.
        alpha, g2, nu = 1.3, 0.9, 0.4
        a_term = alpha * alpha * g2
        xi = ((1.0 - nu) / nu) * (1.0 + a_term)
        tau = (1.0 + a_term) / a_term * math.log(xi)
        b = pe_oofsk_noncoherent(alpha, 0.0, g2, 1, nu)
        assert b.pc_s0 == pytest.approx(-math.expm1(-tau), abs=1e-12)
        assert b.pc_s1 == pytest.approx(math.exp(-tau / (1.0 + a_term)), abs=1e-12)

    def test_low_snr_error_approaches_duty_cycle(self):
        nu, M = 0.1, 4
        alpha = math.sqrt(1e-6 / nu)
        b = pe_oofsk_noncoherent(alpha, 0.0, 1.0, M, nu)
        assert b.pe == pytest.approx(nu, abs=1e-3)

    def test_no_error_floor_at_high_snr(self):
        nu, M = 0.1, 4
        alpha = math.sqrt(1e6 / nu)
        b = pe_oofsk_noncoherent(alpha, 0.0, 1.0, M, nu)
        assert b.pe < 1e-6

    @pytest.mark.parametrize("M", [2, 4, 8, 16])
    def test_sum_and_integral_forms_agree(self, M):
        for tau, a_term, b_term in [
            (0.5, 1.0, 1.0),
            (3.0, 4.0, 0.0),
            (2.0, 0.3, 2.0),
            (8.0, 2.0, 5.0),
        ]:
            s = _pc_s1_oofsk_noncoherent_sum(tau, a_term, b_term, M)
            q = _pc_s1_oofsk_noncoherent_integral(tau, a_term, b_term, M, DEFAULT_TOL)
            assert q == pytest.approx(s, abs=1e-9)

    def test_large_constellation_uses_integral_and_stays_consistent(self):
        b = pe_oofsk_noncoherent(0.8, 0.3, 1.5, 32, 0.5)
        _assert_breakdown_consistent(b, 0.5)
        assert b.pe == pytest.approx(0.49582234248544266, rel=1e-9)

    @pytest.mark.parametrize(
        "alpha,d,g2,M,nu,pe,pc_s0,pc_s1",
        [
            (1.0, 1.0, 1.0, 4, 0.3, 0.26212721567849817, 0.9705522456050639, 0.1949540413265238),
            (2.0, 0.0, 1.0, 8, 0.1, 0.08164083655772425, 0.9949097081872431, 0.22940426073756937),
            (1.2, 1.5, 0.4, 2, 0.7, 0.24978036589037989, 0.712284285739018, 0.7664776405541639),
        ],
    )
    def test_regression_pins(self, alpha, d, g2, M, nu, pe, pc_s0, pc_s1):
        b = pe_oofsk_noncoherent(alpha, d, g2, M, nu)
        assert b.pe == pytest.approx(pe, rel=1e-9)
        assert b.pc_s0 == pytest.approx(pc_s0, rel=1e-9)
        assert b.pc_s1 == pytest.approx(pc_s1, rel=1e-9)


class TestFadingAverage:
    def test_rayleigh_antipodal_average_is_closed_form(self):
        # E_h[Q(sqrt(2) alpha h)] over Rayleigh with Omega = 1 equals
        # (1 - sqrt(a2/(1+a2)))/2 where a2 = alpha^2.
        for a2, expected in [
            (1.0, 0.14644660940672624),
            (3.0, 0.0669872981077807),
        ]:
            alpha = math.sqrt(a2)
            fading = FadingSpec.from_k_omega(Regime.COHERENT, 0.0, 1.0)
            avg = average_over_fading(
                lambda r: float(gaussian_q(SQRT2 * alpha * r)), fading
            )
            assert avg == pytest.approx(expected, abs=1e-6)

    def test_density_mass_is_captured(self):
        fading = FadingSpec.from_k_omega(Regime.COHERENT, 7.0, 2.0)
        assert average_over_fading(lambda r: 1.0, fading) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_pure_line_of_sight_returns_conditional(self):
        fading = FadingSpec.from_k_omega(Regime.COHERENT, math.inf, 4.0)
        assert fading.gamma2 == 0.0
        got = average_over_fading(lambda r: r * r, fading)
        assert got == pytest.approx(4.0, abs=1e-15)

    def test_noncoherent_fading_is_rejected(self):
        fading = FadingSpec.from_k_omega(Regime.NONCOHERENT, 0.0, 1.0)
        with pytest.raises(DomainError):
            average_over_fading(lambda r: 1.0, fading)

    def test_averaged_breakdown_keeps_identity(self):
        fading = FadingSpec.from_k_omega(Regime.COHERENT, 2.0, 1.0)
        b = average_breakdown_over_fading(
            lambda r: pe_oopsk_coherent_given_h(r, 1.5, 4, 0.4), fading, 0.4
        )
        _assert_breakdown_consistent(b, 0.4)

    @pytest.mark.parametrize(
        "alpha,K,M,nu,pe",
        [
            (2.0, 0.0, 4, 0.3, 0.16670742192821397),
            (1.5, 10.0, 4, 0.1, 0.08320988119359873),
        ],
    )
    def test_phase_keying_average_pins(self, alpha, K, M, nu, pe):
        fading = FadingSpec.from_k_omega(Regime.COHERENT, K, 1.0)
        b = average_breakdown_over_fading(
            lambda r: pe_oopsk_coherent_given_h(r, alpha, M, nu), fading, nu
        )
        assert b.pe == pytest.approx(pe, rel=1e-9)

    @pytest.mark.parametrize(
        "alpha,d,g2,M,nu,pe",
        [
            (2.0, 1.0, 1.0, 8, 0.5, 0.21258307002854426),
            (1.5, 3.0, 0.5, 16, 0.1, 0.006058080332604132),
        ],
    )
    def test_energy_detection_average_pins(self, alpha, d, g2, M, nu, pe):
        fading = FadingSpec(Regime.COHERENT, d, g2)
        b = average_breakdown_over_fading(
            lambda r: pe_oofsk_coherent_given_h(r, alpha, M, nu), fading, nu
        )
        assert b.pe == pytest.approx(pe, rel=1e-9)


class TestErrorFloor:
    @pytest.mark.parametrize("M", [2, 4, 8, 16])
    def test_zero_k_floor_is_duty_cycle_times_miss_rate(self, M):
        # With no line-of-sight component the M signal hypotheses collapse
        # and a random pick is right 1/M of the time.
        for nu in (0.1, 0.5, 1.0):
            got = oopsk_noncoherent_error_floor(0.0, M, nu)
            assert got == pytest.approx(nu * (1.0 - 1.0 / M), abs=1e-12)

    def test_binary_floor_matches_q_function(self):
        # M = 2 keeps only the half-plane constraint: the floor is
        # nu Q(sqrt(2 K)).
        for K in (0.0, 0.5, 2.0, 10.0):
            got = oopsk_noncoherent_error_floor(K, 2, 0.3)
            assert got == pytest.approx(
                0.3 * float(gaussian_q(math.sqrt(2.0 * K))), abs=1e-12
            )

    def test_infinite_k_has_no_floor(self):
        assert oopsk_noncoherent_error_floor(math.inf, 8, 0.5) == 0.0

    def test_floor_decreases_in_k_and_increases_in_m(self):
        floors_k = [oopsk_noncoherent_error_floor(K, 4, 0.2) for K in (0, 1, 5, 20)]
        assert all(a > b for a, b in zip(floors_k, floors_k[1:]))
        floors_m = [oopsk_noncoherent_error_floor(3.0, M, 0.2) for M in (2, 4, 8)]
        assert all(a < b for a, b in zip(floors_m, floors_m[1:]))

    def test_floor_scales_linearly_in_duty_cycle(self):
        base = oopsk_noncoherent_error_floor(2.0, 8, 0.1) / 0.1
        assert oopsk_noncoherent_error_floor(2.0, 8, 0.4) == pytest.approx(
            0.4 * base, abs=1e-12
        )


class TestScenarioDispatch:
    def test_noncoherent_scenario_matches_direct_call(self):
        sc = Scenario.from_dict(
            {
                "scheme": "oopsk",
                "M": 4,
                "nu": 0.3,
                "regime": "noncoherent",
                "K": 1.0,
                "omega": 2.0,
                "snr_db": 3.0,
            }
        )
        direct = pe_oopsk_noncoherent(
            sc.operating_point.alpha,
            sc.fading.d_mag,
            sc.fading.gamma2,
            4,
            0.3,
        )
        assert error_probability(sc).pe == direct.pe

    def test_line_of_sight_scenario_matches_conditional(self):
        sc = Scenario.from_dict(
            {
                "scheme": "oofsk",
                "M": 4,
                "nu": 0.5,
                "regime": "coherent",
                "K": "inf",
                "omega": 1.0,
                "snr_db": 0.0,
            }
        )
        direct = pe_oofsk_coherent_given_h(1.0, sc.operating_point.alpha, 4, 0.5)
        assert error_probability(sc).pe == direct.pe

    def test_sparser_duty_cycle_wins_at_fixed_energy_per_bit(self):
        # 4-ary coherent phase keying over Rayleigh fading at
        # Eb/N0 = 10 dB: pe improves monotonically as the duty cycle drops
        # from 1 to 0.3 to 0.1.
        pes = []
        for nu in (0.1, 0.3, 1.0):
            sc = Scenario.from_dict(
                {
                    "scheme": "oopsk",
                    "M": 4,
                    "nu": nu,
                    "regime": "coherent",
                    "K": 0.0,
                    "omega": 1.0,
                    "ebn0_db": 10.0,
                }
            )
            pes.append(error_probability(sc).pe)
        assert pes[0] < pes[1] < pes[2]


class TestParameterSweepStaysInBounds:
    @pytest.mark.parametrize("scheme", ["oopsk", "oofsk"])
    @pytest.mark.parametrize("regime", ["coherent", "noncoherent"])
    def test_randomized_configurations(self, scheme, regime):
        seed = {"oopsk": 0, "oofsk": 1}[scheme] * 2 + {
            "coherent": 0,
            "noncoherent": 1,
        }[regime]
        rng = np.random.default_rng(20260800 + seed)
        for _ in range(12):
            M = int(rng.choice([2, 3, 4, 8, 16]))
            nu = float(rng.choice([0.05, 0.3, 0.7, 1.0]))
            alpha = float(10.0 ** rng.uniform(-2.0, 1.5))
            d = float(rng.uniform(0.0, 2.0))
            g2 = float(rng.uniform(0.05, 3.0))
            if regime == "noncoherent":
                if scheme == "oopsk":
                    b = pe_oopsk_noncoherent(alpha, d, g2, M, nu)
                else:
                    b = pe_oofsk_noncoherent(alpha, d, g2, M, nu)
            else:
                h = float(rng.uniform(0.05, 2.5))
                if scheme == "oopsk":
                    b = pe_oopsk_coherent_given_h(h, alpha, M, nu)
                else:
                    b = pe_oofsk_coherent_given_h(h, alpha, M, nu)
            _assert_breakdown_consistent(b, nu)

    @settings(max_examples=60, deadline=None)
    @given(
        M=st.integers(min_value=1, max_value=16),
        nu=st.floats(min_value=0.01, max_value=1.0),
        alpha=st.floats(min_value=1e-3, max_value=30.0),
        d=st.floats(min_value=0.0, max_value=3.0),
        g2=st.floats(min_value=0.01, max_value=5.0),
    )
    def test_energy_detection_breakdown_properties(self, M, nu, alpha, d, g2):
        b = pe_oofsk_noncoherent(alpha, d, g2, M, nu)
        _assert_breakdown_consistent(b, nu)
        # the threshold rule is consistent with the silence probability:
        # pc_s0 = P(all bins below tau) = (1 - e^{-tau})^M
        tau = oofsk_noncoherent_threshold(alpha, d, g2, M, nu)
        if nu < 1.0 and math.isfinite(tau):
            assert b.pc_s0 == pytest.approx((-math.expm1(-tau)) ** M, abs=1e-12)
