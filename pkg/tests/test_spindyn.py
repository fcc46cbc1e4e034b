"""Flip-budget module: per-cycle flip probability and photon budgets."""

import math

import pytest

from spinread.emission import PRESETS, build_emission_model
from spinread.physics import DonorParameters, MagneticEnvironment
from spinread.spindyn import (
    FlipModel,
    be_flip_suppression,
    budget_before_randomization,
    build_flip_model,
    excitations_to_randomization,
    flip_probability_per_cycle,
)

DONOR = DonorParameters()
ENV = MagneticEnvironment(b_field=10.0, temperature=4.0)
SNR_PER_PHOTON = 0.08403361853862115  # per-photon power SNR at the operating point


def emission(name):
    return build_emission_model(DONOR, 0.8, PRESETS[name], 1e-9)


class TestFlipProbability:
    def test_published_ratio(self):
        p = flip_probability_per_cycle(60e6, 280e9)
        assert p == pytest.approx((60e6 / 280e9) ** 2, rel=1e-12)
        assert 4.3e-8 <= p <= 5.2e-8

    def test_zero_hyperfine(self):
        assert flip_probability_per_cycle(0.0, 280e9) == 0.0

    def test_inverse_square_in_field(self):
        assert flip_probability_per_cycle(60e6, 2 * 280e9) == pytest.approx(
            flip_probability_per_cycle(60e6, 280e9) / 4, rel=1e-12
        )

    @pytest.mark.parametrize("a", [0.1, 3.0, 1e4])
    def test_depends_only_on_ratio(self, a):
        assert flip_probability_per_cycle(a * 60e6, a * 280e9) == pytest.approx(
            flip_probability_per_cycle(60e6, 280e9), rel=1e-12
        )

    def test_zero_zeeman_rejected(self):
        with pytest.raises(ValueError):
            flip_probability_per_cycle(60e6, 0.0)

    def test_warns_outside_perturbative_regime(self):
        with pytest.warns(UserWarning):
            flip_probability_per_cycle(60e9, 280e9)


class TestBeSuppression:
    def test_published_factor(self):
        s = be_flip_suppression(2e6, 60e6)
        assert s == pytest.approx((2 / 60) ** 2, rel=1e-12)
        assert s == pytest.approx(1.1e-3, rel=0.05)

    def test_zero(self):
        assert be_flip_suppression(0.0, 60e6) == 0.0

    def test_equal_inputs(self):
        assert be_flip_suppression(60e6, 60e6) == 1.0

    def test_zero_donor_rejected(self):
        with pytest.raises(ValueError):
            be_flip_suppression(2e6, 0.0)


class TestRandomizationBudget:
    def test_published_budget_exact(self):
        budget = excitations_to_randomization(FlipModel(5e-8, 0.0, 0.1))
        assert budget.linear_cycles == 2e6

    def test_linear_in_threshold(self):
        budget = excitations_to_randomization(
            FlipModel(5e-8, 0.0, randomization_threshold=0.05)
        )
        assert budget.linear_cycles == 1e6

    def test_unrounded_probability(self):
        # smallest n with n*p >= 0.1 at p = (60 MHz / 280 GHz)^2
        p = (60e6 / 280e9) ** 2
        budget = excitations_to_randomization(FlipModel(p, 0.0, 0.1))
        n = math.ceil((0.1 / p) * (1 - 1e-12))
        assert budget.linear_cycles == n
        assert budget.linear_cycles == pytest.approx(2.18e6, rel=1e-2)

    def test_geometric_close_to_linear(self):
        budget = excitations_to_randomization(FlipModel(5e-8, 0.0, 0.1))
        # |ln 0.9| vs 0.1: the two accumulations differ by ~5.4%
        ratio = budget.geometric_cycles / budget.linear_cycles
        assert 1.0 < ratio < 1.06

    def test_zero_probability_unbounded(self):
        budget = excitations_to_randomization(FlipModel(0.0, 0.0, 0.1))
        assert math.isinf(budget.linear_cycles)
        assert math.isinf(budget.geometric_cycles)


class TestPhotonBudget:
    def test_dbr_published_numbers(self):
        b = budget_before_randomization(
            2e6, emission("dbr"), PRESETS["dbr"], 0.4, SNR_PER_PHOTON
        )
        assert b.detected_photons == pytest.approx(25, abs=3)
        assert b.power_snr == pytest.approx(2.1, abs=0.2)

    def test_phc_published_numbers(self):
        b = budget_before_randomization(
            2e6, emission("phc"), PRESETS["phc"], 0.4, SNR_PER_PHOTON
        )
        assert b.detected_photons == pytest.approx(4.8e3, rel=0.1)
        assert b.power_snr == pytest.approx(400, rel=0.1)

    def test_chain_arithmetic(self):
        # independent re-derivation of the DBR chain from the raw rates
        rate_rad = (1.0 / 3.0) / DONOR.tau_rad
        branching = rate_rad / (1.0 / DONOR.tau_auger + rate_rad)
        expected = 2e6 * branching * 0.8 * 0.8 * 1.0 * 0.4
        b = budget_before_randomization(
            2e6, emission("dbr"), PRESETS["dbr"], 0.4, SNR_PER_PHOTON
        )
        assert b.detected_photons == pytest.approx(expected, rel=1e-12)
        assert b.power_snr == pytest.approx(expected * SNR_PER_PHOTON, rel=1e-12)

    def test_zero_cycles(self):
        b = budget_before_randomization(
            0, emission("dbr"), PRESETS["dbr"], 0.4, SNR_PER_PHOTON
        )
        assert b.detected_photons == 0.0
        assert b.power_snr == 0.0

    @pytest.mark.parametrize("factor", [0.5, 2.0, 10.0])
    def test_linear_in_cycles_and_efficiency(self, factor):
        base = budget_before_randomization(
            2e6, emission("dbr"), PRESETS["dbr"], 0.1, SNR_PER_PHOTON
        )
        more_cycles = budget_before_randomization(
            factor * 2e6, emission("dbr"), PRESETS["dbr"], 0.1, SNR_PER_PHOTON
        )
        more_eta = budget_before_randomization(
            2e6, emission("dbr"), PRESETS["dbr"], factor * 0.1, SNR_PER_PHOTON
        )
        assert more_cycles.detected_photons == pytest.approx(
            factor * base.detected_photons, rel=1e-12
        )
        assert more_eta.detected_photons == pytest.approx(
            factor * base.detected_photons, rel=1e-12
        )


class TestDefaultRegime:
    def test_background_negligible_over_budget(self):
        # (1/30 s^-1) * 2e6 cycles * cycle_time ~ 0.02, well under 0.1
        accumulated = (1.0 / 30.0) * 2e6 * emission("dbr").cycle_time
        assert accumulated < 0.1 / 4

    def test_radiative_flip_channel_negligible(self):
        assert emission("bare").radiative_branching < 1.0 / 5000.0

    def test_build_flip_model_channels(self):
        from spinread.physics import electron_zeeman_frequency, hyperfine_splitting

        m_all = build_flip_model(DONOR, ENV, emission("dbr"))
        m_bare = build_flip_model(
            DONOR, ENV, emission("dbr"),
            include_be_channel=False, include_radiative_channel=False,
        )
        ratio = hyperfine_splitting(DONOR) / electron_zeeman_frequency(ENV, DONOR.g0)
        assert m_bare.p_flip_per_cycle == pytest.approx(ratio * ratio, rel=1e-12)
        # corrections are small and positive
        assert m_all.p_flip_per_cycle > m_bare.p_flip_per_cycle
        assert m_all.p_flip_per_cycle == pytest.approx(
            m_bare.p_flip_per_cycle, rel=2e-3
        )

    def test_exciton_dos_factor_scales_half(self):
        m1 = build_flip_model(
            DONOR, ENV, emission("dbr"),
            include_be_channel=False, include_radiative_channel=False,
            exciton_dos_factor=1.0,
        )
        m3 = build_flip_model(
            DONOR, ENV, emission("dbr"),
            include_be_channel=False, include_radiative_channel=False,
            exciton_dos_factor=3.0,
        )
        assert m3.p_flip_per_cycle == pytest.approx(
            2.0 * m1.p_flip_per_cycle, rel=1e-12
        )


class TestValidation:
    def test_model_bounds(self):
        with pytest.raises(ValueError):
            FlipModel(p_flip_per_cycle=1.5)
        with pytest.raises(ValueError):
            FlipModel(p_flip_per_cycle=1e-8, background_rate=-1.0)
        with pytest.raises(ValueError):
            FlipModel(p_flip_per_cycle=1e-8, randomization_threshold=0.0)

    def test_budget_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            budget_before_randomization(
                -1, emission("dbr"), PRESETS["dbr"], 0.4, 0.084
            )
        with pytest.raises(ValueError):
            budget_before_randomization(
                2e6, emission("dbr"), PRESETS["dbr"], 1.4, 0.084
            )
