"""Acceptance suite: the headline quantitative claims, one test each.

Each test prints a PASS line with the computed numbers (run pytest with
-s to see them on success). Statistical checks use fixed seeds, so the
whole suite is deterministic.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate

from spinread.config import default_config
from spinread.emission import (
    PRESETS,
    build_emission_model,
    collected_flux,
    emitted_signal_flux,
)
from spinread.interferometer import (
    InterferometerConfig,
    SpectralLine,
    integration_time,
    optimal_delay,
    port_probability,
    snr_per_photon,
)
from spinread.montecarlo import (
    derive_model,
    estimate_state,
    fidelity_vs_photon_count,
    mc_moment_validation,
    simulate_trajectory,
)
from spinread.physics import (
    DonorParameters,
    MagneticEnvironment,
    calibrate_hole_spacing,
    electron_zeeman_energy_ev,
    electron_zeeman_frequency,
    hyperfine_splitting,
    lowest_level_occupation,
    neutralization_electron_density,
)
from spinread.spindyn import (
    FlipModel,
    be_flip_suppression,
    budget_before_randomization,
    excitations_to_randomization,
    flip_probability_per_cycle,
)

ENV = MagneticEnvironment(b_field=10.0, temperature=4.0)
DONOR = DonorParameters()
TAU = 2e-9
GAMMA = 2 * math.pi * 150e6
DELTA_OMEGA = 2 * math.pi * 60e6
SNR1 = snr_per_photon(DELTA_OMEGA, GAMMA, TAU)


def ok(n, label, detail):
    print(f"[ACCEPT {n:02d}] PASS {label}: {detail}")


def test_criterion_01_hyperfine_splitting():
    hf = hyperfine_splitting(DONOR)
    assert hf == pytest.approx(60e6, rel=0.03)
    ok(1, "hyperfine splitting", f"{hf / 1e6:.2f} MHz vs 60 MHz (3%)")


def test_criterion_02_electron_zeeman():
    f = electron_zeeman_frequency(ENV, 2.0)
    e_mev = electron_zeeman_energy_ev(ENV, 2.0) * 1e3
    assert f == pytest.approx(280e9, rel=0.02)
    assert e_mev == pytest.approx(1.16, rel=0.02)
    ok(2, "electron Zeeman", f"{f / 1e9:.2f} GHz, {e_mev:.4f} meV")


def test_criterion_03_snr_per_photon_and_optimal_delay():
    assert SNR1 == pytest.approx(0.084, abs=1e-3)
    tau_star, snr_star = optimal_delay(DELTA_OMEGA, GAMMA)
    assert 1.9e-9 <= tau_star <= 2.3e-9
    assert 0.084 <= snr_star <= 0.085
    ok(3, "SNR per photon",
       f"{SNR1:.6f} at 2 ns; optimum {snr_star:.6f} at {tau_star * 1e9:.3f} ns")


def test_criterion_04_photon_budget_triple():
    occ = lowest_level_occupation(ENV, calibrate_hole_spacing(ENV, 0.8))
    bare = emitted_signal_flux(
        build_emission_model(DONOR, occ, PRESETS["bare"], 1e-9)
    )
    dbr_model = build_emission_model(DONOR, occ, PRESETS["dbr"], 1e-9)
    dbr = collected_flux(dbr_model, PRESETS["dbr"])
    phc = emitted_signal_flux(
        build_emission_model(DONOR, occ, PRESETS["phc"], 1e-9)
    )
    assert bare == pytest.approx(400.0, rel=0.10)
    assert dbr == pytest.approx(100.0, rel=0.10)
    assert phc == pytest.approx(4e4, rel=0.10)
    ok(4, "photon budget triple",
       f"bare {bare:.1f}/s, DBR {dbr:.1f}/s, PhC {phc:.0f}/s")


def test_criterion_05_integration_times():
    t_dbr = integration_time(1.0, SNR1, 100.0)
    t_phc = integration_time(1.0, SNR1, 2e4)
    assert 0.10 <= t_dbr <= 0.13
    assert 4e-4 <= t_phc <= 1.2e-3
    ok(5, "integration times", f"DBR {t_dbr:.4f} s, PhC {t_phc:.2e} s")


def test_criterion_06_flip_probability_and_suppression():
    p = flip_probability_per_cycle(60e6, 280e9)
    s = be_flip_suppression(2e6, 60e6)
    assert 4.3e-8 <= p <= 5.2e-8
    assert p == pytest.approx((60e6 / 280e9) ** 2, rel=1e-12)
    assert 1.0e-3 <= s <= 1.2e-3
    ok(6, "flip probability", f"capture {p:.3e}, BE suppression {s:.3e}")


def test_criterion_07_randomization_budget():
    budget = excitations_to_randomization(FlipModel(5e-8, 0.0, 0.1))
    assert budget.linear_cycles == 2e6
    occ = lowest_level_occupation(ENV, calibrate_hole_spacing(ENV, 0.8))
    dbr = budget_before_randomization(
        2e6, build_emission_model(DONOR, occ, PRESETS["dbr"], 1e-9),
        PRESETS["dbr"], 0.4, SNR1,
    )
    phc = budget_before_randomization(
        2e6, build_emission_model(DONOR, occ, PRESETS["phc"], 1e-9),
        PRESETS["phc"], 0.4, SNR1,
    )
    assert dbr.detected_photons == pytest.approx(25.0, abs=3.0)
    assert phc.detected_photons == pytest.approx(4.8e3, rel=0.10)
    assert dbr.power_snr == pytest.approx(2.1, abs=0.2)
    assert phc.power_snr == pytest.approx(400.0, rel=0.10)
    ok(7, "randomization budget",
       f"2e6 cycles; DBR {dbr.detected_photons:.1f} photons SNR "
       f"{dbr.power_snr:.2f}; PhC {phc.detected_photons:.0f} photons SNR "
       f"{phc.power_snr:.0f}")


def test_criterion_08_neutralization_density():
    n_cm3 = neutralization_electron_density(DONOR, ENV, 1e-9) / 1e6
    assert 1e13 / 1.5 <= n_cm3 <= 1.5e13
    ok(8, "neutralization density", f"{n_cm3:.3e} cm^-3 vs ~1e13 cm^-3")


def test_criterion_09_mc_moment_oracle():
    start = time.perf_counter()
    cases = [(SpectralLine(2 * math.pi * 30e6, GAMMA),
              InterferometerConfig(delay=TAU, bias_parity=1))]
    rng = np.random.default_rng(90210)
    for _ in range(5):
        line = SpectralLine(
            detuning=float(rng.uniform(-2 * math.pi * 100e6, 2 * math.pi * 100e6)),
            fwhm=float(rng.uniform(2 * math.pi * 1e6, 2 * math.pi * 300e6)),
        )
        cfg = InterferometerConfig(
            delay=float(rng.uniform(0.5e-9, 5e-9)),
            bias_parity=1 if rng.random() < 0.5 else -1,
        )
        cases.append((line, cfg))
    worst = 0.0
    for i, (line, cfg) in enumerate(cases):
        report = mc_moment_validation(line, cfg, n=1_000_000, seed=5000 + i)
        worst = max(worst, report.mean_deviation_se, report.var_deviation_se)
        assert report.passed(5.0), (line, cfg, report)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    ok(9, "MC moment oracle",
       f"6 cases x 1e6 photons, worst deviation {worst:.2f} se, "
       f"{elapsed:.1f} s")


def test_criterion_10_property_suite():
    # SNR scale invariance under (a*dw, a*gamma, tau/a)
    for a in (0.5, 2.0, 10.0):
        assert snr_per_photon(a * DELTA_OMEGA, a * GAMMA, TAU / a) == pytest.approx(
            SNR1, rel=1e-12
        )
    # monotone decrease in gamma
    snrs = [snr_per_photon(DELTA_OMEGA, 2 * math.pi * f, TAU)
            for f in (3e6, 30e6, 150e6, 600e6)]
    assert all(x > y for x, y in zip(snrs, snrs[1:]))
    # port-probability complement symmetry
    icfg = InterferometerConfig(delay=TAU, bias_parity=1)
    for shift in (0.1, 0.377, 2.9):
        total = port_probability(shift / TAU, icfg) + port_probability(
            -shift / TAU, icfg
        )
        assert total == pytest.approx(1.0, abs=1e-12)
    # calibration round trip at 1e-9 relative
    for target in (0.3, 0.5, 0.8, 0.99):
        spacing = calibrate_hole_spacing(ENV, target)
        assert lowest_level_occupation(ENV, spacing) == pytest.approx(
            target, rel=1e-9
        )
    # determinism: bit-identical reruns including the estimate
    cfg = default_config(duration=0.25, seed=606)
    t1, t2 = simulate_trajectory(cfg, 0), simulate_trajectory(cfg, 0)
    assert np.array_equal(t1.times, t2.times)
    assert np.array_equal(t1.ports, t2.ports)
    assert estimate_state(t1, cfg) == estimate_state(t2, cfg)
    # detector-efficiency thinning of the window power SNR
    from test_montecarlo import TestEfficiencyThinning

    full = TestEfficiencyThinning.window_power_snr(1.0, seed=31)
    ratio = TestEfficiencyThinning.window_power_snr(0.4, seed=31) / full
    assert 0.8 * 0.4 < ratio < 1.2 * 0.4
    ok(10, "property suite",
       f"scale/monotone/complement/round-trip/determinism ok; "
       f"thinning ratio {ratio:.3f} vs 0.4")


def test_criterion_11_end_to_end_fidelity_and_flip_incidence():
    start = time.perf_counter()
    cfg = replace(default_config(), flip=FlipModel(0.0, 0.0, 0.1), seed=17)
    d = derive_model(cfg)
    from spinread.interferometer import current_variance, mean_current

    mu = abs(mean_current(d.line_up, cfg.interferometer))
    var = current_variance(d.line_up, cfg.interferometer)
    rows = fidelity_vs_photon_count(cfg, [10, 50, 200], trials=1000)
    details = []
    for row in rows:
        n = row["n_photons"]
        m_tot, s_tot = n * mu, math.sqrt(n * var)
        oracle, _ = integrate.quad(
            lambda x: math.exp(-((x - m_tot) ** 2) / (2 * s_tot * s_tot))
            / (s_tot * math.sqrt(2 * math.pi)),
            0.0, m_tot + 12.0 * s_tot,
        )
        assert row["wilson_low"] <= oracle <= row["wilson_high"], (row, oracle)
        details.append(f"N={n}: {row['fidelity']:.3f}~{oracle:.3f}")

    cfg0 = default_config()
    cycle = derive_model(cfg0).emission.cycle_time
    cfg_flip = replace(
        cfg0, flip=FlipModel(5e-8, 0.0, 0.1),
        duration=(2_000_000 + 0.5) * cycle, seed=20250811,
    )
    d_flip = derive_model(cfg_flip)
    flipped = sum(
        simulate_trajectory(cfg_flip, k, derived=d_flip).n_flips > 0
        for k in range(1000)
    )
    incidence = flipped / 1000
    assert incidence == pytest.approx(0.095, abs=0.02)
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    ok(11, "end-to-end MC",
       f"{'; '.join(details)}; flip incidence {incidence:.3f} "
       f"(target 0.095 +/- 0.02); {elapsed:.1f} s")
