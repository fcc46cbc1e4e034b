"""Nuclear-spin destabilization by the measurement itself.

The dominant channel is a second-order flip-flop during capture of a
free electron or free exciton after each Auger ionization: each capture
carries probability (1/2)(hyperfine/Zeeman)^2, and with two captures per
cycle the per-cycle value is the square of the frequency ratio. Weaker
channels (bound-exciton hyperfine, flips during radiative decay) enter
as small additive corrections, and equilibrium cross-relaxation as a
background rate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from . import constants as const
from .emission import CavityPreset, EmissionModel
from .physics import (
    DonorParameters,
    MagneticEnvironment,
    electron_zeeman_frequency,
    hyperfine_splitting,
)

__all__ = [
    "FlipModel",
    "RandomizationBudget",
    "PhotonBudget",
    "flip_probability_per_cycle",
    "be_flip_suppression",
    "excitations_to_randomization",
    "budget_before_randomization",
    "build_flip_model",
]


@dataclass(frozen=True)
class FlipModel:
    """Per-cycle flip probability, background rate, and the budget threshold."""

    p_flip_per_cycle: float
    background_rate: float = const.BACKGROUND_FLIP_RATE  # s^-1
    randomization_threshold: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.p_flip_per_cycle <= 1.0:
            raise ValueError(
                f"p_flip_per_cycle must be in [0, 1], got {self.p_flip_per_cycle}"
            )
        if self.background_rate < 0:
            raise ValueError(
                f"background_rate must be >= 0, got {self.background_rate}"
            )
        if not 0.0 < self.randomization_threshold < 1.0:
            raise ValueError(
                "randomization_threshold must lie in (0, 1), got "
                f"{self.randomization_threshold}"
            )


def flip_probability_per_cycle(hyperfine: float, electron_zeeman: float) -> float:
    """Per-cycle nuclear flip probability from the two capture events.

    Each of the free-electron and free-exciton captures contributes
    (1/2)(hyperfine/electron_zeeman)^2, so the cycle total is the plain
    squared ratio. Both frequencies in Hz (only the ratio matters).
    """
    if not electron_zeeman > 0:
        raise ValueError(
            f"electron_zeeman must be positive, got {electron_zeeman}"
        )
    if hyperfine < 0:
        raise ValueError(f"hyperfine must be >= 0, got {hyperfine}")
    ratio = hyperfine / electron_zeeman
    if ratio > const.PERTURBATIVE_RATIO_MAX:
        warnings.warn(
            f"hyperfine/Zeeman ratio {ratio:.3g} is outside the perturbative "
            "regime the flip-flop estimate assumes",
            stacklevel=2,
        )
    return ratio * ratio


def be_flip_suppression(be_hyperfine: float, donor_hyperfine: float) -> float:
    """Suppression of the bound-exciton flip channel: (BE/donor)^2.

    ~1e-3 for the 2 MHz BE scale against the 60 MHz donor splitting.
    """
    if not donor_hyperfine > 0:
        raise ValueError(
            f"donor_hyperfine must be positive, got {donor_hyperfine}"
        )
    if be_hyperfine < 0:
        raise ValueError(f"be_hyperfine must be >= 0, got {be_hyperfine}")
    return (be_hyperfine / donor_hyperfine) ** 2


@dataclass(frozen=True)
class RandomizationBudget:
    """Excitation budget before the cumulative flip probability crosses
    the threshold. linear_cycles uses the small-probability accumulation
    threshold/p; geometric_cycles is the exact ceil(ln(1-thr)/ln(1-p)).
    Both are inf when p = 0.
    """

    linear_cycles: float
    geometric_cycles: float


def excitations_to_randomization(model: FlipModel) -> RandomizationBudget:
    """Number of excitation cycles until randomization.

    2e6 for the rounded per-cycle probability 5e-8 at threshold 0.1.
    """
    p = model.p_flip_per_cycle
    thr = model.randomization_threshold
    if p == 0.0:
        return RandomizationBudget(math.inf, math.inf)
    linear = _ceil_with_slack(thr / p)
    geometric = _ceil_with_slack(math.log1p(-thr) / math.log1p(-p))
    return RandomizationBudget(float(linear), float(geometric))


def _ceil_with_slack(quotient: float) -> int:
    """Ceil that forgives binary rounding of decimally exact quotients.

    0.1/5e-8 is exactly 2e6 in decimal but lands one ulp above it in
    binary; quotients within 1e-12 relative of an integer snap down
    before the ceil (the inputs are never known to 12 digits anyway).
    """
    return math.ceil(quotient * (1.0 - 1e-12))


@dataclass(frozen=True)
class PhotonBudget:
    """Expected detected photons and the power SNR they carry."""

    detected_photons: float
    power_snr: float


def budget_before_randomization(
    n_excitations: float,
    emission: EmissionModel,
    cavity: CavityPreset,
    eta_d: float,
    snr_per_photon: float,
) -> PhotonBudget:
    """Detected-photon count and power SNR accumulated over n cycles.

    Linear in n_excitations and in eta_d. 2e6 cycles yield ~25 detected
    photons (SNR ~2) with the planar cavity and ~4.8e3 (SNR ~4e2) with
    the photonic crystal.
    """
    if n_excitations < 0:
        raise ValueError(f"n_excitations must be >= 0, got {n_excitations}")
    if not 0.0 <= eta_d <= 1.0:
        raise ValueError(f"eta_d must be in [0, 1], got {eta_d}")
    detected = (
        n_excitations
        * emission.radiative_branching
        * emission.signal_fraction
        * cavity.beta
        * cavity.extra_collection
        * eta_d
    )
    return PhotonBudget(detected, detected * snr_per_photon)


def build_flip_model(
    donor: DonorParameters,
    env: MagneticEnvironment,
    emission: EmissionModel,
    background_rate: float = const.BACKGROUND_FLIP_RATE,
    randomization_threshold: float = 0.1,
    include_be_channel: bool = True,
    include_radiative_channel: bool = True,
    exciton_dos_factor: float = 1.0,
) -> FlipModel:
    """Assemble the per-cycle flip probability from the physics inputs.

    The capture channel is the base; the bound-exciton and radiative
    channels multiply it by their suppression factors and add on top.
    Disabling both reproduces the leading-order estimate alone.
    exciton_dos_factor scales the free-exciton half of the base (the
    density-of-states correction of order unity).
    """
    hf = hyperfine_splitting(donor)
    zeeman = electron_zeeman_frequency(env, donor.g0)
    half = 0.5 * flip_probability_per_cycle(hf, zeeman)
    base = half + half * exciton_dos_factor
    p = base
    if include_be_channel:
        p += base * be_flip_suppression(donor.be_hyperfine, hf)
    if include_radiative_channel:
        p += base * emission.radiative_branching
    return FlipModel(
        p_flip_per_cycle=p,
        background_rate=background_rate,
        randomization_threshold=randomization_threshold,
    )
