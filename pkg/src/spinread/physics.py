"""Static level structure of the neutral donor and its bound exciton.

Covers the contact-hyperfine splitting of the donor ground state, the
electron Zeeman frequency, thermal occupation of the bound-exciton hole
Zeeman ladder, the two signal-line detunings, and the free-carrier
density needed to re-neutralize the donor after Auger ionization.

Everything here is a pure function of immutable value types.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from . import constants as const

__all__ = [
    "MagneticEnvironment",
    "DonorParameters",
    "LevelDiagram",
    "hyperfine_splitting",
    "electron_zeeman_frequency",
    "electron_zeeman_energy_ev",
    "lowest_level_occupation",
    "calibrate_hole_spacing",
    "transition_frequencies",
    "neutralization_electron_density",
    "build_level_diagram",
]


@dataclass(frozen=True)
class MagneticEnvironment:
    """Applied field and lattice temperature: the protocol's two knobs."""

    b_field: float  # T
    temperature: float  # K

    def __post_init__(self):
        if not self.b_field > 0:
            raise ValueError(f"b_field must be positive, got {self.b_field}")
        if not self.temperature > 0:
            raise ValueError(
                f"temperature must be positive, got {self.temperature}"
            )


@dataclass(frozen=True)
class DonorParameters:
    """Material constants of the 31P donor and its bound exciton in Si.

    psi0_sq              electron probability density at the nucleus (m^-3)
    gamma_n              nuclear gyromagnetic ratio (rad s^-1 T^-1)
    g0                   electron g-factor (dimensionless)
    tau_auger            non-radiative Auger lifetime (s)
    tau_rad              zero-phonon radiative lifetime (s)
    linewidth_fwhm       PL line FWHM (Hz, ordinary frequency)
    be_hyperfine         bound-exciton hyperfine scale (Hz)
    capture_cross_section  electron capture cross section (m^2)
    effective_mass_ratio   conduction effective mass / free mass
    """

    psi0_sq: float = const.PSI0_SQ_31P
    gamma_n: float = const.GAMMA_N_31P
    g0: float = const.G0_FREE_ELECTRON
    tau_auger: float = const.TAU_AUGER
    tau_rad: float = const.TAU_RADIATIVE
    linewidth_fwhm: float = const.LINEWIDTH_ENSEMBLE
    be_hyperfine: float = const.BE_HYPERFINE
    capture_cross_section: float = const.CAPTURE_CROSS_SECTION
    effective_mass_ratio: float = const.EFFECTIVE_MASS_RATIO

    def __post_init__(self):
        positive = {
            "gamma_n": self.gamma_n,
            "g0": self.g0,
            "tau_auger": self.tau_auger,
            "tau_rad": self.tau_rad,
            "linewidth_fwhm": self.linewidth_fwhm,
            "be_hyperfine": self.be_hyperfine,
            "capture_cross_section": self.capture_cross_section,
            "effective_mass_ratio": self.effective_mass_ratio,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.psi0_sq < 0:
            raise ValueError(f"psi0_sq must be >= 0, got {self.psi0_sq}")
        if not self.tau_rad > self.tau_auger:
            raise ValueError(
                "tau_rad must exceed tau_auger (the radiative channel is "
                f"the slow one): tau_rad={self.tau_rad}, "
                f"tau_auger={self.tau_auger}"
            )


@dataclass(frozen=True)
class LevelDiagram:
    """Derived level structure at a given field and temperature.

    All frequencies are ordinary frequencies in Hz.
    """

    hyperfine_splitting: float  # donor ground-state splitting (Hz)
    electron_zeeman: float  # g0 mu_B B / h (Hz)
    hole_level_spacing: float  # BE hole Zeeman spacing (Hz)
    lowest_occupation: float  # thermal weight of the lowest hole level

    def __post_init__(self):
        if not 0.25 <= self.lowest_occupation <= 1.0:
            raise ValueError(
                "lowest_occupation must lie in [0.25, 1] for four levels, "
                f"got {self.lowest_occupation}"
            )
        if self.electron_zeeman > 0:
            ratio = self.hyperfine_splitting / self.electron_zeeman
            if ratio > const.PERTURBATIVE_RATIO_MAX:
                warnings.warn(
                    f"hyperfine/Zeeman ratio {ratio:.3g} is not small; the "
                    "perturbative flip probability and the symmetric-bias "
                    "interferometer treatment assume hyperfine << Zeeman",
                    stacklevel=2,
                )


def hyperfine_splitting(donor: DonorParameters) -> float:
    """Contact-hyperfine splitting of the donor ground state, in Hz.

    (mu_0/3) g0 mu_B gamma_n hbar |psi(0)|^2 expressed as an ordinary
    frequency. Exactly linear in psi0_sq, g0, and gamma_n.
    """
    energy = (
        const.MU_0 / 3.0
        * donor.g0
        * const.MU_B
        * donor.gamma_n
        * const.HBAR
        * donor.psi0_sq
    )
    return energy / const.H_PLANCK


def electron_zeeman_frequency(env: MagneticEnvironment, g0: float) -> float:
    """Electron Zeeman frequency g0 mu_B B / h, in Hz."""
    return g0 * const.MU_B * env.b_field / const.H_PLANCK


def electron_zeeman_energy_ev(env: MagneticEnvironment, g0: float) -> float:
    """Electron Zeeman energy in eV (~1.16 meV at 10 T, g ~ 2)."""
    return g0 * const.MU_B * env.b_field / const.E_CHARGE


def lowest_level_occupation(env: MagneticEnvironment, hole_spacing: float) -> float:
    """Boltzmann weight of the lowest of four equally spaced hole levels.

    1 / (1 + q + q^2 + q^3) with q = exp(-h * hole_spacing / kT);
    1/4 in the uniform limit, 1 when the ladder is frozen out.
    """
    if hole_spacing < 0:
        raise ValueError(f"hole_spacing must be >= 0, got {hole_spacing}")
    q = math.exp(
        -const.H_PLANCK * hole_spacing / (const.K_B * env.temperature)
    )
    return 1.0 / (1.0 + q + q * q + q * q * q)


def calibrate_hole_spacing(
    env: MagneticEnvironment,
    target_occupation: float,
    rel_tol: float = 1e-9,
) -> float:
    """Hole Zeeman spacing (Hz) that yields the target lowest-level weight.

    Bisection on the monotone occupation map; converges to rel_tol in the
    occupation. Targets at or outside (0.25, 1) are unreachable.
    """
    if not 0.25 < target_occupation < 1.0:
        raise ValueError(
            "target_occupation must lie strictly inside (0.25, 1), got "
            f"{target_occupation}"
        )
    kt_over_h = const.K_B * env.temperature / const.H_PLANCK
    lo = 0.0
    hi = kt_over_h
    while lowest_level_occupation(env, hi) < target_occupation:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        occ = lowest_level_occupation(env, mid)
        if abs(occ - target_occupation) <= rel_tol * target_occupation:
            return mid
        if occ < target_occupation:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return 0.5 * (lo + hi)


def transition_frequencies(hyperfine: float) -> tuple[float, float]:
    """Detunings (rad/s) of the two signal lines from the bias reference.

    The lines sit at +/- half the hyperfine splitting around the mean
    optical frequency; only these detunings are ever represented, the
    absolute optical frequency is imposed symbolically via the bias
    condition.
    """
    if hyperfine < 0:
        raise ValueError(f"hyperfine must be >= 0, got {hyperfine}")
    half = math.pi * hyperfine  # 2*pi * (hyperfine/2)
    return (half, -half)


def neutralization_electron_density(
    donor: DonorParameters,
    env: MagneticEnvironment,
    capture_time: float,
) -> float:
    """Conduction-electron density (m^-3) that re-neutralizes the donor.

    n = 1 / (sigma * v_th * t) with the thermal velocity taken at the
    conduction effective mass. ~1e13 cm^-3 for capture in 1 ns at 4 K.
    """
    if not capture_time > 0:
        raise ValueError(f"capture_time must be positive, got {capture_time}")
    v_th = math.sqrt(
        3.0 * const.K_B * env.temperature
        / (donor.effective_mass_ratio * const.M_E)
    )
    return 1.0 / (donor.capture_cross_section * v_th * capture_time)


def build_level_diagram(
    env: MagneticEnvironment,
    donor: DonorParameters,
    hole_spacing: float | None = None,
    target_occupation: float = const.LOWEST_LEVEL_OCCUPATION_TARGET,
) -> LevelDiagram:
    """Assemble the level diagram at the given operating point.

    When hole_spacing is omitted it is calibrated so the lowest-level
    occupation hits target_occupation (0.8 at 10 T, 4 K).
    """
    if hole_spacing is None:
        hole_spacing = calibrate_hole_spacing(env, target_occupation)
    return LevelDiagram(
        hyperfine_splitting=hyperfine_splitting(donor),
        electron_zeeman=electron_zeeman_frequency(env, donor.g0),
        hole_level_spacing=hole_spacing,
        lowest_occupation=lowest_level_occupation(env, hole_spacing),
    )
