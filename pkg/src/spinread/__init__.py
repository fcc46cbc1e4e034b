"""Optical readout of a single donor nuclear spin: analytics and Monte Carlo.

The package splits along the physics: static level structure
(physics), the photon budget of the excitation cycle (emission), the
delay-interferometer statistics that discriminate the two lines
(interferometer), measurement-induced nuclear flips (spindyn), and a
seeded trajectory engine composing all of it (montecarlo). config/cli
wrap everything behind unit-checked configuration files and a table
emitting command line tool.
"""

from .config import ConfigError, default_config, load_config
from .emission import (
    PRESETS,
    CavityPreset,
    EmissionModel,
    build_emission_model,
    collected_flux,
    detected_flux,
    emitted_signal_flux,
)
from .interferometer import (
    InterferometerConfig,
    SpectralLine,
    current_variance,
    integration_time,
    mean_current,
    optimal_delay,
    port_probability,
    sample_photon_detuning,
    snr_per_photon,
)
from .montecarlo import (
    MomentReport,
    ReadoutEstimate,
    SimulationConfig,
    Trajectory,
    derive_model,
    estimate_state,
    fidelity_curve,
    fidelity_vs_photon_count,
    gaussian_decision_fidelity,
    mc_moment_validation,
    run_readout,
    simulate_trajectory,
    wilson_interval,
)
from .physics import (
    DonorParameters,
    LevelDiagram,
    MagneticEnvironment,
    build_level_diagram,
    calibrate_hole_spacing,
    electron_zeeman_frequency,
    hyperfine_splitting,
    lowest_level_occupation,
    neutralization_electron_density,
    transition_frequencies,
)
from .report import PaperRow, paper_table
from .spindyn import (
    FlipModel,
    PhotonBudget,
    RandomizationBudget,
    be_flip_suppression,
    budget_before_randomization,
    build_flip_model,
    excitations_to_randomization,
    flip_probability_per_cycle,
)

__version__ = "0.1.0"
