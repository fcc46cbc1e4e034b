"""Configuration files: flat TOML with unit-suffixed quantity strings.

Example:

    b_field = "10 T"
    temperature = "4 K"
    linewidth_fwhm = "150 MHz"
    cavity_preset = "dbr"
    detector_efficiency = 0.4
    duration = "0.5 s"
    seed = 123456789

Dimensioned keys take strings with explicit units (see units.py);
dimensionless keys take plain numbers. Unknown keys are rejected with
the list of valid ones. Every key has a default matching the protocol's
nominal operating point, so an empty file (or no file) is valid.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import constants as const
from .emission import PRESETS, CavityPreset, build_emission_model
from .interferometer import InterferometerConfig
from .montecarlo import SimulationConfig, derive_model
from .physics import DonorParameters, MagneticEnvironment, build_level_diagram
from .spindyn import FlipModel, build_flip_model
from .units import UnitError, parse_quantity

__all__ = ["ConfigError", "load_config", "default_config", "CONFIG_KEYS"]


class ConfigError(ValueError):
    """Bad configuration file: syntax, key, type, or unit problems."""


@dataclass(frozen=True)
class _Key:
    name: str
    kind: str  # "quantity" | "float" | "int" | "bool" | "str"
    dimension: str | None = None
    choices: tuple[str, ...] | None = None


_KEYS = [
    _Key("b_field", "quantity", "magnetic_field"),
    _Key("temperature", "quantity", "temperature"),
    _Key("psi0_sq", "quantity", "number_density"),
    _Key("gamma_n", "quantity", "gyromagnetic_ratio"),
    _Key("g0", "float"),
    _Key("tau_auger", "quantity", "time"),
    _Key("tau_rad", "quantity", "time"),
    _Key("linewidth_fwhm", "quantity", "frequency"),
    _Key("be_hyperfine", "quantity", "frequency"),
    _Key("capture_cross_section", "quantity", "area"),
    _Key("effective_mass_ratio", "float"),
    _Key("cavity_preset", "str", choices=tuple(PRESETS)),
    _Key("cavity_beta", "float"),
    _Key("cavity_rate_factor", "float"),
    _Key("cavity_extra_collection", "float"),
    _Key("delay", "quantity", "time"),
    _Key("bias_parity", "int"),
    _Key("detector_efficiency", "float"),
    _Key("dark_rate", "quantity", "rate"),
    _Key("recapture_time", "quantity", "time"),
    _Key("hole_spacing", "quantity", "frequency"),
    _Key("target_occupation", "float"),
    _Key("flip_probability", "float"),
    _Key("background_flip_rate", "quantity", "rate"),
    _Key("randomization_threshold", "float"),
    _Key("include_be_flip_channel", "bool"),
    _Key("include_radiative_flip_channel", "bool"),
    _Key("exciton_dos_factor", "float"),
    _Key("initial_state", "str", choices=("up", "down", "random")),
    _Key("duration", "quantity", "time"),
    _Key("seed", "int"),
    _Key("trials", "int"),
]

CONFIG_KEYS = {k.name: k for k in _KEYS}


def _coerce(key: _Key, raw: Any) -> Any:
    if key.kind == "quantity":
        if not isinstance(raw, str):
            raise ConfigError(
                f"key {key.name!r}: dimensioned values must be strings with "
                f'units, e.g. "10 T"; got {raw!r}'
            )
        try:
            return parse_quantity(raw, key.dimension)
        except UnitError as exc:
            raise ConfigError(f"key {key.name!r}: {exc}") from None
    if key.kind == "float":
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise ConfigError(f"key {key.name!r}: expected a number, got {raw!r}")
        return float(raw)
    if key.kind == "int":
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ConfigError(f"key {key.name!r}: expected an integer, got {raw!r}")
        return int(raw)
    if key.kind == "bool":
        if not isinstance(raw, bool):
            raise ConfigError(f"key {key.name!r}: expected true/false, got {raw!r}")
        return bool(raw)
    if key.kind == "str":
        if not isinstance(raw, str):
            raise ConfigError(f"key {key.name!r}: expected a string, got {raw!r}")
        if key.choices and raw not in key.choices:
            raise ConfigError(
                f"key {key.name!r}: must be one of {list(key.choices)}, got {raw!r}"
            )
        return raw
    raise AssertionError(key.kind)


def _read_file(path: str) -> dict[str, Any]:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        # tomllib error messages carry line/column positions
        raise ConfigError(f"config {path!r}: {exc}") from None
    for name, raw in data.items():
        if isinstance(raw, dict):
            raise ConfigError(
                f"config {path!r}: key {name!r} opens a table; the format "
                "is flat key = value"
            )
        if name not in CONFIG_KEYS:
            raise ConfigError(
                f"config {path!r}: unknown key {name!r}; valid keys: "
                f"{', '.join(sorted(CONFIG_KEYS))}"
            )
    return data


def build_simulation_config(values: dict[str, Any]) -> SimulationConfig:
    """Assemble a SimulationConfig from coerced key values plus defaults."""
    try:
        return _assemble(values)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _assemble(values: dict[str, Any]) -> SimulationConfig:
    get = values.get
    env = MagneticEnvironment(
        b_field=get("b_field", const.B_FIELD_DEFAULT),
        temperature=get("temperature", const.TEMPERATURE_DEFAULT),
    )
    donor = DonorParameters(
        psi0_sq=get("psi0_sq", const.PSI0_SQ_31P),
        gamma_n=get("gamma_n", const.GAMMA_N_31P),
        g0=get("g0", const.G0_FREE_ELECTRON),
        tau_auger=get("tau_auger", const.TAU_AUGER),
        tau_rad=get("tau_rad", const.TAU_RADIATIVE),
        linewidth_fwhm=get("linewidth_fwhm", const.LINEWIDTH_ENSEMBLE),
        be_hyperfine=get("be_hyperfine", const.BE_HYPERFINE),
        capture_cross_section=get(
            "capture_cross_section", const.CAPTURE_CROSS_SECTION
        ),
        effective_mass_ratio=get(
            "effective_mass_ratio", const.EFFECTIVE_MASS_RATIO
        ),
    )
    preset = PRESETS[get("cavity_preset", "dbr")]
    cavity = CavityPreset(
        name=preset.name,
        beta=get("cavity_beta", preset.beta),
        radiative_rate_factor=get(
            "cavity_rate_factor", preset.radiative_rate_factor
        ),
        extra_collection=get("cavity_extra_collection", preset.extra_collection),
    )
    interferometer = InterferometerConfig(
        delay=get("delay", const.DELAY_DEFAULT),
        bias_parity=get("bias_parity", 1),
        detector_efficiency=get(
            "detector_efficiency", const.DETECTOR_EFFICIENCY_TES
        ),
        dark_rate=get("dark_rate", 0.0),
    )
    recapture_time = get("recapture_time", const.RECAPTURE_TIME_DEFAULT)
    hole_spacing = get("hole_spacing")
    target_occupation = get(
        "target_occupation", const.LOWEST_LEVEL_OCCUPATION_TARGET
    )
    background = get("background_flip_rate", const.BACKGROUND_FLIP_RATE)
    threshold = get("randomization_threshold", 0.1)
    if "flip_probability" in values:
        flip = FlipModel(
            p_flip_per_cycle=values["flip_probability"],
            background_rate=background,
            randomization_threshold=threshold,
        )
    else:
        diagram = build_level_diagram(env, donor, hole_spacing, target_occupation)
        emission = build_emission_model(
            donor, diagram.lowest_occupation, cavity, recapture_time
        )
        flip = build_flip_model(
            donor, env, emission,
            background_rate=background,
            randomization_threshold=threshold,
            include_be_channel=get("include_be_flip_channel", True),
            include_radiative_channel=get("include_radiative_flip_channel", True),
            exciton_dos_factor=get("exciton_dos_factor", 1.0),
        )
    cfg = SimulationConfig(
        env=env,
        donor=donor,
        cavity=cavity,
        interferometer=interferometer,
        flip=flip,
        initial_nuclear_state=get("initial_state", "up"),
        duration=get("duration", 0.5),
        seed=get("seed", 123456789),
        trials=get("trials", 1000),
        recapture_time=recapture_time,
        hole_spacing=hole_spacing,
        target_occupation=target_occupation,
    )
    try:
        derive_model(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def load_values(path: str | None) -> dict[str, Any]:
    """Read a config file into coerced SI values (empty when path is None)."""
    raw = _read_file(path) if path is not None else {}
    return {name: _coerce(CONFIG_KEYS[name], value) for name, value in raw.items()}


def load_config(path: str | None = None, **overrides: Any) -> SimulationConfig:
    """Load a config file (or defaults when path is None).

    Keyword overrides take already-coerced SI values and win over the
    file; the CLI uses them for --seed/--trials/--duration.
    """
    values = load_values(path)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return build_simulation_config(values)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def default_config(**overrides: Any) -> SimulationConfig:
    return load_config(None, **overrides)
