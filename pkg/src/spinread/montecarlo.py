"""Seeded stochastic trajectory engine for the full readout protocol.

Each excitation cycle is one Bernoulli trial for a nuclear flip and one
for a collectible signal photon; Auger cycles risk flips without giving
a photon, which is the whole tension of the protocol. Cycles run on a
fixed clock (cycle_time each), flips are applied before emission within
a cycle, detected photons get an exit port from the interferometer law,
and Poisson dark counts are overlaid with fair port assignment.

Randomness: one 64-bit root seed. Trial k draws from the stream
SeedSequence(entropy=seed, spawn_key=(k, 0)); the estimator's tie-break
coin for trial k uses spawn_key=(k, 1); photon-count-resolved fidelity
sampling uses spawn_key=(2,) on a dedicated index. Streams are therefore
independent, and any subset of trials can run concurrently and still
reproduce bit-identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import constants as const
from .emission import CavityPreset, EmissionModel, build_emission_model
from .interferometer import (
    InterferometerConfig,
    SpectralLine,
    current_variance,
    mean_current,
)
from .kernels import photon_ports, trajectory_chunk
from .physics import (
    DonorParameters,
    LevelDiagram,
    MagneticEnvironment,
    build_level_diagram,
    transition_frequencies,
)
from .spindyn import FlipModel

__all__ = [
    "SimulationConfig",
    "DerivedModel",
    "Trajectory",
    "ReadoutEstimate",
    "MomentReport",
    "derive_model",
    "simulate_trajectory",
    "estimate_state",
    "run_readout",
    "fidelity_curve",
    "fidelity_vs_photon_count",
    "mc_moment_validation",
    "gaussian_decision_fidelity",
    "wilson_interval",
]

STATE_UP = 1
STATE_DOWN = -1

_TRAJECTORY_STREAM = 0
_ESTIMATOR_STREAM = 1
_PHOTON_FIDELITY_KEY = 2

_MAX_CHUNK = 1 << 16


def _state_name(state: int) -> str:
    return "up" if state > 0 else "down"


@dataclass(frozen=True)
class SimulationConfig:
    """Everything one experiment needs, physics plus run control."""

    env: MagneticEnvironment
    donor: DonorParameters
    cavity: CavityPreset
    interferometer: InterferometerConfig
    flip: FlipModel
    initial_nuclear_state: str = "up"
    duration: float = 0.5
    seed: int = 123456789
    trials: int = 1000
    recapture_time: float = const.RECAPTURE_TIME_DEFAULT
    hole_spacing: float | None = None
    target_occupation: float = const.LOWEST_LEVEL_OCCUPATION_TARGET

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")
        if self.initial_nuclear_state not in ("up", "down", "random"):
            raise ValueError(
                "initial_nuclear_state must be 'up', 'down' or 'random', got "
                f"{self.initial_nuclear_state!r}"
            )


@dataclass(frozen=True)
class DerivedModel:
    """Per-cycle quantities the engine actually consumes."""

    diagram: LevelDiagram
    emission: EmissionModel
    line_up: SpectralLine
    line_down: SpectralLine
    p_flip: float  # per cycle, capture channels plus background
    p_emit: float  # per cycle, collectible signal photon emitted
    p_detect: float  # per emitted photon, reaches a detector

    @property
    def p_detected_per_cycle(self) -> float:
        return self.p_emit * self.p_detect


def derive_model(cfg: SimulationConfig) -> DerivedModel:
    """Fold the physics configuration down to per-cycle probabilities.

    Inconsistencies (probabilities escaping [0, 1]) are rejected here,
    before any trajectory runs.
    """
    diagram = build_level_diagram(
        cfg.env, cfg.donor, cfg.hole_spacing, cfg.target_occupation
    )
    emission = build_emission_model(
        cfg.donor, diagram.lowest_occupation, cfg.cavity, cfg.recapture_time
    )
    det_up, det_down = transition_frequencies(diagram.hyperfine_splitting)
    fwhm = 2.0 * math.pi * cfg.donor.linewidth_fwhm
    p_flip = (
        cfg.flip.p_flip_per_cycle
        + cfg.flip.background_rate * emission.cycle_time
    )
    p_emit = emission.radiative_branching * emission.signal_fraction
    p_detect = (
        cfg.cavity.beta
        * cfg.cavity.extra_collection
        * cfg.interferometer.detector_efficiency
    )
    for name, p in (("p_flip", p_flip), ("p_emit", p_emit), ("p_detect", p_detect)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"inconsistent configuration: {name} = {p}")
    return DerivedModel(
        diagram=diagram,
        emission=emission,
        line_up=SpectralLine(det_up, fwhm),
        line_down=SpectralLine(det_down, fwhm),
        p_flip=p_flip,
        p_emit=p_emit,
        p_detect=p_detect,
    )


@dataclass(frozen=True)
class Trajectory:
    """One simulated readout run.

    times/ports/is_dark describe detection events in time order (port
    +1 = e, -1 = f); flip_times the nuclear flips. Signal events are
    stamped at the end of their cycle.
    """

    times: np.ndarray
    ports: np.ndarray
    is_dark: np.ndarray
    flip_times: np.ndarray
    cycles: int
    duration: float
    initial_state: int
    final_state: int
    trial_index: int

    def __post_init__(self):
        for name, arr in (("times", self.times), ("flip_times", self.flip_times)):
            if arr.size > 1 and not np.all(np.diff(arr) > 0):
                raise ValueError(f"{name} must be strictly increasing")
        if self.n_signal > self.cycles:
            raise ValueError("more signal detections than cycles")

    @property
    def n_detected(self) -> int:
        return int(self.times.size)

    @property
    def n_signal(self) -> int:
        return int((~self.is_dark).sum())

    @property
    def n_flips(self) -> int:
        return int(self.flip_times.size)

    @property
    def integrated_current(self) -> int:
        return int(self.ports.sum())

    @property
    def events(self) -> list[tuple[float, str, str]]:
        """Detection events as (time, port 'e'|'f', origin 'signal'|'dark')."""
        return [
            (float(t), "e" if p > 0 else "f", "dark" if d else "signal")
            for t, p, d in zip(self.times, self.ports, self.is_dark)
        ]

    @property
    def true_state_timeline(self) -> list[tuple[float, str]]:
        """Piecewise-constant nuclear state: (start time, state) pairs."""
        out = [(0.0, _state_name(self.initial_state))]
        state = self.initial_state
        for t in self.flip_times:
            state = -state
            out.append((float(t), _state_name(state)))
        return out


@dataclass(frozen=True)
class ReadoutEstimate:
    """Sign-detector decision on a trajectory's integrated current."""

    decided_state: str
    integrated_current: int
    n_detected: int
    confidence: float

    def __post_init__(self):
        if abs(self.integrated_current) > self.n_detected:
            raise ValueError("integrated current exceeds detection count")
        if not 0.5 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0.5, 1], got {self.confidence}")


def _trial_rng(seed: int, trial_index: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(trial_index, stream))
    )


def simulate_trajectory(
    cfg: SimulationConfig,
    trial_index: int,
    backend: str | None = None,
    derived: DerivedModel | None = None,
) -> Trajectory:
    """Run one seeded trajectory; identical inputs give identical output.

    The per-cycle Bernoulli pair (flip, emission) is sampled exactly via
    geometric gap skipping in the kernels; see kernels.py.
    """
    d = derived if derived is not None else derive_model(cfg)
    rng = _trial_rng(cfg.seed, trial_index, _TRAJECTORY_STREAM)

    if cfg.initial_nuclear_state == "random":
        state0 = STATE_UP if rng.random() < 0.5 else STATE_DOWN
    else:
        state0 = STATE_UP if cfg.initial_nuclear_state == "up" else STATE_DOWN

    cycle_time = d.emission.cycle_time
    n_cycles = int(cfg.duration / cycle_time)
    p_flip, p_emit = d.p_flip, d.p_emit
    p_any = 1.0 - (1.0 - p_flip) * (1.0 - p_emit)

    sig_cycles: list[np.ndarray] = []
    sig_ports: list[np.ndarray] = []
    flip_cycles: list[np.ndarray] = []
    state = state0

    if n_cycles > 0 and p_any > 0.0:
        log1m_p_any = math.log1p(-p_any) if p_any < 1.0 else -math.inf
        c_flip_only = p_flip * (1.0 - p_emit) / p_any
        c_emit_hi = c_flip_only + (1.0 - p_flip) * p_emit / p_any
        icfg = cfg.interferometer
        base = 0
        while base < n_cycles:
            remaining = n_cycles - base
            expect = remaining * p_any
            size = int(min(_MAX_CHUNK, max(256.0, expect + 10.0 * math.sqrt(expect) + 16.0)))
            u = rng.random((5, size))
            k, done, used, pos, is_flip, detected, ports, state = trajectory_chunk(
                u, state, remaining, log1m_p_any, c_flip_only, c_emit_hi,
                d.p_detect, d.line_up.detuning, d.line_down.detuning,
                0.5 * d.line_up.fwhm, icfg.delay, float(icfg.bias_parity),
                backend=backend,
            )
            abs_cycle = base + pos - 1
            if k:
                flip_cycles.append(abs_cycle[is_flip])
                sig_cycles.append(abs_cycle[detected])
                sig_ports.append(ports[detected])
            base = n_cycles if done else base + used

    sig_cycle_arr = (
        np.concatenate(sig_cycles) if sig_cycles else np.empty(0, np.int64)
    )
    sig_port_arr = (
        np.concatenate(sig_ports) if sig_ports else np.empty(0, np.int8)
    )
    flip_cycle_arr = (
        np.concatenate(flip_cycles) if flip_cycles else np.empty(0, np.int64)
    )
    sig_times = (sig_cycle_arr + 1) * cycle_time
    flip_times = (flip_cycle_arr + 1) * cycle_time

    dark_rate = cfg.interferometer.dark_rate
    if dark_rate > 0.0:
        n_dark = int(rng.poisson(dark_rate * cfg.duration))
        dark_times = np.sort(rng.random(n_dark)) * cfg.duration
        dark_ports = np.where(rng.random(n_dark) < 0.5, 1, -1).astype(np.int8)
    else:
        dark_times = np.empty(0, np.float64)
        dark_ports = np.empty(0, np.int8)

    times = np.concatenate([sig_times, dark_times])
    ports = np.concatenate([sig_port_arr, dark_ports])
    is_dark = np.concatenate(
        [np.zeros(sig_times.size, bool), np.ones(dark_times.size, bool)]
    )
    order = np.argsort(times, kind="stable")

    return Trajectory(
        times=times[order],
        ports=ports[order],
        is_dark=is_dark[order],
        flip_times=flip_times,
        cycles=n_cycles,
        duration=cfg.duration,
        initial_state=state0,
        final_state=int(state),
        trial_index=trial_index,
    )


def estimate_state(
    traj: Trajectory,
    cfg: SimulationConfig,
    derived: DerivedModel | None = None,
) -> ReadoutEstimate:
    """Sign detector on the integrated +/-1 current, with a Gaussian
    confidence from the per-photon line statistics.

    Zero current (including the empty trajectory) falls back to a fair
    coin from the trial's estimator stream, at confidence exactly 1/2.
    """
    d = derived if derived is not None else derive_model(cfg)
    icfg = cfg.interferometer
    mu_up = mean_current(d.line_up, icfg)
    mu_down = mean_current(d.line_down, icfg)
    var_up = current_variance(d.line_up, icfg)
    var_down = current_variance(d.line_down, icfg)

    n = traj.n_detected
    current = traj.integrated_current

    if n == 0 or current == 0 or mu_up == mu_down:
        coin = _trial_rng(cfg.seed, traj.trial_index, _ESTIMATOR_STREAM)
        decided = STATE_UP if coin.random() < 0.5 else STATE_DOWN
        return ReadoutEstimate(_state_name(decided), current, n, 0.5)

    decided = STATE_UP if (current > 0) == (mu_up > mu_down) else STATE_DOWN
    # log-likelihoods of the observed current under the two hypotheses
    ll_up = -((current - n * mu_up) ** 2) / (2.0 * n * var_up) - 0.5 * math.log(var_up)
    ll_down = (
        -((current - n * mu_down) ** 2) / (2.0 * n * var_down)
        - 0.5 * math.log(var_down)
    )
    gap = abs(ll_up - ll_down)
    confidence = 1.0 / (1.0 + math.exp(-gap))
    return ReadoutEstimate(_state_name(decided), current, n, confidence)


def run_readout(
    cfg: SimulationConfig,
    trial_index: int,
    backend: str | None = None,
    derived: DerivedModel | None = None,
) -> tuple[Trajectory, ReadoutEstimate]:
    traj = simulate_trajectory(cfg, trial_index, backend=backend, derived=derived)
    return traj, estimate_state(traj, cfg, derived=derived)


def wilson_interval(successes: int, n: int, z: float = 2.5758293035489004):
    """Wilson score interval; default z is the two-sided 99% quantile."""
    if n == 0:
        return 0.0, 1.0
    p = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
    return center - half, center + half


def gaussian_decision_fidelity(
    n_photons: float, mean_per_photon: float, var_per_photon: float
) -> float:
    """Success probability of the sign detector in the Gaussian model.

    The integrated current over n photons is N(+/- n*mu, n*sigma^2)
    under the two symmetric hypotheses, so the sign test succeeds with
    probability Phi(sqrt(n) |mu| / sigma).
    """
    if n_photons <= 0:
        return 0.5
    x = math.sqrt(n_photons) * abs(mean_per_photon) / math.sqrt(var_per_photon)
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def fidelity_curve(
    cfg: SimulationConfig,
    time_grid,
    backend: str | None = None,
    z: float = 2.5758293035489004,
) -> list[dict]:
    """Readout fidelity versus integration time.

    For each time, cfg.trials trajectories run with the two initial
    states balanced (even trials up, odd down); fidelity is the fraction
    of correct decisions with a Wilson score interval.
    """
    if cfg.trials < 2:
        raise ValueError("fidelity_curve needs at least 2 trials")
    rows = []
    for t in time_grid:
        cfg_t_up = replace(cfg, duration=float(t), initial_nuclear_state="up")
        cfg_t_down = replace(cfg, duration=float(t), initial_nuclear_state="down")
        derived = derive_model(cfg_t_up)
        correct = 0
        detected = 0
        for trial in range(cfg.trials):
            cfg_t = cfg_t_up if trial % 2 == 0 else cfg_t_down
            traj, est = run_readout(cfg_t, trial, backend=backend, derived=derived)
            correct += est.decided_state == _state_name(traj.initial_state)
            detected += traj.n_detected
        lo, hi = wilson_interval(correct, cfg.trials, z)
        rows.append({
            "time_s": float(t),
            "fidelity": correct / cfg.trials,
            "wilson_low": lo,
            "wilson_high": hi,
            "mean_detected": detected / cfg.trials,
            "trials": cfg.trials,
        })
    return rows


def fidelity_vs_photon_count(
    cfg: SimulationConfig,
    photon_counts,
    trials: int | None = None,
    backend: str | None = None,
    z: float = 2.5758293035489004,
) -> list[dict]:
    """Fidelity conditioned on exactly n detected photons, flips aside.

    With flips disabled photons are i.i.d., so conditioning on the count
    is exact and the sign detector can be probed directly against the
    Gaussian decision model without burning full trajectories.
    """
    d = derive_model(cfg)
    icfg = cfg.interferometer
    n_trials = trials if trials is not None else cfg.trials
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=cfg.seed, spawn_key=(_PHOTON_FIDELITY_KEY,))
    )
    mu_up = mean_current(d.line_up, icfg)
    rows = []
    for n in photon_counts:
        n = int(n)
        correct = 0
        for trial in range(n_trials):
            state = STATE_UP if trial % 2 == 0 else STATE_DOWN
            line = d.line_up if state == STATE_UP else d.line_down
            ports = photon_ports(
                rng.random(n), rng.random(n),
                line.detuning, 0.5 * line.fwhm,
                icfg.delay, float(icfg.bias_parity),
                backend=backend,
            )
            current = int(ports.sum())
            if current == 0:
                decided = STATE_UP if rng.random() < 0.5 else STATE_DOWN
            else:
                decided = STATE_UP if (current > 0) == (mu_up > 0) else STATE_DOWN
            correct += decided == state
        lo, hi = wilson_interval(correct, n_trials, z)
        rows.append({
            "n_photons": n,
            "fidelity": correct / n_trials,
            "wilson_low": lo,
            "wilson_high": hi,
            "trials": n_trials,
        })
    return rows


@dataclass(frozen=True)
class MomentReport:
    """Empirical vs predicted first two moments of the port variable."""

    n: int
    mean_predicted: float
    mean_empirical: float
    mean_se: float
    var_predicted: float
    var_empirical: float
    var_se: float

    @property
    def mean_deviation_se(self) -> float:
        return abs(self.mean_empirical - self.mean_predicted) / self.mean_se

    @property
    def var_deviation_se(self) -> float:
        return abs(self.var_empirical - self.var_predicted) / self.var_se

    def passed(self, n_se: float = 5.0) -> bool:
        return self.mean_deviation_se <= n_se and self.var_deviation_se <= n_se


def mc_moment_validation(
    line: SpectralLine,
    cfg: InterferometerConfig,
    n: int,
    seed: int,
    backend: str | None = None,
) -> MomentReport:
    """Sample n photons from the line and compare the empirical mean and
    variance of the +/-1 port variable against the analytic forms.

    Standard errors: se(mean) = sigma/sqrt(n); for the variance, which
    for a +/-1 variable is determined by the sample mean, the delta
    method gives se^2 = 4 mu^2 sigma^2 / n + 2 sigma^4 / n^2.
    """
    if n < 10_000:
        raise ValueError(f"n must be >= 10000 for stable moments, got {n}")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    ports = photon_ports(
        rng.random(n), rng.random(n),
        line.detuning, 0.5 * line.fwhm, cfg.delay, float(cfg.bias_parity),
        backend=backend,
    ).astype(np.float64)
    mean_pred = mean_current(line, cfg)
    var_pred = current_variance(line, cfg)
    mean_emp = float(ports.mean())
    var_emp = float(ports.var(ddof=1))
    mean_se = math.sqrt(var_pred / n)
    var_se = math.sqrt(
        4.0 * mean_pred * mean_pred * var_pred / n
        + 2.0 * var_pred * var_pred / (n * n)
    )
    return MomentReport(n, mean_pred, mean_emp, mean_se, var_pred, var_emp, var_se)
