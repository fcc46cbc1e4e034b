"""Command-line front end.

Verbs:

    paper-table   reproduce the headline numbers against their bands
    validate      same table; exit 1 if any row is out of its band
    snr-scan      per-photon SNR versus interferometer delay
    simulate      per-trial Monte Carlo readout records
    fidelity      readout fidelity versus integration time
    sweep         analytic pipeline versus one swept parameter

Tables go to --out (default stdout) as CSV or JSON lines; every row
carries a schema tag naming its column set, documented in the README.
All randomness flows from --seed (or the config seed; the packaged
default is 123456789, never the clock).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .config import ConfigError, build_simulation_config, load_values
from .emission import PRESETS, collected_flux
from .interferometer import snr_per_photon
from .montecarlo import derive_model, fidelity_curve, run_readout
from .report import paper_table
from .spindyn import (
    FlipModel,
    budget_before_randomization,
    excitations_to_randomization,
    flip_probability_per_cycle,
)
from .units import UnitError, parse_quantity

SCHEMAS = {
    "paper-table": ("spinread.paper-table/1",
                    ["schema", "quantity", "unit", "computed", "paper",
                     "lo", "hi", "rel_dev", "status"]),
    "snr-scan": ("spinread.snr-scan/1",
                 ["schema", "kind", "tau_ns", "snr_per_photon"]),
    "simulate": ("spinread.simulate/1",
                 ["schema", "trial", "initial_state", "decided_state",
                  "correct", "n_detected", "n_signal", "n_dark", "n_flips",
                  "integrated_current", "confidence"]),
    "fidelity": ("spinread.fidelity/1",
                 ["schema", "time_s", "fidelity", "wilson_low",
                  "wilson_high", "mean_detected", "trials"]),
    "sweep": ("spinread.sweep/1",
              ["schema", "param", "value", "hyperfine_mhz",
               "electron_zeeman_ghz", "lowest_occupation", "snr_per_photon",
               "collected_flux", "detected_flux", "integration_time_s",
               "flip_probability", "budget_cycles",
               "budget_detected_photons", "budget_power_snr"]),
}
SCHEMAS["validate"] = SCHEMAS["paper-table"]

SWEEPABLE = {
    "b_field": "magnetic_field",
    "temperature": "temperature",
    "linewidth_fwhm": "frequency",
    "delay": "time",
    "detector_efficiency": None,  # dimensionless
    "cavity_preset": "preset",
}
_PARAM_ALIASES = {"eta_d": "detector_efficiency"}


@dataclass(frozen=True)
class RunManifest:
    """One CLI invocation, resolved."""

    command: str
    config_path: str | None
    output_path: str | None
    output_format: str
    seed_override: int | None
    trials_override: int | None
    duration_override: float | None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinread",
        description="Single nuclear spin optical readout: analytics and Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", default=None,
                       help="flat TOML config with unit-suffixed values")
        p.add_argument("--out", metavar="PATH", default=None,
                       help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json-lines"), default="csv")
        p.add_argument("--seed", type=int, default=None,
                       help="root RNG seed (overrides config)")
        p.add_argument("--trials", type=int, default=None,
                       help="number of Monte Carlo trials (overrides config)")
        p.add_argument("--duration", type=float, default=None, metavar="SECONDS",
                       help="simulated duration in seconds (overrides config)")

    common(sub.add_parser("paper-table", help="reproduce headline numbers"))
    common(sub.add_parser("validate", help="paper-table; exit 1 on any failure"))

    p = sub.add_parser("snr-scan", help="SNR per photon versus delay")
    common(p)
    p.add_argument("--tau-min", default="0.1 ns", metavar="QUANTITY")
    p.add_argument("--tau-max", default="5 ns", metavar="QUANTITY")
    p.add_argument("--tau-points", type=int, default=100)

    common(sub.add_parser("simulate", help="per-trial readout records"))

    p = sub.add_parser("fidelity", help="fidelity versus integration time")
    common(p)
    p.add_argument("--times", default=None, metavar="LIST",
                   help='comma-separated times with units, e.g. "1 ms,10 ms,0.1 s"')
    p.add_argument("--time-min", default="1 ms", metavar="QUANTITY")
    p.add_argument("--time-max", default="1 s", metavar="QUANTITY")
    p.add_argument("--time-points", type=int, default=7)

    p = sub.add_parser("sweep", help="re-run the analytic pipeline per value")
    common(p)
    p.add_argument("--param", required=True,
                   help=f"one of: {', '.join(sorted(SWEEPABLE))}")
    p.add_argument("--values", required=True, metavar="LIST",
                   help='comma-separated values, with units where dimensioned')
    return parser


def _write_rows(rows, command: str, out_path: str | None, fmt: str) -> None:
    schema_id, columns = SCHEMAS[command]
    tagged = []
    for row in rows:
        full = {"schema": schema_id, **row}
        missing = [c for c in columns if c not in full]
        extra = [c for c in full if c not in columns]
        if missing or extra:
            raise AssertionError(f"schema mismatch: missing={missing} extra={extra}")
        tagged.append({c: full[c] for c in columns})

    def emit(fh):
        if fmt == "csv":
            writer = csv.DictWriter(fh, fieldnames=columns)
            writer.writeheader()
            writer.writerows(tagged)
        else:
            for row in tagged:
                fh.write(json.dumps(row) + "\n")

    if out_path in (None, "-"):
        emit(sys.stdout)
    else:
        with open(out_path, "w", newline="") as fh:
            emit(fh)


def _paper_rows(cfg):
    rows = []
    for r in paper_table(cfg):
        rows.append({
            "quantity": r.quantity,
            "unit": r.unit,
            "computed": r.computed,
            "paper": r.paper,
            "lo": r.lo,
            "hi": r.hi,
            "rel_dev": r.rel_dev,
            "status": "ok" if r.ok else "out_of_range",
        })
    return rows


def _cmd_paper_table(cfg, args) -> tuple[list[dict], int]:
    rows = _paper_rows(cfg)
    code = 0
    if args.command == "validate":
        code = 0 if all(r["status"] == "ok" for r in rows) else 1
    return rows, code


def _cmd_snr_scan(cfg, args) -> tuple[list[dict], int]:
    try:
        tau_min = parse_quantity(args.tau_min, "time")
        tau_max = parse_quantity(args.tau_max, "time")
    except UnitError as exc:
        raise ConfigError(f"snr-scan: {exc}") from None
    if args.tau_points < 1 or not tau_min > 0 or not tau_max > tau_min:
        raise ConfigError(
            "snr-scan: need tau_points >= 1 and 0 < tau-min < tau-max"
        )
    d = derive_model(cfg)
    delta_omega = 2.0 * d.line_up.detuning  # line split = 2*pi*hyperfine
    gamma = d.line_up.fwhm
    rows = []
    for tau in np.linspace(tau_min, tau_max, args.tau_points):
        rows.append({
            "kind": "scan",
            "tau_ns": float(tau) * 1e9,
            "snr_per_photon": snr_per_photon(delta_omega, gamma, float(tau)),
        })
    from .interferometer import optimal_delay

    tau_star, snr_star = optimal_delay(delta_omega, gamma)
    rows.append({
        "kind": "optimum",
        "tau_ns": tau_star * 1e9,
        "snr_per_photon": snr_star,
    })
    return rows, 0


def _cmd_simulate(cfg, args) -> tuple[list[dict], int]:
    derived = derive_model(cfg)
    rows = []
    for trial in range(cfg.trials):
        traj, est = run_readout(cfg, trial, derived=derived)
        initial = "up" if traj.initial_state > 0 else "down"
        rows.append({
            "trial": trial,
            "initial_state": initial,
            "decided_state": est.decided_state,
            "correct": int(est.decided_state == initial),
            "n_detected": traj.n_detected,
            "n_signal": traj.n_signal,
            "n_dark": traj.n_detected - traj.n_signal,
            "n_flips": traj.n_flips,
            "integrated_current": est.integrated_current,
            "confidence": est.confidence,
        })
    return rows, 0


def _cmd_fidelity(cfg, args) -> tuple[list[dict], int]:
    try:
        if args.times:
            grid = [parse_quantity(t.strip(), "time") for t in args.times.split(",")]
        else:
            t0 = parse_quantity(args.time_min, "time")
            t1 = parse_quantity(args.time_max, "time")
            if args.time_points < 1 or not t0 > 0 or not t1 >= t0:
                raise ConfigError("fidelity: need 0 < time-min <= time-max")
            grid = list(np.geomspace(t0, t1, args.time_points))
    except UnitError as exc:
        raise ConfigError(f"fidelity: {exc}") from None
    rows = fidelity_curve(cfg, grid)
    return rows, 0


def _sweep_row(values: dict, param: str, display_value) -> dict:
    cfg = build_simulation_config(values)
    d = derive_model(cfg)
    hf = d.diagram.hyperfine_splitting
    zeeman = d.diagram.electron_zeeman
    gamma = d.line_up.fwhm
    snr1 = snr_per_photon(2.0 * math.pi * hf, gamma, cfg.interferometer.delay)
    coll = collected_flux(d.emission, cfg.cavity)
    eta_d = cfg.interferometer.detector_efficiency
    det = coll * eta_d
    t_int = 1.0 / (snr1 * det) if snr1 > 0 and det > 0 else math.inf
    p_flip = flip_probability_per_cycle(hf, zeeman)
    budget = excitations_to_randomization(FlipModel(
        p_flip_per_cycle=p_flip,
        background_rate=0.0,
        randomization_threshold=cfg.flip.randomization_threshold,
    )).linear_cycles
    photons = budget_before_randomization(
        budget, d.emission, cfg.cavity, eta_d, snr1
    )
    return {
        "param": param,
        "value": display_value,
        "hyperfine_mhz": hf / 1e6,
        "electron_zeeman_ghz": zeeman / 1e9,
        "lowest_occupation": d.diagram.lowest_occupation,
        "snr_per_photon": snr1,
        "collected_flux": coll,
        "detected_flux": det,
        "integration_time_s": t_int,
        "flip_probability": p_flip,
        "budget_cycles": budget,
        "budget_detected_photons": photons.detected_photons,
        "budget_power_snr": photons.power_snr,
    }


def _cmd_sweep(values: dict, args) -> tuple[list[dict], int]:
    param = _PARAM_ALIASES.get(args.param, args.param)
    if param not in SWEEPABLE:
        raise ConfigError(
            f"sweep: unknown parameter {args.param!r}; sweepable: "
            f"{', '.join(sorted(SWEEPABLE))} (alias eta_d)"
        )
    dimension = SWEEPABLE[param]
    rows = []
    for token in args.values.split(","):
        token = token.strip()
        if not token:
            raise ConfigError("sweep: empty value in --values")
        if dimension == "preset":
            if token not in PRESETS:
                raise ConfigError(
                    f"sweep: unknown cavity preset {token!r}; "
                    f"known: {', '.join(sorted(PRESETS))}"
                )
            value, display = token, token
        elif dimension is None:
            try:
                value = float(token)
            except ValueError:
                raise ConfigError(f"sweep: bad number {token!r}") from None
            display = value
        else:
            try:
                value = parse_quantity(token, dimension)
            except UnitError as exc:
                raise ConfigError(f"sweep: {exc}") from None
            display = value
        swept = dict(values)
        swept[param] = value
        rows.append(_sweep_row(swept, param, display))
    return rows, 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    manifest = RunManifest(
        command=args.command,
        config_path=args.config,
        output_path=args.out,
        output_format=args.format,
        seed_override=args.seed,
        trials_override=args.trials,
        duration_override=args.duration,
    )
    try:
        values = load_values(manifest.config_path)
        for key, val in (("seed", manifest.seed_override),
                         ("trials", manifest.trials_override),
                         ("duration", manifest.duration_override)):
            if val is not None:
                values[key] = val
        if args.command == "sweep":
            rows, code = _cmd_sweep(values, args)
        else:
            cfg = build_simulation_config(values)
            handler = {
                "paper-table": _cmd_paper_table,
                "validate": _cmd_paper_table,
                "snr-scan": _cmd_snr_scan,
                "simulate": _cmd_simulate,
                "fidelity": _cmd_fidelity,
            }[args.command]
            rows, code = handler(cfg, args)
        _write_rows(rows, args.command, manifest.output_path,
                    manifest.output_format)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
