#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths: per-photon port sampling (moment validation,
photon-count fidelity) and full readout trajectories (the cycle engine).
Both backends consume identical random streams and produce identical
output, so this is purely an execution-speed comparison.

Run from the repository root:

    python benchmarks/bench_backends.py
"""

import math
import time
from dataclasses import replace

import numpy as np

from spinread.config import default_config
from spinread.kernels import HAVE_NUMBA, available_backends, photon_ports
from spinread.montecarlo import derive_model, simulate_trajectory
from spinread.spindyn import FlipModel


def time_photon_ports(backend, n=2_000_000, repeats=5):
    rng = np.random.default_rng(0)
    u, v = rng.random(n), rng.random(n)
    args = (u, v, 0.2e9, 2 * math.pi * 75e6, 2e-9, 1.0)
    photon_ports(*args, backend=backend)  # warm-up / JIT compile
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        photon_ports(*args, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def time_trajectories(backend, trials=200, duration=1.0, repeats=3):
    cfg = replace(
        default_config(), duration=duration, seed=1,
        flip=FlipModel(1e-6, 0.0, 0.1),
    )
    d = derive_model(cfg)
    simulate_trajectory(cfg, 0, backend=backend, derived=d)  # warm-up
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for k in range(trials):
            simulate_trajectory(cfg, k, backend=backend, derived=d)
        best = min(best, time.perf_counter() - t0)
    return best, trials * int(duration / d.emission.cycle_time)


def main():
    print(f"available backends: {', '.join(available_backends())}")
    if not HAVE_NUMBA:
        print("numba not importable; benchmarking the numpy path only")

    results = {}
    for backend in available_backends():
        t_ports = time_photon_ports(backend)
        t_traj, cycles = time_trajectories(backend)
        results[backend] = (t_ports, t_traj)
        print(f"{backend:>6}: photon_ports 2e6 draws  {t_ports * 1e3:8.2f} ms   "
              f"| 200 x 1 s trajectories ({cycles:.1e} cycles) {t_traj * 1e3:8.2f} ms")

    if len(results) == 2:
        p = results["numpy"][0] / results["numba"][0]
        t = results["numpy"][1] / results["numba"][1]
        print(f"numba speedup: photon_ports x{p:.1f}, trajectories x{t:.1f}")


if __name__ == "__main__":
    main()
