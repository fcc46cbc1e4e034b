"""Batched sampling kernels with numba and pure-numpy backends.

The trajectory engine burns almost all of its time deciding, cycle by
cycle, whether a nuclear flip or a photon emission happened. Per-cycle
probabilities are tiny (5e-8 for flips, ~1e-4 for emission), so instead
of one Bernoulli draw per cycle the kernels skip straight between event
cycles with geometric gaps, which is exactly equivalent and several
orders of magnitude faster.

Two interchangeable implementations exist for each kernel: a numba
@njit loop and a vectorized numpy path. Both consume identical blocks
of pre-drawn uniforms (five rows per candidate event: gap, class,
detection, lineshape, port) and are written to produce bit-identical
output; the Cauchy quantile is computed as sin/cos rather than tan
because numpy's vectorized tan and libm's scalar tan differ in the last
ulp.

Backend selection: the SPINREAD_BACKEND environment variable ("numba",
"numpy", or "auto", default auto = numba when importable). This flag
picks an execution path only; it never changes any physics parameter or
result. benchmarks/bench_backends.py compares the two.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

__all__ = [
    "HAVE_NUMBA",
    "active_backend",
    "available_backends",
    "photon_ports",
    "trajectory_chunk",
]

_ENV_FLAG = "SPINREAD_BACKEND"


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if HAVE_NUMBA else ("numpy",)


def active_backend() -> str:
    """Backend picked by the environment flag (resolved per call)."""
    choice = os.environ.get(_ENV_FLAG, "auto").strip().lower()
    if choice in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if choice not in ("numba", "numpy"):
        raise ValueError(
            f"{_ENV_FLAG} must be 'numba', 'numpy', or 'auto', got {choice!r}"
        )
    if choice == "numba" and not HAVE_NUMBA:
        raise RuntimeError(f"{_ENV_FLAG}=numba but numba is not importable")
    return choice


def _resolve(backend: str | None) -> str:
    if backend is None:
        return active_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"backend must be 'numba' or 'numpy', got {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend


# --- per-photon port sampling ------------------------------------------

def _photon_ports_numpy(u_line, u_port, center, half_width, tau, parity):
    arg = np.pi * (u_line - 0.5)
    delta = center + half_width * np.sin(arg) / np.cos(arg)
    p_e = 0.5 * (1.0 - parity * np.sin(delta * tau))
    return np.where(u_port < p_e, 1, -1).astype(np.int8)


if HAVE_NUMBA:

    @njit(cache=True)
    def _photon_ports_numba(u_line, u_port, center, half_width, tau, parity):
        n = u_line.shape[0]
        ports = np.empty(n, np.int8)
        for i in range(n):
            arg = np.pi * (u_line[i] - 0.5)
            delta = center + half_width * np.sin(arg) / np.cos(arg)
            p_e = 0.5 * (1.0 - parity * np.sin(delta * tau))
            ports[i] = 1 if u_port[i] < p_e else -1
        return ports


def photon_ports(
    u_line: np.ndarray,
    u_port: np.ndarray,
    center: float,
    half_width: float,
    tau: float,
    parity: float,
    backend: str | None = None,
) -> np.ndarray:
    """Exit ports (+1 = e, -1 = f) for photons drawn from one line.

    u_line and u_port are uniforms in [0, 1); u_line feeds the Cauchy
    quantile transform for the detuning, u_port the port decision.
    """
    impl = _resolve(backend)
    if impl == "numba":
        return _photon_ports_numba(
            np.ascontiguousarray(u_line, np.float64),
            np.ascontiguousarray(u_port, np.float64),
            float(center), float(half_width), float(tau), float(parity),
        )
    return _photon_ports_numpy(u_line, u_port, center, half_width, tau, parity)


# --- trajectory event chunk ---------------------------------------------

def _trajectory_chunk_numpy(
    u, state0, remaining, log1m_p_any, c_flip_only, c_emit_hi,
    p_detect, d_up, d_down, half_width, tau, parity,
):
    n_cols = u.shape[1]
    gaps = np.floor(np.log(1.0 - u[0]) / log1m_p_any) + 1.0
    np.minimum(gaps, float(remaining) + 1.0, out=gaps)
    pos_f = np.cumsum(gaps)
    k = int(np.searchsorted(pos_f, float(remaining), side="right"))
    done = k < n_cols

    pos = pos_f[:k].astype(np.int64)
    u_class = u[1, :k]
    is_flip = (u_class < c_flip_only) | (u_class >= c_emit_hi)
    is_emit = u_class >= c_flip_only
    flips_cum = np.cumsum(is_flip.astype(np.int64))
    state_at = state0 * (1 - 2 * (flips_cum & 1))
    detected = is_emit & (u[2, :k] < p_detect)

    centers = np.where(state_at > 0, d_up, d_down)
    arg = np.pi * (u[3, :k] - 0.5)
    delta = centers + half_width * np.sin(arg) / np.cos(arg)
    p_e = 0.5 * (1.0 - parity * np.sin(delta * tau))
    ports = np.where(u[4, :k] < p_e, 1, -1).astype(np.int8)
    ports[~detected] = 0

    end_state = int(state_at[-1]) if k else int(state0)
    if done:
        cycles_used = int(remaining)
    else:
        cycles_used = int(pos_f[-1]) if n_cols else 0
    return k, done, cycles_used, pos, is_flip, detected, ports, end_state


if HAVE_NUMBA:

    @njit(cache=True)
    def _trajectory_chunk_numba(
        u, state0, remaining, log1m_p_any, c_flip_only, c_emit_hi,
        p_detect, d_up, d_down, half_width, tau, parity,
    ):
        n_cols = u.shape[1]
        pos = np.empty(n_cols, np.int64)
        is_flip = np.zeros(n_cols, np.bool_)
        detected = np.zeros(n_cols, np.bool_)
        ports = np.zeros(n_cols, np.int8)

        state = state0
        cum = np.int64(0)
        cap = float(remaining) + 1.0
        k = 0
        done = False
        for j in range(n_cols):
            g = np.floor(np.log(1.0 - u[0, j]) / log1m_p_any) + 1.0
            if g > cap:
                g = cap
            cum += np.int64(g)
            if cum > remaining:
                done = True
                break
            pos[j] = cum
            u_class = u[1, j]
            flip = (u_class < c_flip_only) or (u_class >= c_emit_hi)
            if flip:
                state = -state
                is_flip[j] = True
            if u_class >= c_flip_only and u[2, j] < p_detect:
                detected[j] = True
                center = d_up if state > 0 else d_down
                arg = np.pi * (u[3, j] - 0.5)
                delta = center + half_width * np.sin(arg) / np.cos(arg)
                p_e = 0.5 * (1.0 - parity * np.sin(delta * tau))
                ports[j] = 1 if u[4, j] < p_e else -1
            k += 1
        cycles_used = int(remaining) if done else int(cum)
        return k, done, cycles_used, pos, is_flip, detected, ports, state


def trajectory_chunk(
    u: np.ndarray,
    state0: int,
    remaining: int,
    log1m_p_any: float,
    c_flip_only: float,
    c_emit_hi: float,
    p_detect: float,
    d_up: float,
    d_down: float,
    half_width: float,
    tau: float,
    parity: float,
    backend: str | None = None,
):
    """Consume one block of uniforms and return the events it yields.

    u has shape (5, n) with rows (gap, class, detection, lineshape,
    port). Events are returned as 1-based cumulative cycle offsets from
    the current position, valid while offset <= remaining. done=True
    means the next gap overshot the trajectory end, so no further block
    is needed.

    Returns (n_events, done, cycles_used, positions, is_flip, detected,
    ports, end_state); the four arrays are sliced to n_events.
    """
    impl = _resolve(backend)
    fn = _trajectory_chunk_numba if impl == "numba" else _trajectory_chunk_numpy
    k, done, cycles_used, pos, is_flip, detected, ports, end_state = fn(
        np.ascontiguousarray(u, np.float64),
        int(state0), int(remaining), float(log1m_p_any),
        float(c_flip_only), float(c_emit_hi), float(p_detect),
        float(d_up), float(d_down), float(half_width), float(tau),
        float(parity),
    )
    return (
        k, bool(done), int(cycles_used),
        pos[:k], is_flip[:k], detected[:k], ports[:k], int(end_state),
    )
