"""Damped wave equation ``u_tt - c^2 u_xx = -a(x) u_t / |u_t|^alpha`` with Dirichlet ends."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import solve_banded

from ..config import RunConfig
from ..core import Grid1D, RealField
from ..damping import DampingProfile, _flow_values
from ..errors import InvalidArgument
from ..initial import initial_field
from ..record import RunRecord, SeriesRecorder

WAVE_SERIES = ("u_sup", "v_sup", "v_sup_omega", "energy", "u_mid")


@dataclass(frozen=True)
class WaveState:
    u: RealField
    v: RealField
    c: float
    theta: float = 0.5
    zeta: float = 0.25

    def __post_init__(self):
        if self.u.grid.topology != "dirichlet" or self.v.grid != self.u.grid:
            raise InvalidArgument("wave states need u and v on one Dirichlet grid")

    @property
    def grid(self) -> Grid1D:
        return self.u.grid

    @property
    def time(self) -> float:
        return self.u.time


def second_difference(u, dx):
    """``(u_{j+1} - 2u_j + u_{j-1}) / dx^2`` at interior nodes, zero at the ends."""
    w = np.zeros_like(u)
    w[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (dx * dx)
    return w


def discrete_energy(state: WaveState) -> float:
    """``sum v^2 dx + c^2 sum (u_{j+1} - u_j)^2 / dx``; constant under the free trapezoidal scheme."""
    dx = state.grid.spacing
    u, v = state.u.values, state.v.values
    return float(np.sum(v * v) * dx + state.c**2 * np.sum(np.diff(u) ** 2) / dx)


def newmark_step(state: WaveState, dt: float) -> WaveState:
    """One implicit Newmark step for the free wave equation; end nodes stay at zero."""
    if not dt > 0:
        raise InvalidArgument("dt must be positive")
    if state.zeta <= 0:
        raise InvalidArgument("zeta must be positive for the implicit solve")
    dx = state.grid.spacing
    c2 = state.c**2
    u, v = state.u.values, state.v.values
    w = second_difference(u, dx)
    rhs = u + dt * v + dt * dt * (0.5 - state.zeta) * c2 * w
    # (I - zeta c^2 dt^2 D2) u_new = rhs on interior nodes
    r = state.zeta * c2 * dt * dt / (dx * dx)
    m = u.size - 2
    bands = np.empty((3, m))
    bands[0, :] = -r
    bands[1, :] = 1.0 + 2.0 * r
    bands[2, :] = -r
    u_new = np.zeros_like(u)
    u_new[1:-1] = solve_banded((1, 1), bands, rhs[1:-1], check_finite=False)
    w_new = second_difference(u_new, dx)
    v_new = v + dt * c2 * ((1.0 - state.theta) * w + state.theta * w_new)
    v_new[0] = v_new[-1] = 0.0
    t = state.time + dt
    return replace(state, u=RealField(u_new, t, state.grid), v=RealField(v_new, t, state.grid))


def _damp_velocity(state: WaveState, a, alpha, dt) -> WaveState:
    v = state.v
    return replace(state, v=RealField(_flow_values(v.values, a, alpha, dt), v.time, v.grid))


def wave_split_step(state: WaveState, profile: DampingProfile, dt: float, a=None) -> WaveState:
    """Velocity damping for dt/2, Newmark for dt, velocity damping for dt/2."""
    if a is None:
        a = profile.on_grid(state.grid)
    s = _damp_velocity(state, a, profile.alpha, 0.5 * dt)
    s = newmark_step(s, dt)
    return _damp_velocity(s, a, profile.alpha, 0.5 * dt)


def initial_wave_state(cfg: RunConfig) -> WaveState:
    grid = cfg.grid()
    u = initial_field(cfg, grid)
    values = u.values.copy()
    values[0] = values[-1] = 0.0
    return WaveState(u.with_values(values), RealField(np.zeros(grid.n_points), 0.0, grid),
                     cfg.wave_c, cfg.theta, cfg.zeta)


def run_wave(cfg: RunConfig) -> RunRecord:
    """Records snapshots of u; velocity snapshots go to ``extras['velocity']``."""
    if cfg.model != "wave":
        raise InvalidArgument(f"run_wave needs model=wave, got {cfg.model}")
    state = initial_wave_state(cfg)
    profile = cfg.profile()
    a = profile.on_grid(state.grid)
    inside = a > 0
    stride = max(1, int(round(cfg.snapshot_interval / cfg.dt))) if cfg.snapshot_interval > 0 else 0
    mid = len(state.u.values) // 2

    def diagnostics(s: WaveState):
        u, v = s.u.values, s.v.values
        return {
            "u_sup": float(np.max(np.abs(u))),
            "v_sup": float(np.max(np.abs(v))),
            "v_sup_omega": float(np.max(np.abs(v[inside]))) if np.any(inside) else 0.0,
            "energy": discrete_energy(s),
            "u_mid": float(u[mid]),
        }

    rec = SeriesRecorder(WAVE_SERIES)
    rec.add(0.0, **diagnostics(state))
    snaps, vel = [state.u], [state.v]
    n_steps = cfg.n_steps
    for n in range(1, n_steps + 1):
        state = wave_split_step(state, profile, cfg.dt, a)
        t = n * cfg.dt
        state = replace(state, u=state.u.with_values(state.u.values, t), v=state.v.with_values(state.v.values, t))
        if n % cfg.series_every == 0 or n == n_steps:
            rec.add(t, **diagnostics(state))
        if (stride and n % stride == 0) or n == n_steps:
            snaps.append(state.u)
            vel.append(state.v)
    return RunRecord(snaps, rec.finish(), cfg, {"velocity": vel})
