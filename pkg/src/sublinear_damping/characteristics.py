"""Characteristic curves dX/dt = f'(u(t, X)) traced through a computed solution."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Grid1D, RealField, fmt
from .errors import InvalidArgument, SparseRecord
from .flux import FluxModel
from .record import RunRecord

MAX_CADENCE_STEPS = 10


def _velocity(positions, values, grid: Grid1D, flux: FluxModel):
    return flux.df(grid.interpolate(values, positions))


def advance_characteristics(positions, field: RealField, flux: FluxModel, dt: float,
                            field_mid: Optional[RealField] = None):
    """Explicit midpoint step; ``field_mid`` (the solution at t + dt/2) defaults to ``field``.

    Positions are returned unwrapped so that orderings stay comparable; wrap
    them with ``grid.wrap`` for plotting.
    """
    x = np.asarray(positions, dtype=float)
    grid = field.grid
    mid_values = field.values if field_mid is None else field_mid.values
    half = x + 0.5 * dt * _velocity(x, field.values, grid, flux)
    return x + dt * _velocity(half, mid_values, grid, flux)


@dataclass
class CharacteristicBundle:
    seeds: np.ndarray
    t: np.ndarray
    x: np.ndarray  # (n_times, n_seeds), unwrapped
    grid: Grid1D
    # sample indices at which neighbouring paths swapped order
    ordering_violations: np.ndarray

    @property
    def wrapped(self) -> np.ndarray:
        return self.grid.wrap(self.x)

    def path(self, i):
        return self.t, self.wrapped[:, i]

    def rows(self):
        xw = self.wrapped
        for i in range(len(self.seeds)):
            for k in range(len(self.t)):
                yield i, self.t[k], xw[k, i]

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# columns=seed_id,t,x\n")
            for i, t, x in self.rows():
                fh.write(f"{i},{fmt(t)},{fmt(x)}\n")


class _TimeInterpolator:
    def __init__(self, record: RunRecord):
        self.snaps = record.snapshots
        self.times = record.times()

    def __call__(self, t) -> np.ndarray:
        times = self.times
        k = int(np.searchsorted(times, t, side="right")) - 1
        k = min(max(k, 0), len(times) - 2)
        t0, t1 = times[k], times[k + 1]
        w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
        w = min(max(w, 0.0), 1.0)
        a, b = self.snaps[k].values, self.snaps[k + 1].values
        if w == 0.0:
            return a
        if w == 1.0:
            return b
        return (1.0 - w) * a + w * b


def _ordering_breaks(x_row, length, tol) -> bool:
    """True if the cyclic order of the unwrapped positions is broken."""
    if x_row.size < 2:
        return False
    gaps = np.diff(x_row)
    wrap_gap = x_row[0] + length - x_row[-1]
    return bool(np.any(gaps < -tol) or wrap_gap < -tol)


def trace_bundle(record: RunRecord, seeds, t0: Optional[float] = None, flux: Optional[FluxModel] = None,
                 dt: Optional[float] = None, store_every: int = 1) -> CharacteristicBundle:
    """Trace characteristics from ``seeds`` at ``t0`` to the end of the record.

    Snapshots must be at most ten steps apart; the velocity field between
    them is interpolated linearly in time.
    """
    if len(record.snapshots) < 2:
        raise SparseRecord("a record with at least two snapshots is needed")
    cfg = record.config
    flux = flux or (cfg.flux_model() if cfg is not None else None)
    dt = dt or (cfg.dt if cfg is not None else None)
    if flux is None or dt is None:
        raise InvalidArgument("flux and dt are needed when the record carries no config")
    times = record.times()
    cadence = float(np.max(np.diff(times)))
    if cadence > MAX_CADENCE_STEPS * dt * (1 + 1e-9):
        raise SparseRecord(f"snapshot cadence {cadence:g} exceeds {MAX_CADENCE_STEPS} x dt = {MAX_CADENCE_STEPS * dt:g}")
    grid = record.snapshots[0].grid
    t0 = float(times[0] if t0 is None else t0)
    order = np.argsort(np.asarray(seeds, dtype=float), kind="stable")
    seeds = np.asarray(seeds, dtype=float)[order]
    n_steps = int(round((times[-1] - t0) / dt))
    field_at = _TimeInterpolator(record)
    x = seeds.copy()
    ts, xs, breaks = [t0], [x.copy()], []
    tol = 1e-12 * grid.length
    for n in range(1, n_steps + 1):
        t = t0 + (n - 1) * dt
        now = RealField(field_at(t), t, grid)
        mid = RealField(field_at(t + 0.5 * dt), t + 0.5 * dt, grid)
        x = advance_characteristics(x, now, flux, dt, mid)
        if _ordering_breaks(x, grid.length, tol):
            breaks.append(n)
        if n % store_every == 0 or n == n_steps:
            ts.append(t0 + n * dt)
            xs.append(x.copy())
    return CharacteristicBundle(seeds, np.array(ts), np.array(xs), grid, np.array(breaks, dtype=int))
