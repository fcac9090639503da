"""Per-snapshot scalar diagnostics shared by all models."""
from __future__ import annotations

import numpy as np

from .core import Grid1D, RealField


def sup_norm(field: RealField) -> float:
    return float(np.max(np.abs(field.values)))


def l1_norm(field: RealField) -> float:
    return float(np.sum(np.abs(field.values)) * field.grid.spacing)


def l2_mass(field: RealField) -> float:
    """Discrete ``sum |u_j|^2 dx``."""
    v = field.values
    return float(np.sum((v * np.conj(v)).real) * field.grid.spacing)


def _cells_in(grid: Grid1D, x0, width):
    """Indices of grid points inside the open interval (x0, x0 + width), ordered along it."""
    x = grid.x
    rel = np.mod(x - x0, grid.length) if grid.topology == "periodic" else x - x0
    inside = np.nonzero((rel > 0.0) & (rel < width))[0]
    return inside[np.argsort(rel[inside], kind="stable")]


def longest_zero_run(values) -> int:
    z = np.concatenate(([0], (np.asarray(values) == 0.0).astype(np.int8), [0]))
    edges = np.diff(z)
    starts = np.nonzero(edges == 1)[0]
    stops = np.nonzero(edges == -1)[0]
    if starts.size == 0:
        return 0
    return int(np.max(stops - starts))


def zero_interval_measure(field: RealField, omega) -> float:
    """``A`` minus the measure of the longest run of exactly-zero cells inside omega.

    ``omega`` is ``(x0, A)``; exact zeros are meaningful because the damping
    flow clamps to 0.0.
    """
    x0, width = omega
    idx = _cells_in(field.grid, x0, width)
    run = longest_zero_run(field.values[idx])
    return float(max(width - run * field.grid.spacing, 0.0))


def mass_on_support(field: RealField, indicator) -> float:
    v = field.values[indicator]
    return float(np.sum((v * np.conj(v)).real) * field.grid.spacing)


def point_trace(field: RealField, x) -> float:
    return float(np.real(field.grid.interpolate(field.values, x)))
