"""Initial data used by the presets."""
from __future__ import annotations

import numpy as np

from .config import RunConfig
from .core import Grid1D, RealField, sample_function


def wave_plateau(x, K=1.25):
    """Plateau of height K on [0.1, 0.9] with exponential shoulders, as printed.

    The shoulder formula is evaluated verbatim, so the datum equals
    ``K (1 - e^-1)`` at x = 0 and x = 1 rather than 0.
    """
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    left = x < 0.1
    right = x > 0.9
    with np.errstate(over="ignore", divide="ignore"):
        out[left] = 1.0 - np.exp(-0.1 / (0.1 - x[left]))
        out[right] = 1.0 - np.exp(-0.1 / (x[right] - 0.9))
    return K * out


def initial_function(cfg: RunConfig):
    K = cfg.initial_K
    L = cfg.length
    if cfg.initial == "constant":
        return lambda x: np.full_like(np.asarray(x, dtype=float), K)
    if cfg.initial == "sine":
        amp = cfg.initial_amplitude
        return lambda x: K + amp * np.sin(2.0 * np.pi * (np.asarray(x) - cfg.origin) / L)
    if cfg.initial == "riemann":
        return lambda x: np.where(np.asarray(x) < cfg.initial_x0, cfg.initial_left, cfg.initial_right)
    if cfg.initial == "wave_plateau":
        return lambda x: wave_plateau(x, K)
    if cfg.initial == "standing_mode":
        return lambda x: K * np.sin(np.pi * (np.asarray(x) - cfg.origin) / L)
    if cfg.initial == "soliton":
        from .companions.nls import soliton

        return lambda x: soliton(np.asarray(x), 0.0, cfg.soliton_c, cfg.soliton_k, cfg.q)
    raise ValueError(cfg.initial)


def initial_field(cfg: RunConfig, grid: Grid1D | None = None) -> RealField:
    grid = grid or cfg.grid()
    return sample_function(grid, initial_function(cfg), complex_values=cfg.model == "nls")
