"""Fourier multipliers on a periodic grid."""
from __future__ import annotations

import numpy as np

from ..core import Grid1D, RealField
from ..errors import InvalidArgument


class SpectralWorkspace:
    """Wavenumbers ``xi_m = 2 pi m / L`` in FFT order, with cached multipliers."""

    def __init__(self, n_modes: int, length: float = 1.0):
        n_modes = int(n_modes)
        if n_modes < 2 or n_modes & (n_modes - 1):
            raise InvalidArgument(f"spectral grids need a power-of-two size, got {n_modes}")
        self.n = n_modes
        self.length = float(length)
        self.xi = 2.0 * np.pi * np.fft.fftfreq(n_modes, d=length / n_modes)
        self.xi_real = 2.0 * np.pi * np.fft.rfftfreq(n_modes, d=length / n_modes)
        self._cache = {}

    @classmethod
    def for_grid(cls, grid: Grid1D) -> "SpectralWorkspace":
        if grid.topology != "periodic":
            raise InvalidArgument("spectral steps need a periodic grid")
        return cls(grid.n_cells, grid.length)

    def forward(self, values):
        return np.fft.fft(values)

    def inverse(self, modes):
        return np.fft.ifft(modes)

    def heat_multiplier(self, mu, dt):
        key = ("heat", mu, dt)
        if key not in self._cache:
            self._cache[key] = np.exp(-mu * self.xi_real**2 * dt)
        return self._cache[key]

    def schrodinger_multiplier(self, dt):
        key = ("free", dt)
        if key not in self._cache:
            self._cache[key] = np.exp(-1j * self.xi**2 * dt)
        return self._cache[key]


def spectral_diffusion_values(values, mu, dt, ws: SpectralWorkspace):
    if mu == 0.0:
        return np.array(values, dtype=float, copy=True)
    return np.fft.irfft(np.fft.rfft(values) * ws.heat_multiplier(mu, dt), n=ws.n)


def spectral_diffusion_step(field: RealField, mu: float, dt: float, ws: SpectralWorkspace) -> RealField:
    """Exact heat flow ``w_t = mu w_xx`` of the trigonometric interpolant over ``dt``."""
    if mu < 0:
        raise InvalidArgument("mu must be >= 0")
    return field.with_values(spectral_diffusion_values(field.values, mu, dt, ws), field.time + dt)
