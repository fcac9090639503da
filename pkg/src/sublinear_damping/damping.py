"""Localized sublinear damping ``a(x) u / |u|^alpha`` and its exact pointwise flow."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import ComplexField, Grid1D, RealField
from .errors import InvalidArgument

Interval = Tuple[float, float]


@dataclass(frozen=True)
class DampingProfile:
    """``a(x) = delta`` on the open set ``omega``, zero elsewhere.

    ``intervals`` holds ``(x0, A)`` pairs meaning ``(x0, x0 + A)``; ``None``
    means the damping acts everywhere.  ``period`` enables periodic wrapping
    of the evaluation point.
    """

    delta: float
    alpha: float
    intervals: Optional[Tuple[Interval, ...]] = None
    period: Optional[float] = None
    origin: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise InvalidArgument(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if not (self.delta >= 0.0) or not math.isfinite(self.delta):
            raise InvalidArgument(f"delta must be >= 0, got {self.delta!r}")
        if self.intervals is not None:
            ivs = tuple((float(a), float(b)) for a, b in self.intervals)
            for _, width in ivs:
                if not width > 0:
                    raise InvalidArgument("damping interval width must be positive")
            object.__setattr__(self, "intervals", ivs)

    @property
    def everywhere(self) -> bool:
        return self.intervals is None

    def indicator(self, x):
        x = np.asarray(x, dtype=float)
        if self.everywhere:
            return np.ones_like(x, dtype=bool)
        inside = np.zeros_like(x, dtype=bool)
        for x0, width in self.intervals:
            if self.period is not None:
                rel = np.mod(x - x0, self.period)
            else:
                rel = x - x0
            inside |= (rel > 0.0) & (rel < width)
        return inside

    def __call__(self, x):
        return np.where(self.indicator(x), self.delta, 0.0)

    def on_grid(self, grid: Grid1D) -> np.ndarray:
        return self(grid.x)

    def support_measure(self, domain_length=None) -> float:
        if self.everywhere:
            return float(domain_length) if domain_length is not None else math.inf
        return float(sum(w for _, w in self.intervals))


def make_profile(delta, alpha, omega=None, grid: Optional[Grid1D] = None) -> DampingProfile:
    """Convenience constructor; ``omega`` is ``(x0, A)``, a list of them, or None."""
    if omega is not None and len(omega) == 2 and np.ndim(omega[0]) == 0:
        omega = (tuple(omega),)
    period = None
    origin = 0.0
    if grid is not None and grid.topology == "periodic":
        period, origin = grid.length, grid.origin
    return DampingProfile(float(delta), float(alpha), omega, period, origin)


def eval_profile(profile: DampingProfile, x):
    value = profile(x)
    return float(value) if np.ndim(value) == 0 else value


def damped_modulus(r, a, alpha, t):
    """``(r^alpha - alpha a t)_+^(1/alpha)`` for ``r >= 0``."""
    r = np.asarray(r, dtype=float)
    base = np.maximum(r**alpha - alpha * a * t, 0.0)
    if alpha == 1.0:
        return base
    # the flow never expands; the clamp removes one-ulp round-trip excess of r^alpha^(1/alpha)
    return np.minimum(base ** (1.0 / alpha), r)


def _flow_values(values, a, alpha, dt):
    values = np.asarray(values, dtype=float)
    out = np.sign(values) * damped_modulus(np.abs(values), a, alpha, dt)
    # cells without damping are left bit-identical
    return np.where(np.asarray(a) > 0.0, out, values)


def damping_flow_real(field: RealField, profile: DampingProfile, dt: float, a=None) -> RealField:
    """Exact solution of ``u' = -a(x) u/|u|^alpha`` over ``dt`` at every cell."""
    if dt < 0:
        raise InvalidArgument("dt must be non-negative")
    if a is None:
        a = profile.on_grid(field.grid)
    return RealField(_flow_values(field.values, a, profile.alpha, dt), field.time + dt, field.grid)


def damping_flow_complex(field: ComplexField, profile: DampingProfile, dt: float, a=None) -> ComplexField:
    """Modulus follows the real flow, argument is kept."""
    if dt < 0:
        raise InvalidArgument("dt must be non-negative")
    if a is None:
        a = profile.on_grid(field.grid)
    return ComplexField(_complex_flow(field.values, a, profile.alpha, dt), field.time + dt, field.grid)


def _complex_flow(values, a, alpha, dt):
    r = np.abs(values)
    new_r = damped_modulus(r, a, alpha, dt)
    scale = np.divide(new_r, r, out=np.zeros_like(r), where=r > 0)
    return np.where(np.asarray(a) > 0.0, values * scale, values)


def pointwise_extinction_time(u0_value, a_value, alpha) -> float:
    if not (0.0 < alpha <= 1.0):
        raise InvalidArgument(f"alpha must lie in (0, 1], got {alpha!r}")
    r = abs(float(u0_value))
    if r == 0.0:
        return 0.0
    if a_value <= 0:
        return math.inf
    return r**alpha / (alpha * a_value)
