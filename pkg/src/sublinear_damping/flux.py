"""Scalar flux models with analytic first and second derivatives."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidArgument

KINDS = ("linear", "burgers", "buckley_leverett", "reflected", "negated")


@dataclass(frozen=True)
class FluxModel:
    kind: str
    c: float = 0.0
    k: float = 0.25
    inner: Optional["FluxModel"] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown flux kind {self.kind!r}")
        if self.kind in ("reflected", "negated") and self.inner is None:
            raise InvalidArgument(f"{self.kind} flux needs an inner flux")
        if self.kind == "buckley_leverett" and not self.k > 0:
            raise InvalidArgument("Buckley-Leverett parameter k must be positive")

    # f, f', f'' validate their argument; the *_raw variants skip that for solver loops.
    def f(self, u):
        return self.f_raw(_check(u))

    def f_raw(self, u):
        if self.kind == "linear":
            return self.c * u
        if self.kind == "burgers":
            return 0.5 * u * u
        if self.kind == "buckley_leverett":
            return u * u / (u * u + self.k * (1.0 - u) ** 2)
        if self.kind == "reflected":
            return -self.inner.f_raw(u)
        return -self.inner.f_raw(-u)

    def df(self, u):
        return self.df_raw(_check(u))

    def df_raw(self, u):
        if self.kind == "linear":
            return self.c * np.ones_like(u) if np.ndim(u) else self.c * 1.0
        if self.kind == "burgers":
            return 1.0 * u
        if self.kind == "buckley_leverett":
            den = u * u + self.k * (1.0 - u) ** 2
            return 2.0 * self.k * u * (1.0 - u) / (den * den)
        if self.kind == "reflected":
            return -self.inner.df_raw(u)
        return self.inner.df_raw(-u)

    def d2f(self, u):
        return self.d2f_raw(_check(u))

    def d2f_raw(self, u):
        if self.kind == "linear":
            return np.zeros_like(u) if np.ndim(u) else 0.0
        if self.kind == "burgers":
            return np.ones_like(u) if np.ndim(u) else 1.0
        if self.kind == "buckley_leverett":
            k = self.k
            den = u * u + k * (1.0 - u) ** 2
            num = u * (1.0 - u)
            dnum = 1.0 - 2.0 * u
            dden = 2.0 * u - 2.0 * k * (1.0 - u)
            return 2.0 * k * (dnum * den - 2.0 * num * dden) / den**3
        if self.kind == "reflected":
            return -self.inner.d2f_raw(u)
        return -self.inner.d2f_raw(-u)

    @property
    def label(self) -> str:
        if self.kind in ("reflected", "negated"):
            return f"{self.kind}:{self.inner.label}"
        return self.kind

    def convexity(self, K, n=10_001):
        """'convex', 'concave' or 'mixed' according to the sign of f'' on [-K, K]."""
        s = np.linspace(-K, K, n)
        d2 = self.d2f(s)
        if np.all(d2 > 0):
            return "convex"
        if np.all(d2 < 0):
            return "concave"
        return "mixed"

    @property
    def speed_extrema(self) -> Tuple[float, ...]:
        """Points where f' has an interior extremum (zeros of f'')."""
        if self.kind == "buckley_leverett":
            return _bl_inflections(self.k)
        if self.kind == "reflected":
            return self.inner.speed_extrema
        if self.kind == "negated":
            return tuple(sorted(-s for s in self.inner.speed_extrema))
        return ()

    def speed_bound(self, lo, hi):
        """``max |f'|`` over each interval ``[lo, hi]`` (elementwise, ``lo <= hi``)."""
        out = np.maximum(np.abs(self.df_raw(lo)), np.abs(self.df_raw(hi)))
        for s in self.speed_extrema:
            out = np.where((lo < s) & (s < hi), np.maximum(out, abs(self.df_raw(s))), out)
        return out

    def max_speed(self, u) -> float:
        """``max |f'|`` over the range of ``u``."""
        u = np.asarray(u, dtype=float)
        if not np.size(u):
            return 0.0
        return float(self.speed_bound(np.min(u), np.max(u)))


@lru_cache(maxsize=None)
def _bl_inflections(k) -> Tuple[float, ...]:
    # numerator of f'': (1 - 2u) D - 2u(1 - u) D' with D = u^2 + k(1 - u)^2, a cubic in u
    u = np.polynomial.Polynomial([0.0, 1.0])
    D = u * u + k * (1 - u) ** 2
    num = (1 - 2 * u) * D - 2 * u * (1 - u) * D.deriv()
    roots = num.roots()
    return tuple(sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12))


def _check(u):
    if np.ndim(u) == 0:
        u = float(u)
        if not np.isfinite(u):
            raise InvalidArgument(f"flux argument must be finite, got {u!r}")
        return u
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise InvalidArgument("flux argument contains non-finite entries")
    return u


def linear(c) -> FluxModel:
    return FluxModel("linear", c=float(c))


def burgers() -> FluxModel:
    return FluxModel("burgers")


def buckley_leverett(k=0.25) -> FluxModel:
    return FluxModel("buckley_leverett", k=float(k))


def eval_flux(model: FluxModel, u):
    return model.f(u)


def eval_flux_derivative(model: FluxModel, u):
    return model.df(u)


def negate_flux(model: FluxModel) -> FluxModel:
    """``h(s) = -f(-s)``: the flux seen by ``w = -u``."""
    return FluxModel("negated", inner=model)


def reflect_flux(model: FluxModel) -> FluxModel:
    """``g(s) = -f(s)``: the flux seen by ``v(t, x) = u(t, -x)``."""
    return FluxModel("reflected", inner=model)


def parse_flux(spec: str, c=0.0, k=0.25) -> FluxModel:
    """Build a flux from its config spelling, e.g. ``negated:burgers``."""
    spec = spec.strip()
    if ":" in spec:
        head, rest = spec.split(":", 1)
        if head not in ("negated", "reflected"):
            raise InvalidArgument(f"unknown flux wrapper {head!r}")
        return FluxModel(head.strip(), inner=parse_flux(rest, c, k))
    if spec == "linear":
        return linear(c)
    if spec == "burgers":
        return burgers()
    if spec == "buckley_leverett":
        return buckley_leverett(k)
    raise InvalidArgument(f"unknown flux {spec!r}")
