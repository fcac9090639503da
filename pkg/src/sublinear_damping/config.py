"""Run configuration and its ``key = value`` text format."""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple

from .core import Grid1D, fmt
from .damping import DampingProfile
from .errors import ConfigError
from .flux import FluxModel, parse_flux

MODELS = ("conservation", "viscous", "wave", "nls")
INITIAL_DATA = ("constant", "sine", "riemann", "wave_plateau", "standing_mode", "soliton")
CFL_POLICIES = ("enforce", "replicate-paper")
SPLIT_ORDERS = ("ABA", "BAB")
INTEGRATORS = ("euler", "ssprk3")


@dataclass(frozen=True)
class RunConfig:
    model: str
    n_cells: int
    dt: float
    t_final: float
    initial: str
    length: float = 1.0
    origin: float = 0.0
    topology: str = "periodic"
    flux: str = "burgers"
    flux_c: float = 1.0
    flux_k: float = 0.25
    delta: float = 1.0
    alpha: float = 1.0
    # None means "everywhere"; otherwise ((x0, A), ...)
    omega: Optional[Tuple[Tuple[float, float], ...]] = ((0.0, 0.25),)
    initial_K: float = 1.25
    initial_amplitude: float = 0.0
    initial_left: float = 1.0
    initial_right: float = 0.0
    initial_x0: float = 0.5
    mu: float = 0.01
    wave_c: float = 0.1
    theta: float = 0.5
    zeta: float = 0.25
    q: float = 2.0
    soliton_c: float = 20.0
    soliton_k: float = 0.81
    snapshot_interval: float = 0.0
    series_every: int = 1
    cfl_policy: str = "enforce"
    cfl_max: float = 0.9
    splitting_order: str = "BAB"
    integrator: str = "euler"

    def __post_init__(self):
        _validate(self)

    # ------------------------------------------------------------ builders
    def grid(self) -> Grid1D:
        return Grid1D(self.n_cells, self.length, self.origin, self.topology)

    def flux_model(self) -> FluxModel:
        return parse_flux(self.flux, self.flux_c, self.flux_k)

    def profile(self) -> DampingProfile:
        period = self.length if self.topology == "periodic" else None
        return DampingProfile(self.delta, self.alpha, self.omega, period, self.origin)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    def coarsened(self, factor: int) -> "RunConfig":
        """Scale dx and dt together by ``factor``."""
        factor = int(factor)
        if factor <= 1:
            return self
        if self.n_cells % factor:
            raise ConfigError(f"n_cells={self.n_cells} not divisible by coarse factor {factor}")
        return replace(self, n_cells=self.n_cells // factor, dt=self.dt * factor)

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def to_text(self) -> str:
        return format_config(self)

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()[:16]


# config key -> (attribute, kind)
KEYS = {
    "model": ("model", "str"),
    "grid.n_cells": ("n_cells", "int"),
    "grid.length": ("length", "float"),
    "grid.origin": ("origin", "float"),
    "grid.topology": ("topology", "str"),
    "flux": ("flux", "str"),
    "flux.c": ("flux_c", "float"),
    "flux.k": ("flux_k", "float"),
    "damping.delta": ("delta", "float"),
    "damping.alpha": ("alpha", "float"),
    "damping.omega": ("omega", "omega"),
    "dt": ("dt", "float"),
    "t_final": ("t_final", "float"),
    "initial": ("initial", "str"),
    "initial.K": ("initial_K", "float"),
    "initial.amplitude": ("initial_amplitude", "float"),
    "initial.left": ("initial_left", "float"),
    "initial.right": ("initial_right", "float"),
    "initial.x0": ("initial_x0", "float"),
    "viscous.mu": ("mu", "float"),
    "wave.c": ("wave_c", "float"),
    "wave.theta": ("theta", "float"),
    "wave.zeta": ("zeta", "float"),
    "nls.q": ("q", "float"),
    "nls.c": ("soliton_c", "float"),
    "nls.k": ("soliton_k", "float"),
    "snapshot.interval": ("snapshot_interval", "float"),
    "series.every": ("series_every", "int"),
    "cfl.policy": ("cfl_policy", "str"),
    "cfl.max": ("cfl_max", "float"),
    "splitting.order": ("splitting_order", "str"),
    "advection.integrator": ("integrator", "str"),
}
REQUIRED = ("model", "grid.n_cells", "dt", "t_final", "initial")
_ATTR_TO_KEY = {attr: key for key, (attr, _) in KEYS.items()}
_FIELD_CHECKS = {
    "alpha": (lambda a: 0.0 < a <= 1.0, "alpha must satisfy 0 < alpha <= 1"),
    "delta": (lambda d: d >= 0.0, "delta must be >= 0"),
    "dt": (lambda d: d > 0.0, "dt must be positive"),
    "t_final": (lambda t: t > 0.0, "t_final must be positive"),
}


def _parse_omega(text: str):
    text = text.strip()
    if text == "everywhere":
        return None
    out = []
    for chunk in text.split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise ValueError(f"omega entry {chunk!r} is not 'x0,A'")
        out.append((float(parts[0]), float(parts[1])))
    return tuple(out)


def _format_omega(omega) -> str:
    if omega is None:
        return "everywhere"
    return ";".join(f"{fmt(x0)},{fmt(w)}" for x0, w in omega)


def _convert(kind, text):
    if kind == "int":
        value = float(text)
        if not value.is_integer():
            raise ValueError(f"{text!r} is not an integer")
        return int(value)
    if kind == "float":
        return float(text)
    if kind == "omega":
        return _parse_omega(text)
    return text.strip()


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        attr, kind = KEYS[key]
        try:
            values[attr] = _convert(kind, value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from None
    for attr, check in _FIELD_CHECKS.items():
        if attr in values and not check[0](values[attr]):
            raise ConfigError(f"{_ATTR_TO_KEY[attr]} = {values[attr]!r}: {check[1]}")
    missing = [k for k in REQUIRED if KEYS[k][0] not in values]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(missing))
    return RunConfig(**values)


def format_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(cfg):
        key = _ATTR_TO_KEY[f.name]
        value = getattr(cfg, f.name)
        if KEYS[key][1] == "omega":
            text = _format_omega(value)
        elif isinstance(value, float):
            text = fmt(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _validate(cfg: RunConfig):
    def fail(msg):
        raise ConfigError(msg)

    if cfg.model not in MODELS:
        fail(f"model must be one of {MODELS}, got {cfg.model!r}")
    if cfg.initial not in INITIAL_DATA:
        fail(f"initial must be one of {INITIAL_DATA}, got {cfg.initial!r}")
    if not (0.0 < cfg.alpha <= 1.0):
        fail(f"damping.alpha must satisfy 0 < alpha <= 1, got {cfg.alpha!r}")
    if not (cfg.delta >= 0.0):
        fail(f"damping.delta must be >= 0, got {cfg.delta!r}")
    if not (cfg.dt > 0.0) or not math.isfinite(cfg.dt):
        fail(f"dt must be positive, got {cfg.dt!r}")
    if not (cfg.t_final > 0.0):
        fail(f"t_final must be positive, got {cfg.t_final!r}")
    if cfg.n_cells < 2:
        fail("grid.n_cells must be >= 2")
    if not cfg.length > 0:
        fail("grid.length must be positive")
    if cfg.topology not in ("periodic", "dirichlet"):
        fail(f"grid.topology must be periodic or dirichlet, got {cfg.topology!r}")
    if cfg.cfl_policy not in CFL_POLICIES:
        fail(f"cfl.policy must be one of {CFL_POLICIES}")
    if not cfg.cfl_max > 0:
        fail("cfl.max must be positive")
    if cfg.splitting_order not in SPLIT_ORDERS:
        fail(f"splitting.order must be one of {SPLIT_ORDERS}")
    if cfg.integrator not in INTEGRATORS:
        fail(f"advection.integrator must be one of {INTEGRATORS}")
    if cfg.series_every < 1:
        fail("series.every must be >= 1")
    if cfg.mu < 0:
        fail("viscous.mu must be >= 0")
    if cfg.model == "wave":
        if cfg.topology != "dirichlet":
            fail("the wave model needs grid.topology = dirichlet")
        if not cfg.wave_c >= 0:
            fail("wave.c must be >= 0")
    elif cfg.topology != "periodic":
        fail(f"model {cfg.model} needs grid.topology = periodic")
    if cfg.model == "nls" and cfg.n_cells & (cfg.n_cells - 1):
        fail("the nls model needs a power-of-two grid.n_cells")
    if cfg.model == "viscous" and cfg.n_cells & (cfg.n_cells - 1):
        fail("the viscous model needs a power-of-two grid.n_cells")
    if cfg.omega is not None:
        lo, hi = cfg.origin, cfg.origin + cfg.length
        for x0, width in cfg.omega:
            if width <= 0:
                fail("damping.omega widths must be positive")
            if x0 < lo - 1e-12 or x0 + width > hi + 1e-12:
                fail(f"damping.omega interval ({x0}, {x0 + width}) leaves the domain")
    try:
        parse_flux(cfg.flux, cfg.flux_c, cfg.flux_k)
    except ValueError as exc:
        fail(str(exc))
