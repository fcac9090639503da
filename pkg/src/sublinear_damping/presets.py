"""Named configurations reproducing the published figures, with the checks each should pass."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .config import RunConfig, parse_config
from .errors import ConfigError


@dataclass(frozen=True)
class Preset:
    name: str
    config: RunConfig
    checks: Tuple[str, ...]
    description: str = ""

    def coarse(self, factor: int) -> RunConfig:
        return self.config.coarsened(factor)


def _preset(name, checks, description, **kw) -> Preset:
    return Preset(name, RunConfig(**kw), tuple(checks), description)


_PRESETS = [
    _preset(
        "fig1.1", ("extinct",), "transport f = 2u, damping on (0, 1/4): extinction in finite time",
        model="conservation", n_cells=20_000, dt=5e-5, t_final=10.0, initial="constant", initial_K=1.25,
        flux="linear", flux_c=2.0, delta=1.0, alpha=1.0, omega=((0.0, 0.25),),
        snapshot_interval=0.05, series_every=1,
    ),
    _preset(
        "fig5.1", ("not_extinct", "zero_inside"),
        "Burgers, K = 1.25: zero inside the damping zone, algebraic decay elsewhere",
        model="conservation", n_cells=20_000, dt=5e-5, t_final=10.0, initial="constant", initial_K=1.25,
        flux="burgers", delta=1.0, alpha=1.0, omega=((0.0, 0.25),), snapshot_interval=0.01,
        cfl_policy="enforce",
    ),
    _preset(
        "fig6.1", ("not_extinct", "zero_inside"), "Buckley-Leverett k = 1/4, alpha = 3/4",
        model="conservation", n_cells=20_000, dt=1e-5, t_final=10.0, initial="constant", initial_K=1.25,
        flux="buckley_leverett", flux_k=0.25, delta=1.0, alpha=0.75, omega=((0.0, 0.25),),
        snapshot_interval=0.01,
    ),
    _preset(
        "fig6.1-alpha1", ("not_extinct", "zero_inside"), "Buckley-Leverett k = 1/4, alpha = 1",
        model="conservation", n_cells=20_000, dt=1e-5, t_final=10.0, initial="constant", initial_K=1.25,
        flux="buckley_leverett", flux_k=0.25, delta=1.0, alpha=1.0, omega=((0.0, 0.25),),
        snapshot_interval=0.01,
    ),
    _preset(
        "fig6.3", ("support_mass", "eigen_decay"),
        "viscous Burgers, alpha = 3/4: mass leaves the damping zone, then Dirichlet eigen-decay outside",
        model="viscous", n_cells=2**14, dt=1e-5, t_final=30.0, initial="constant", initial_K=1.25,
        flux="burgers", delta=1.0, alpha=0.75, omega=((0.0, 0.25),), mu=0.01,
        snapshot_interval=1.0, series_every=10,
    ),
    _preset(
        "fig6.5", ("velocity_dies", "u_frozen"), "damped wave, c = 0.1, damping on (3/8, 5/8)",
        model="wave", n_cells=3000, dt=5e-4, t_final=40.0, initial="wave_plateau", initial_K=1.25,
        topology="dirichlet", wave_c=0.1, delta=1.0, alpha=1.0, omega=((0.375, 0.25),),
        snapshot_interval=0.5, series_every=10,
    ),
    _preset(
        "fig6.6", (), "free soliton c = 20, k = 0.81 on (-10, 10)",
        model="nls", n_cells=8192, dt=5e-4, t_final=1.0, initial="soliton", length=20.0, origin=-10.0,
        delta=0.0, alpha=1.0, omega=None, q=2.0, soliton_c=20.0, soliton_k=0.81,
        snapshot_interval=0.01, series_every=10,
    ),
    _preset(
        "fig6.7", ("support_mass",), "soliton hitting damping on (-10, -6) and (6, 10)",
        model="nls", n_cells=8192, dt=5e-4, t_final=3.0, initial="soliton", length=20.0, origin=-10.0,
        delta=1.0, alpha=1.0, omega=((-10.0, 4.0), (6.0, 4.0)), q=2.0, soliton_c=20.0, soliton_k=0.81,
        snapshot_interval=0.01, series_every=10,
    ),
]

PRESETS: Dict[str, Preset] = {p.name: p for p in _PRESETS}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


def preset_config(name: str, coarse: int = 1) -> RunConfig:
    return get_preset(name).coarse(coarse)


def roundtrip(preset: Preset) -> RunConfig:
    return parse_config(preset.config.to_text())
