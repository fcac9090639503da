"""Conservation laws with localized sublinear damping: solvers, oracle and diagnostics."""
from .core import Grid1D, RealField, ComplexField, make_grid, sample_function
from .config import RunConfig, parse_config, load_config
from .damping import DampingProfile, make_profile
from .flux import FluxModel, burgers, buckley_leverett, linear

__all__ = [
    "Grid1D", "RealField", "ComplexField", "make_grid", "sample_function",
    "RunConfig", "parse_config", "load_config",
    "DampingProfile", "make_profile",
    "FluxModel", "burgers", "buckley_leverett", "linear",
]

__version__ = "0.1.0"
