"""Turn run records into quantitative checks: extinction, rates, comparison, control."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .config import RunConfig
from .core import TimeSeries
from .diagnostics import zero_interval_measure  # noqa: F401  (re-exported)
from .errors import FluxConditionError, InvalidArgument, MismatchedGrids
from .flux import FluxModel
from .hyperbolic import run_conservation
from .record import RunRecord

EXTINCTION_THRESHOLD = 1e-12


def detect_extinction(series: TimeSeries, threshold: float = EXTINCTION_THRESHOLD) -> Optional[float]:
    """First time after which the series stays strictly below ``threshold``."""
    if not threshold > 0:
        raise InvalidArgument("threshold must be positive")
    alive = np.nonzero(np.asarray(series.values) >= threshold)[0]
    if alive.size == 0:
        return float(series.t[0])
    last = int(alive[-1])
    if last == len(series.values) - 1:
        return None
    return float(series.t[last + 1])


def _window(series: TimeSeries, window):
    t = np.asarray(series.t, dtype=float)
    lo, hi = window if window is not None else (0.5 * t[-1], t[-1])
    keep = (t >= lo) & (t <= hi)
    if np.count_nonzero(keep) < 2:
        raise InvalidArgument(f"fewer than two samples in window [{lo}, {hi}]")
    values = np.asarray(series.values, dtype=float)[keep]
    if np.any(values <= 0):
        raise InvalidArgument("nonpositive values in the fit window")
    return t[keep], values


def fit_algebraic_rate(series: TimeSeries, window=None) -> float:
    """Least-squares slope of log(value) against log(t); window defaults to the second half."""
    t, v = _window(series, window)
    return float(np.polyfit(np.log(t), np.log(v), 1)[0])


def fit_exponential_rate(series: TimeSeries, window=None) -> float:
    """Least-squares slope of log(value) against t."""
    t, v = _window(series, window)
    return float(np.polyfit(t, np.log(v), 1)[0])


@dataclass
class ComparisonReport:
    times: np.ndarray
    violation: np.ndarray  # max_j (u_j - v_j)_+ per snapshot
    bound_excess: np.ndarray  # max_j |u_j| - sup|u_0|, per snapshot, clipped at 0
    tol: float

    @property
    def max_violation(self) -> float:
        return float(np.max(self.violation)) if self.violation.size else 0.0

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tol and float(np.max(self.bound_excess, initial=0.0)) <= self.tol


def check_comparison(record_u: RunRecord, record_v: RunRecord, tol: float = 1e-12) -> ComparisonReport:
    """Check ``u <= v`` snapshot by snapshot, plus the sup-norm bound on ``u``."""
    su, sv = record_u.snapshots, record_v.snapshots
    if len(su) != len(sv):
        raise MismatchedGrids("records hold different numbers of snapshots")
    times, viol, excess = [], [], []
    u0_sup = float(np.max(np.abs(su[0].values)))
    for a, b in zip(su, sv):
        if a.grid != b.grid:
            raise MismatchedGrids("snapshots live on different grids")
        if not math.isclose(a.time, b.time, rel_tol=1e-12, abs_tol=1e-12):
            raise MismatchedGrids(f"snapshot times differ: {a.time} vs {b.time}")
        times.append(a.time)
        viol.append(max(float(np.max(a.values - b.values)), 0.0))
        excess.append(max(float(np.max(np.abs(a.values))) - u0_sup, 0.0))
    return ComparisonReport(np.array(times), np.array(viol), np.array(excess), tol)


def monotone_violation(field, lo: float, hi: float) -> float:
    """Largest decrease between consecutive cells whose centres lie in (lo, hi)."""
    x = field.grid.x
    vals = field.values[(x > lo) & (x < hi)]
    if vals.size < 2:
        return 0.0
    return float(max(-np.min(np.diff(vals)), 0.0))


# ------------------------------------------------------------------ feedback control
@dataclass
class ControlReport:
    flux: str
    K: float
    gamma: float
    alpha: float
    min_speed: float
    delta: float
    deadline: float
    omega: Optional[tuple]
    dt: float
    extinction_time: Optional[float]

    @property
    def passed(self) -> bool:
        return self.extinction_time is not None and self.extinction_time <= self.deadline + 2 * self.dt


def min_speed(flux: FluxModel, K: float, n: int = 10_001) -> float:
    s = np.linspace(-K, K, n)
    return float(np.min(np.abs(flux.df(s))))


def control_gain(flux: FluxModel, K: float, gamma: float, length: float = 1.0, alpha: float = 1.0):
    """Damping level and extinction deadline of the feedback ``-delta u/|u|^alpha``."""
    if not gamma > 0:
        raise InvalidArgument("gamma must be positive")
    speed = min_speed(flux, K)
    if speed <= 0.0:
        raise FluxConditionError(f"{flux.label} has a vanishing speed on [-{K}, {K}]; transport cannot help")
    delta = K**alpha * speed / (alpha * gamma * length)
    deadline = (1.0 + gamma) * length / speed
    return delta, deadline, speed


def control_scenario(flux: FluxModel, K: float, gamma: float, domain_length: float = 1.0, alpha: float = 1.0,
                     omega=None, n_cells: int = 1000, dt: Optional[float] = None, initial: str = "constant",
                     flux_spec: Optional[str] = None) -> ControlReport:
    """Run the feedback-controlled problem and report its extinction time against the deadline.

    The default control region ``(0, min(gamma, 1) |T|)`` is the shortest one
    a constant datum can cross without surviving; with ``gamma >= 1`` the
    feedback acts everywhere.
    """
    delta, deadline, speed = control_gain(flux, K, gamma, domain_length, alpha)
    if omega is None:
        width = min(gamma, 1.0) * domain_length
        omega = None if width >= domain_length else ((0.0, width),)
    dx = domain_length / n_cells
    if dt is None:
        dt = 0.5 * dx / max(flux.max_speed(np.linspace(-K, K, 1001)), 1e-300)
    t_final = 1.25 * deadline
    cfg = RunConfig(
        model="conservation", n_cells=n_cells, dt=dt, t_final=t_final, initial=initial,
        length=domain_length, flux=flux_spec or flux.label, flux_c=flux.c, flux_k=flux.k,
        delta=delta, alpha=alpha, omega=omega, initial_K=K,
    )
    record = run_conservation(cfg)
    return ControlReport(flux.label, K, gamma, alpha, speed, delta, deadline, omega, cfg.dt,
                         detect_extinction(record["sup_norm"]))


# ------------------------------------------------------------------ named checks for `analyze`
@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    detail: str = ""


def run_checks(record: RunRecord, names: Sequence[str], **options) -> List[CheckResult]:
    out = []
    for name in names:
        if name not in CHECKS:
            raise InvalidArgument(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}")
        out.append(CHECKS[name](record, **options))
    return out


def _sup_series(record):
    for key in ("sup_norm", "v_sup_omega"):
        if key in record.series:
            return record.series[key]
    raise InvalidArgument("record has no sup-norm series")


def _check_extinct(record, **_):
    t = detect_extinction(_sup_series(record))
    return CheckResult("extinct", t is not None, math.nan if t is None else t, "sup-norm below 1e-12 to the end")


def _check_not_extinct(record, **_):
    t = detect_extinction(_sup_series(record))
    return CheckResult("not_extinct", t is None, math.nan if t is None else t, "sup-norm stays positive")


def _check_zero_inside(record, **_):
    gap = record.series["zero_gap"].values[-1]
    A = record.config.omega[0][1]
    return CheckResult("zero_inside", gap < A, float(gap), "a zero run exists inside omega at the end")


def _check_monotone_outside(record, tol=1e-12, margin=1, **_):
    # ``margin`` cells at each end are skipped: the upwind stencil couples the
    # last cell to the first damped one across the periodic seam
    x0, A = record.config.omega[0]
    end = record.config.origin + record.config.length
    pad = margin * record.snapshots[0].grid.spacing
    worst = max(monotone_violation(s, x0 + A + pad, end - pad) for s in record.snapshots)
    return CheckResult("monotone_outside", worst <= tol, worst, "u nondecreasing on (A, L) in every snapshot")


def _check_algebraic_rate(record, window=None, band=(-1.3, -0.8), **_):
    slope = fit_algebraic_rate(record.series["sup_norm"], window)
    return CheckResult("algebraic_rate", band[0] <= slope <= band[1], slope, f"log-log slope in {band}")


def _check_eigen_decay(record, window=None, rtol=0.05, **_):
    cfg = record.config
    A = cfg.omega[0][1]
    lam = math.pi / (cfg.length - A)
    expected = -cfg.mu * lam**2
    rate = fit_exponential_rate(record.series["sup_norm"], window)
    return CheckResult("eigen_decay", abs(rate - expected) <= rtol * abs(expected), rate,
                       f"expected {expected:.6g}")


def _check_support_mass(record, level=1e-6, **_):
    """Final L2 mass on supp a relative to the initial L2 mass of the whole field."""
    m = record.series["mass_on_support"].values
    first = record.snapshots[0]
    total = float(np.sum(np.abs(first.values) ** 2) * first.grid.spacing)
    ratio = float(m[-1] / total) if total > 0 else 0.0
    return CheckResult("support_mass", ratio < level, ratio, f"mass on supp a below {level} of the initial mass")


def _check_velocity_dies(record, level=1e-6, **_):
    series = record.series["v_sup_omega"]
    t = detect_extinction(series, threshold=level)
    value = math.nan if t is None else t
    return CheckResult("velocity_dies", t is not None, value,
                       f"sup over omega of |u_t| stays below {level} from this time on")


def frozen_drift(record: RunRecord, t_from: float) -> float:
    """Largest change of u on supp a between snapshots taken at or after ``t_from``."""
    snaps = [s for s in record.snapshots if s.time >= t_from]
    if len(snaps) < 2:
        raise InvalidArgument(f"fewer than two snapshots after t = {t_from}")
    inside = record.config.profile().on_grid(snaps[0].grid) > 0
    ref = snaps[0].values[inside]
    return float(max(np.max(np.abs(s.values[inside] - ref)) for s in snaps[1:]))


def _check_u_frozen(record, tol=1e-8, t_from=None, **_):
    t_from = 0.5 * record.snapshots[-1].time if t_from is None else t_from
    drift = frozen_drift(record, t_from)
    return CheckResult("u_frozen", drift < tol, drift, f"u on omega moves less than {tol} after t = {t_from:g}")


CHECKS = {
    "extinct": _check_extinct,
    "not_extinct": _check_not_extinct,
    "zero_inside": _check_zero_inside,
    "monotone_outside": _check_monotone_outside,
    "algebraic_rate": _check_algebraic_rate,
    "eigen_decay": _check_eigen_decay,
    "support_mass": _check_support_mass,
    "velocity_dies": _check_velocity_dies,
    "u_frozen": _check_u_frozen,
}
