"""Semi-analytic solution for a constant datum and damping on a single interval.

Setting: convex flux with ``f'(0) = 0``, datum ``u0 = K > 0``, damping
``a = delta`` on ``(0, A)`` of a periodic domain of length ``L``.  Along a
characteristic inside the damped zone the value obeys ``v' = -delta v^(1-alpha)``,
so the distance travelled while the value drops from ``w`` to ``v`` is
``G(w) - G(v)`` with ``G(r) = (1/delta) int_0^r f'(s) s^(alpha-1) ds``, and
``G`` is the same function as the full-extinction travel ``g``.

Two layers live here.  The scalar API (:func:`g_integral`,
:func:`epsilon_threshold`, :func:`crossing_time`, :func:`iterate_sequences`)
follows the definitions literally: adaptive quadrature in the time variable
and bisection.  :class:`BoundaryTrace` tabulates ``G`` once and builds the
whole inflow trace ``u(t, 0)`` from it, which the envelopes and the zero-set
curve need at many times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

from .errors import FluxConditionError, InvalidArgument, NoCrossing
from .flux import FluxModel, negate_flux, reflect_flux

ROOT_TOL = 1e-12
QUAD_TOL = 1e-12
MAX_CROSSINGS = 10_000


@dataclass(frozen=True)
class OracleInput:
    flux: FluxModel
    K: float
    delta: float
    A: float
    alpha: float = 1.0
    length: float = 1.0
    # reductions applied by from_problem, outermost first
    transforms: Tuple[str, ...] = ()

    def __post_init__(self):
        if not (self.K > 0 and self.delta > 0):
            raise InvalidArgument("K and delta must be positive")
        if not (0.0 < self.A < self.length):
            raise InvalidArgument("A must lie in (0, length)")
        if not (0.0 < self.alpha <= 1.0):
            raise InvalidArgument("alpha must lie in (0, 1]")
        check_convex_flux(self.flux, self.K)

    @classmethod
    def from_problem(cls, flux, K, delta, A, alpha=1.0, length=1.0) -> "OracleInput":
        """Reduce negative data and concave fluxes to the convex, positive case.

        A negative datum is handled through ``w = -u`` (flux ``-f(-s)``); a
        concave flux through the space reflection ``x -> -x`` (flux ``-f``),
        which maps damping on ``(L - A, L)`` onto ``(0, A)``.
        """
        transforms = []
        if K < 0:
            flux, K = negate_flux(flux), -K
            transforms.append("negated")
        if flux.convexity(K) == "concave":
            flux = reflect_flux(flux)
            transforms.append("reflected")
        return cls(flux, float(K), float(delta), float(A), float(alpha), float(length), tuple(transforms))

    @property
    def extinction_scale(self) -> float:
        return 1.0 / (self.delta * self.alpha)

    def full_duration(self, w) -> float:
        """Time for the damping alone to extinguish the value ``w``."""
        return w**self.alpha / (self.delta * self.alpha)

    def decayed(self, w, s):
        return max(w**self.alpha - self.delta * self.alpha * s, 0.0) ** (1.0 / self.alpha)


def check_convex_flux(flux: FluxModel, K, n=2001):
    """Raise unless ``f'(0) = 0`` and the second difference of f is positive on [-K, K]."""
    if abs(float(flux.df(0.0))) > 1e-14:
        raise FluxConditionError(f"{flux.label}: f'(0) = {float(flux.df(0.0))!r}, expected 0")
    s = np.linspace(-K, K, n)
    second = np.diff(flux.f(s), 2)
    if not np.all(second > 0):
        raise FluxConditionError(f"{flux.label} is not uniformly convex on [-{K}, {K}]")


# ------------------------------------------------------------------ scalar API
def _partial_integral(w, s, inp: OracleInput) -> float:
    """``int_0^s f'(decayed(w, tau)) dtau``; the integrand vanishes past full_duration(w)."""
    end = min(s, inp.full_duration(w))
    if end <= 0:
        return 0.0
    value, _ = integrate.quad(lambda tau: float(inp.flux.df(inp.decayed(w, tau))), 0.0, end,
                              epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return value


def g_integral(v, inp: OracleInput) -> float:
    """Distance travelled by a characteristic entering the damping with value ``v`` before it dies."""
    if not (0.0 <= v <= inp.K * (1 + 1e-12)):
        raise InvalidArgument(f"v must lie in [0, K], got {v!r}")
    return _partial_integral(v, math.inf, inp)


def epsilon_threshold(inp: OracleInput) -> Optional[float]:
    """Root of ``g(eps) = A``; None when even ``K`` dies inside the damping zone."""
    if g_integral(inp.K, inp) < inp.A:
        return None
    return optimize.bisect(lambda v: g_integral(v, inp) - inp.A, 0.0, inp.K, xtol=ROOT_TOL, rtol=4 * np.finfo(float).eps)


def crossing_time(u, inp: OracleInput, eps: Optional[float] = None) -> float:
    """Time a characteristic entering with value ``u`` needs to cross the damping zone."""
    if eps is None:
        eps = epsilon_threshold(inp)
    end = inp.full_duration(u)
    total = _partial_integral(u, end, inp)
    if eps is None or u < eps or total < inp.A:
        raise NoCrossing(f"value {u!r} dies inside the damping zone")
    # at u = eps the surplus is quadrature noise and the root is ill-conditioned
    if total - inp.A <= QUAD_TOL * max(1.0, inp.A):
        return end
    return optimize.bisect(lambda s: _partial_integral(u, s, inp) - inp.A, 0.0, end,
                           xtol=ROOT_TOL, rtol=4 * np.finfo(float).eps)


@dataclass
class SequenceResult:
    """Values entering the damping (u), entry times (t), exit values (v), exit times (tau)."""

    u: np.ndarray
    t: np.ndarray
    v: np.ndarray
    tau: np.ndarray
    n0: int
    eps: float
    T_star: float
    t_star: float
    contraction: float


def iterate_sequences(inp: OracleInput, length: Optional[float] = None) -> SequenceResult:
    L = inp.length if length is None else float(length)
    eps = epsilon_threshold(inp)
    if eps is None:
        raise NoCrossing("no threshold: damping dominates, every characteristic dies on first entry")
    u, t, v, tau = [inp.K], [0.0], [], []
    while u[-1] > eps:
        if len(v) >= MAX_CROSSINGS:
            raise RuntimeError("crossing sequence did not reach the threshold")
        s = crossing_time(u[-1], inp, eps)
        vn = inp.decayed(u[-1], s)
        tau.append(t[-1] + s)
        v.append(vn)
        t.append(tau[-1] + (L - inp.A) / float(inp.flux.df(vn)))
        u.append(vn)
    n0 = len(u) - 1
    ratios = [vn / un for vn, un in zip(v, u)]
    T_star = t[-1]
    return SequenceResult(np.array(u), np.array(t), np.array(v), np.array(tau), n0, eps, T_star,
                          T_star + inp.full_duration(eps), max(ratios) if ratios else 0.0)


# ------------------------------------------------------------------ tabulated trace
class TravelTable:
    """``G`` on a uniform lattice of [0, K] with its inverse by interpolation."""

    def __init__(self, inp: OracleInput, n=200_001):
        self.inp = inp
        r = np.linspace(0.0, inp.K, n)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = inp.flux.df(r) * r ** (inp.alpha - 1.0) / inp.delta
        dens[0] = 0.0
        self.r = r
        self.G = integrate.cumulative_simpson(dens, x=r, initial=0.0)

    def travel(self, w):
        return np.interp(w, self.r, self.G)

    def inverse(self, g):
        return np.interp(g, self.G, self.r)

    def exit_value(self, w):
        """Value on leaving the damping zone after entering with ``w`` (needs G(w) >= A)."""
        return self.inverse(self.travel(w) - self.inp.A)

    def entry_value(self, v):
        return self.inverse(self.travel(v) + self.inp.A)


@dataclass
class TraceBranch:
    kind: str  # "flat" or "curved"
    t: np.ndarray  # increasing
    u: np.ndarray  # nonincreasing


class BoundaryTrace:
    """The inflow trace ``u(t, 0)`` for all ``t >= 0``.

    The trace alternates flat pieces (value ``u_n`` for the transit time of
    the constant datum) and curved pieces.  Curved piece ``k`` is
    parametrized by its value ``w``; its time is obtained by following the
    characteristic back through earlier crossings to the one that started
    inside the damping zone at ``t = 0``.
    """

    def __init__(self, inp: OracleInput, seq: Optional[SequenceResult] = None, samples=4000,
                 table: Optional[TravelTable] = None):
        self.inp = inp
        self.seq = seq or iterate_sequences(inp)
        self.table = table or TravelTable(inp)
        self.eps = self.seq.eps
        L, A, K = inp.length, inp.A, inp.K
        df = lambda w: np.asarray(inp.flux.df(np.asarray(w, dtype=float)), dtype=float)
        self._transit = lambda w: (L - A) / df(w)
        flat_len = float(self._transit(K))
        u_seq, t_seq = self.seq.u, self.seq.t
        branches: List[TraceBranch] = []
        for k in range(len(u_seq)):
            if k > 0:
                branches.append(self._curved(k, samples))
            branches.append(TraceBranch("flat", np.array([t_seq[k], t_seq[k] + flat_len]),
                                        np.array([u_seq[k], u_seq[k]])))
        branches.append(self._curved(len(u_seq), samples))
        self.branches = branches
        self.t = np.concatenate([b.t for b in branches])
        self.u = np.concatenate([b.u for b in branches])
        self.T_star = self._first_time_below(self.eps)
        self.t_star = self.T_star + inp.full_duration(self.eps)

    def _curved_time(self, k, w):
        """Arrival time at x = 0 of the piece-k value ``w``."""
        inp, tab = self.inp, self.table
        chain = [np.asarray(w, dtype=float)]
        for _ in range(k - 1):
            chain.append(tab.entry_value(chain[-1]))
        # chain[-1] is the exit value of a characteristic that started inside the zone
        w1 = chain[-1]
        t = (inp.K**inp.alpha - w1**inp.alpha) / (inp.delta * inp.alpha) + self._transit(w1)
        for j in range(len(chain) - 2, -1, -1):
            entry, out = chain[j + 1], chain[j]
            t = t + (entry**inp.alpha - out**inp.alpha) / (inp.delta * inp.alpha) + self._transit(out)
        return t

    def _curved(self, k, samples) -> TraceBranch:
        u_seq = self.seq.u
        hi = u_seq[k - 1]
        if k < len(u_seq):
            lo = u_seq[k]
            w = np.linspace(hi, lo, samples)
        else:
            # last piece decays to zero as t -> infinity; sample geometrically
            w = hi * np.geomspace(1.0, 1e-6, samples)
        return TraceBranch("curved", self._curved_time(k, w), w)

    def __call__(self, t):
        """``u(t, 0)``; beyond the sampled range the last piece is extended exactly."""
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.t, self.u)
        late = t > self.t[-1]
        if np.any(late):
            out = np.where(late, self._late(t), out)
        return out

    def _late(self, t):
        k = len(self.seq.u)
        hi = self.branches[-1].u[-1]
        vals = []
        for tt in np.atleast_1d(t):
            if tt <= self.t[-1]:
                vals.append(np.nan)
                continue
            f = lambda w: float(self._curved_time(k, w)) - tt
            lo = hi
            while f(lo) < 0:
                lo *= 0.5
            vals.append(optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-13))
        return np.reshape(vals, np.shape(t))

    def _first_time_below(self, level) -> float:
        i = int(np.argmax(self.u <= level))
        if self.u[i] > level:
            return math.inf
        if i == 0:
            return float(self.t[0])
        return float(np.interp(level, [self.u[i], self.u[i - 1]], [self.t[i], self.t[i - 1]]))

    def death_curve(self):
        """Samples ``(t, x)`` of the boundary of the zero set inside the damping zone."""
        return extinction_curve(np.column_stack([self.t, self.u]), self.inp, self.T_star, self.table)

    def zero_gap(self, t):
        """Exact ``|omega minus omega(t)|``: position where the latest extinct characteristic died."""
        curve = self.death_curve()
        tc, xc = curve[:, 0], curve[:, 1]
        order = np.argsort(tc, kind="stable")
        tc, xc = tc[order], xc[order]
        t = np.asarray(t, dtype=float)
        out = np.interp(t, tc, xc, left=self.inp.A)
        return np.where(t < self.t_star, self.inp.A, out)


def extinction_curve(trace, inp: OracleInput, T_star: float, table: Optional[TravelTable] = None):
    """Map trace samples ``(t0, u(t0, 0))`` with ``t0 >= T_star`` to ``(t0 + u^a/(d a), g(u))``."""
    trace = np.asarray(trace, dtype=float)
    if trace.ndim != 2 or trace.shape[1] != 2:
        raise InvalidArgument("trace must be an (n, 2) array of (t, u) pairs")
    keep = trace[:, 0] >= T_star - 1e-12
    if not np.any(keep):
        raise InvalidArgument("empty trace: no samples at or after T_star")
    t0, w = trace[keep, 0], np.abs(trace[keep, 1])
    if table is None:
        x = np.array([g_integral(min(v, inp.K), inp) for v in w])
    else:
        x = table.travel(w)
    return np.column_stack([t0 + w**inp.alpha / (inp.delta * inp.alpha), x])


# ------------------------------------------------------------------ envelopes
def speed_ratio_bounds(flux: FluxModel, K, n=10_000) -> Tuple[float, float]:
    """Inf and sup of ``f'(s)/s`` on (0, K], with ``f''(0)`` as the value at 0."""
    s = K * np.arange(1, n + 1) / n
    ratio = np.concatenate(([float(flux.d2f(0.0))], flux.df(s) / s))
    return float(ratio.min()), float(ratio.max())


def decay_envelopes(inp: OracleInput, t, t_star: float, eps: float):
    """Upper bounds on the sup-norm and on the non-zero part of the damping zone at time ``t``."""
    t = np.asarray(t, dtype=float)
    lag = inp.full_duration(eps)
    if np.any(t <= t_star + lag):
        raise InvalidArgument(f"envelopes need t > {t_star + lag!r}")
    b_lo, b_hi = speed_ratio_bounds(inp.flux, inp.K)
    a, d = inp.alpha, inp.delta
    sup_bound = 1.0 / (b_lo * (t - t_star - lag))
    gap_bound = b_hi / (2.0 * d * a * b_lo ** (1.0 + a)) * (t - t_star) ** (-(1.0 + a))
    return sup_bound, gap_bound


@dataclass
class OracleReport:
    inp: OracleInput
    regime: str  # "crossing" or "damping-dominates"
    eps: Optional[float] = None
    sequences: Optional[SequenceResult] = None
    T_star: Optional[float] = None
    t_star: Optional[float] = None
    t_n0: Optional[float] = None
    trace: Optional[BoundaryTrace] = field(default=None, repr=False)

    def envelopes(self, t):
        if self.regime != "crossing":
            raise NoCrossing("no envelopes in the damping-dominated regime")
        return decay_envelopes(self.inp, t, self.t_star, self.eps)

    def summary(self) -> dict:
        out = {
            "flux": self.inp.flux.label,
            "K": self.inp.K,
            "delta": self.inp.delta,
            "A": self.inp.A,
            "alpha": self.inp.alpha,
            "length": self.inp.length,
            "transforms": ",".join(self.inp.transforms) or "none",
            "regime": self.regime,
        }
        if self.regime == "crossing":
            seq = self.sequences
            out.update(eps=self.eps, n0=seq.n0, T_star=self.T_star, t_star=self.t_star,
                       t_n0=self.t_n0, t_star_from_t_n0=seq.t_star, contraction=seq.contraction)
            for n in range(len(seq.u)):
                out[f"u_{n}"] = seq.u[n]
                out[f"t_{n}"] = seq.t[n]
            for n in range(len(seq.v)):
                out[f"v_{n}"] = seq.v[n]
                out[f"tau_{n}"] = seq.tau[n]
            b_lo, b_hi = speed_ratio_bounds(self.inp.flux, self.inp.K)
            out.update(beta_minus=b_lo, beta_plus=b_hi)
        return out


def solve(inp: OracleInput, samples=4000) -> OracleReport:
    eps = epsilon_threshold(inp)
    if eps is None:
        return OracleReport(inp, "damping-dominates")
    seq = iterate_sequences(inp)
    trace = BoundaryTrace(inp, seq, samples)
    return OracleReport(inp, "crossing", eps, seq, trace.T_star, trace.t_star, seq.T_star, trace)


def input_from_config(cfg) -> OracleInput:
    """Oracle input for a conservation run with constant datum and one damping interval at x = 0."""
    if cfg.initial != "constant":
        raise InvalidArgument("the oracle needs a constant initial datum")
    if cfg.omega is None or len(cfg.omega) != 1:
        raise InvalidArgument("the oracle needs damping on a single interval")
    x0, A = cfg.omega[0]
    inp = OracleInput.from_problem(cfg.flux_model(), cfg.initial_K, cfg.delta, A, cfg.alpha, cfg.length)
    # after a space reflection the damping must sit at the right end of the domain
    start = cfg.origin + cfg.length - A if "reflected" in inp.transforms else cfg.origin
    if abs(x0 - start) > 1e-12:
        raise InvalidArgument(f"the oracle needs the damping interval to start at x = {start!r}")
    return inp
