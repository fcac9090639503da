"""Property-based checks of the invariants: exact flows, conservation, order, round-trips."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sublinear_damping.companions.spectral import SpectralWorkspace
from sublinear_damping.config import RunConfig, parse_config
from sublinear_damping.core import RealField, make_grid, read_snapshot, write_snapshot
from sublinear_damping.damping import DampingProfile, damping_flow_real, make_profile
from sublinear_damping.flux import buckley_leverett, burgers, linear
from sublinear_damping.hyperbolic import ConservationScheme, SolverState, advect_values, rusanov_flux, strang_step
from sublinear_damping.oracle import OracleInput, TravelTable

alphas = st.floats(0.05, 1.0)
values = st.floats(-5.0, 5.0, allow_nan=False)
fluxes = st.sampled_from([linear(2.0), linear(-0.7), burgers(), buckley_leverett(0.25)])
fields = arrays(float, 16, elements=st.floats(-1.5, 1.5, allow_nan=False))


def _field(v):
    return RealField(np.asarray(v, dtype=float), 0.0, make_grid(len(v)))


@given(u0=values, alpha=alphas, delta=st.floats(0.0, 3.0), t=st.floats(0.0, 5.0))
def test_damping_flow_matches_closed_form(u0, alpha, delta, t):
    out = damping_flow_real(_field([u0, u0]), DampingProfile(delta, alpha), t).values[0]
    rho = max(abs(u0) ** alpha - alpha * delta * t, 0.0) ** (2 / alpha)
    assert abs(out**2 - rho) <= 1e-10
    assert abs(out) <= abs(u0) and (out == 0 or np.sign(out) == np.sign(u0))


@given(u=fields, alpha=alphas, s=st.floats(0, 2), r=st.floats(0, 2))
def test_damping_flow_semigroup(u, alpha, s, r):
    p = DampingProfile(1.0, alpha)
    f = _field(u)
    once = damping_flow_real(f, p, s + r).values
    twice = damping_flow_real(damping_flow_real(f, p, s), p, r).values
    np.testing.assert_allclose(once, twice, atol=1e-9)


@given(a=fields, b=fields, alpha=alphas, t=st.floats(0, 2))
def test_damping_flow_preserves_order(a, b, alpha, t):
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    p = DampingProfile(1.0, alpha)
    assert np.all(damping_flow_real(_field(lo), p, t).values <= damping_flow_real(_field(hi), p, t).values)


@given(flux=fluxes, u=values)
def test_rusanov_consistency(flux, u):
    assert rusanov_flux(flux, u, u) == flux.f(u)


@given(flux=fluxes, u=fields)
@settings(max_examples=50)
def test_advection_conserves_mass_and_bounds(flux, u):
    grid = make_grid(16)
    sch = ConservationScheme(flux, DampingProfile(0.0, 1.0), grid, 0.05)
    out = advect_values(u, 0.05, sch)
    assert abs(np.sum(out) - np.sum(u)) <= 1e-12 * max(1.0, np.sum(np.abs(u)))
    assert out.min() >= u.min() - 1e-12 and out.max() <= u.max() + 1e-12


@given(flux=fluxes, a=fields, b=fields, alpha=alphas, delta=st.floats(0, 4), order=st.sampled_from(["BAB", "ABA"]))
@settings(max_examples=50)
def test_strang_step_preserves_order_and_sup_bound(flux, a, b, alpha, delta, order):
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    grid = make_grid(16)
    sch = ConservationScheme(flux, make_profile(delta, alpha, (0.0, 0.25), grid), grid, 0.05, order=order)
    s_lo = strang_step(SolverState(_field(lo), 0, sch)).field.values
    s_hi = strang_step(SolverState(_field(hi), 0, sch)).field.values
    assert np.all(s_lo <= s_hi + 1e-12)
    assert np.max(np.abs(s_hi)) <= np.max(np.abs(hi)) + 1e-12


@given(v=arrays(float, 8, elements=st.floats(-1e300, 1e300, allow_nan=False)), t=st.floats(0, 1e6))
@settings(max_examples=30)
def test_snapshot_roundtrip_is_exact(tmp_path_factory, v, t):
    path = tmp_path_factory.mktemp("snap") / "s.csv"
    back = read_snapshot(write_snapshot(RealField(v, t, make_grid(8)), path))
    assert np.array_equal(back.values, v) and back.time == t


@given(n=st.integers(2, 10_000), dt=st.floats(1e-8, 1.0), alpha=alphas, delta=st.floats(0, 10),
       x0=st.floats(0, 0.5), width=st.floats(0.01, 0.5), policy=st.sampled_from(["enforce", "replicate-paper"]))
def test_config_text_roundtrip(n, dt, alpha, delta, x0, width, policy):
    cfg = RunConfig(model="conservation", n_cells=n, dt=dt, t_final=1.0, initial="constant", alpha=alpha,
                    delta=delta, omega=((x0, width),), cfl_policy=policy)
    assert parse_config(cfg.to_text()) == cfg


@given(v=arrays(float, 32, elements=st.floats(-1e3, 1e3, allow_nan=False)))
def test_spectral_roundtrip(v):
    ws = SpectralWorkspace(32, 3.0)
    assert np.max(np.abs(ws.inverse(ws.forward(v)).real - v)) <= 1e-12 * max(1.0, np.max(np.abs(v)))


@given(alpha=alphas, w=st.floats(0.3, 1.2))
@settings(max_examples=20, deadline=None)
def test_travel_table_exit_entry_are_inverse(alpha, w):
    inp = OracleInput(burgers(), K=1.25, delta=1.0, A=0.05, alpha=alpha)
    table = TravelTable(inp, n=20_001)
    if table.travel(w) < inp.A:
        return
    assert abs(table.entry_value(table.exit_value(w)) - w) <= 1e-6
    assert table.exit_value(w) < w
