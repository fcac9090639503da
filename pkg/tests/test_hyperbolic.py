import numpy as np
import pytest

from sublinear_damping.analysis import detect_extinction, monotone_violation
from sublinear_damping.core import RealField, make_grid
from sublinear_damping.damping import DampingProfile, damping_flow_real, make_profile
from sublinear_damping.errors import CFLViolation, InvalidArgument
from sublinear_damping.flux import buckley_leverett, burgers, linear
from sublinear_damping.hyperbolic import (ConservationScheme, SolverState, hyperbolic_step, initial_state,
                                          run_conservation, rusanov_flux, strang_step)


def _state(values, flux, profile=None, dt=1e-3, **kw):
    grid = make_grid(len(values))
    profile = profile or DampingProfile(0.0, 1.0)
    sch = ConservationScheme(flux, profile, grid, dt, **kw)
    return SolverState(RealField(np.asarray(values, float), 0.0, grid), 0, sch)


def test_rusanov_reference_values():
    assert rusanov_flux(burgers(), 1.0, 0.0) == 0.75
    assert rusanov_flux(linear(2.0), 1.25, 1.25) == 2.5


@pytest.mark.parametrize("flux", [linear(-1.5), burgers(), buckley_leverett(0.25)], ids=lambda f: f.label)
def test_rusanov_consistency(flux):
    u = np.linspace(-1.5, 1.5, 31)
    assert np.array_equal(rusanov_flux(flux, u, u), flux.f(u))


def test_constant_state_is_preserved():
    s = hyperbolic_step(_state(np.full(50, 1.25), burgers()), 1e-3)
    assert np.all(s.field.values == 1.25)


def test_linear_step_conserves_mass_and_is_upwind():
    u0 = np.sin(2 * np.pi * make_grid(64).x) + 2.0
    s = hyperbolic_step(_state(u0, linear(2.0)), 0.25 / 64)
    assert np.sum(s.field.values) == pytest.approx(np.sum(u0), rel=1e-14)
    # Courant 1/2 with Rusanov on linear flux: u_j^+ = u_j - (u_j - u_{j-1}) / 2
    np.testing.assert_allclose(s.field.values, u0 - 0.5 * (u0 - np.roll(u0, 1)), atol=1e-14)


def test_enforce_policy_rejects_large_single_step():
    with pytest.raises(CFLViolation):
        hyperbolic_step(_state(np.full(10, 1.0), burgers()), 0.2)


def test_replicate_policy_allows_large_single_step():
    hyperbolic_step(_state(np.full(10, 1.0), burgers(), cfl_policy="replicate-paper"), 0.2)


def test_burgers_shock_speed(make_config):
    cfg = make_config(n_cells=2000, dt=2.5e-4, t_final=0.5, initial="riemann", initial_left=1.0, initial_right=0.0,
                      initial_x0=0.25, delta=0.0, omega=None, snapshot_interval=0.5)
    field = run_conservation(cfg).snapshots[-1]
    x = field.grid.x
    # the steepest drop is the shock; the periodic wrap also spawns a rarefaction at x = 0
    j = int(np.argmin(np.diff(field.values)))
    front = 0.5 * (x[j] + x[j + 1])
    assert (front - 0.25) / 0.5 == pytest.approx(0.5, abs=0.02)


def test_strang_without_damping_equals_advection():
    u0 = 1.0 + 0.2 * np.sin(2 * np.pi * make_grid(40).x)
    s = _state(u0, burgers(), dt=1e-3)
    assert np.array_equal(strang_step(s).field.values, hyperbolic_step(s, 1e-3).field.values)


@pytest.mark.parametrize("order", ["BAB", "ABA"])
def test_strang_with_zero_flux_equals_damping(order):
    u0 = np.linspace(-1, 1, 20)
    profile = DampingProfile(1.0, 0.5)
    s = _state(u0, linear(0.0), profile, dt=0.1, order=order)
    exact = damping_flow_real(s.field, profile, 0.1)
    np.testing.assert_allclose(strang_step(s).field.values, exact.values, atol=1e-15)


def test_everywhere_damping_matches_ode(make_config):
    cfg = make_config(n_cells=20, dt=1e-2, t_final=1.0, omega=None, snapshot_interval=0.1)
    for snap in run_conservation(cfg).snapshots:
        expected = max(1.25 - snap.time, 0.0)
        assert np.ptp(snap.values) == 0.0
        assert snap.values[0] == pytest.approx(expected, abs=1e-13)


def test_extinction_with_damping_everywhere(make_config):
    cfg = make_config(n_cells=50, dt=1e-3, t_final=1.5, omega=None)
    t = detect_extinction(run_conservation(cfg)["sup_norm"])
    assert abs(t - 1.25) <= 2e-3


def test_time_is_step_count_times_dt(make_config):
    cfg = make_config(dt=0.1 / 3, t_final=1.0)
    state = initial_state(cfg)
    for _ in range(30):
        state = strang_step(state)
    assert state.field.time == 30 * cfg.dt


def test_substeps_keep_monotone_profile_without_substepping(make_config):
    # Courant 0.625 needs no sub-steps: the profile outside the damping is nondecreasing to round-off
    cfg = make_config(n_cells=1000, dt=5e-4, t_final=1.0, snapshot_interval=0.01)
    record = run_conservation(cfg)
    dx = cfg.length / cfg.n_cells
    assert max(monotone_violation(s, 0.25 + dx, 1 - dx) for s in record.snapshots) <= 1e-12


def test_scheme_needs_periodic_grid():
    with pytest.raises(InvalidArgument):
        ConservationScheme(burgers(), DampingProfile(1.0, 1.0), make_grid(10, topology="dirichlet"), 1e-3)


def test_profile_wraps_on_grid():
    g = make_grid(8)
    p = make_profile(1.0, 1.0, (0.875, 0.25), g)
    np.testing.assert_array_equal(p.on_grid(g) > 0, [True, False, False, False, False, False, False, True])
