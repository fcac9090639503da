import math

import numpy as np
import pytest

from sublinear_damping.analysis import (CHECKS, check_comparison, control_gain, control_scenario,
                                        detect_extinction, fit_algebraic_rate, fit_exponential_rate, run_checks,
                                        zero_interval_measure)
from sublinear_damping.core import RealField, TimeSeries, make_grid
from sublinear_damping.errors import FluxConditionError, InvalidArgument, MismatchedGrids
from sublinear_damping.flux import burgers, linear
from sublinear_damping.hyperbolic import run_conservation


def _series(t, v, name="sup_norm"):
    return TimeSeries(name, np.asarray(t, float), np.asarray(v, float))


def test_detect_extinction():
    assert detect_extinction(_series([0, 1, 2, 3], [1, 0.5, 0, 0])) == 2.0
    assert detect_extinction(_series([0, 1, 2], [1, 0.5, 0.1])) is None
    assert detect_extinction(_series([0, 1], [0, 0])) == 0.0
    # a revival resets the extinction time
    assert detect_extinction(_series([0, 1, 2, 3], [1, 0, 1, 0])) == 3.0


def test_zero_interval_measure():
    g = make_grid(8)
    assert zero_interval_measure(RealField(np.zeros(8), 0, g), (0.0, 0.25)) == 0.0
    assert zero_interval_measure(RealField(np.ones(8), 0, g), (0.0, 0.25)) == 0.25
    half = np.array([0, 1, 1, 1, 1, 1, 1, 1.0])
    assert zero_interval_measure(RealField(half, 0, g), (0.0, 0.25)) == pytest.approx(0.125)


def test_rate_fits_on_synthetic_series():
    t = np.linspace(1, 10, 50)
    assert fit_algebraic_rate(_series(t, 3 / t)) == pytest.approx(-1.0, abs=1e-6)
    assert fit_algebraic_rate(_series(t, 3 / t**2)) == pytest.approx(-2.0, abs=1e-6)
    assert fit_exponential_rate(_series(t, np.exp(-3 * t))) == pytest.approx(-3.0, abs=1e-6)
    assert fit_exponential_rate(_series(t, np.full_like(t, 2.0))) == pytest.approx(0.0, abs=1e-6)
    assert fit_algebraic_rate(_series(t, 1 / t), (2.0, 4.0)) == pytest.approx(-1.0, abs=1e-6)


def test_rate_fit_rejects_bad_windows():
    t = np.linspace(1, 10, 10)
    with pytest.raises(InvalidArgument):
        fit_algebraic_rate(_series(t, 1 / t), (20.0, 30.0))
    with pytest.raises(InvalidArgument):
        fit_exponential_rate(_series(t, np.zeros_like(t)))


def _run(make_config, **kw):
    return run_conservation(make_config(n_cells=100, dt=2e-3, t_final=0.4, snapshot_interval=0.1, **kw))


def test_comparison_of_ordered_data(make_config):
    lower = _run(make_config, initial_K=0.5)
    upper = _run(make_config, initial_K=1.0)
    assert check_comparison(lower, upper).passed
    assert not check_comparison(upper, lower).passed


def test_comparison_of_ordered_damping(make_config):
    weak = _run(make_config, delta=0.5)
    strong = _run(make_config, delta=1.0)
    assert check_comparison(strong, weak).passed


def test_identical_runs_have_zero_violation(make_config):
    a, b = _run(make_config), _run(make_config)
    assert check_comparison(a, b).max_violation == 0.0


def test_comparison_needs_matching_grids(make_config):
    a = _run(make_config)
    b = run_conservation(make_config(n_cells=50, dt=2e-3, t_final=0.4, snapshot_interval=0.1))
    with pytest.raises(MismatchedGrids):
        check_comparison(a, b)


def test_control_gain():
    delta, deadline, speed = control_gain(linear(2.0), 1.25, 0.5)
    assert delta == pytest.approx(5.0) and deadline == pytest.approx(0.75) and speed == 2.0
    d10, t10, _ = control_gain(linear(2.0), 1.25, 10.0)
    assert d10 < delta and t10 > deadline
    with pytest.raises(FluxConditionError):
        control_gain(burgers(), 1.25, 0.5)


def test_control_scenario_small_grid():
    report = control_scenario(linear(2.0), 1.25, 0.5, n_cells=200)
    assert report.delta == pytest.approx(5.0)
    assert report.passed, report


def test_check_registry(make_config):
    record = _run(make_config)
    assert {"extinct", "not_extinct", "zero_inside", "eigen_decay", "u_frozen"} <= set(CHECKS)
    (res,) = run_checks(record, ["not_extinct"])
    assert res.passed and math.isnan(res.value)
    with pytest.raises(InvalidArgument):
        run_checks(record, ["bogus"])
