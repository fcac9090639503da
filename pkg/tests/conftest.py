import pytest

from sublinear_damping.config import RunConfig


def conservation_config(**kw) -> RunConfig:
    base = dict(model="conservation", n_cells=200, dt=1e-3, t_final=0.1, initial="constant",
                initial_K=1.25, flux="burgers", delta=1.0, alpha=1.0, omega=((0.0, 0.25),))
    base.update(kw)
    return RunConfig(**base)


@pytest.fixture
def make_config():
    return conservation_config


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
