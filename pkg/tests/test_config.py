import pytest

from sublinear_damping.config import RunConfig, load_config, parse_config
from sublinear_damping.errors import ConfigError
from sublinear_damping.presets import PRESETS, get_preset, preset_config, roundtrip

MINIMAL = "model = conservation\ngrid.n_cells = 100\ndt = 0.001\nt_final = 1\ninitial = constant\n"


def test_minimal_config_uses_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.flux == "burgers" and cfg.omega == ((0.0, 0.25),) and cfg.cfl_policy == "enforce"


def test_alpha_out_of_range():
    with pytest.raises(ConfigError, match="alpha"):
        parse_config(MINIMAL + "damping.alpha = 1.5\n")


def test_empty_file_lists_missing_keys():
    with pytest.raises(ConfigError) as exc:
        parse_config("")
    for key in ("model", "grid.n_cells", "dt", "t_final", "initial"):
        assert key in str(exc.value)


def test_unknown_key_reports_its_line():
    with pytest.raises(ConfigError) as exc:
        parse_config(MINIMAL + "damping.gamma = 2\n")
    assert exc.value.line == 6


def test_malformed_line():
    with pytest.raises(ConfigError):
        parse_config("model conservation\n")


def test_comments_and_omega_forms():
    cfg = parse_config(MINIMAL + "damping.omega = everywhere  # all of T\n")
    assert cfg.omega is None
    cfg = parse_config(MINIMAL.replace("conservation", "nls").replace("100", "128")
                       + "damping.omega = -10,4; 6,4\ngrid.length = 20\ngrid.origin = -10\n")
    assert cfg.omega == ((-10.0, 4.0), (6.0, 4.0))


def test_fig51_preset_text():
    cfg = parse_config(get_preset("fig5.1").config.to_text())
    assert cfg.delta == 1.0 and cfg.omega == ((0.0, 0.25),) and cfg.initial_K == 1.25


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_roundtrip(name):
    preset = get_preset(name)
    assert roundtrip(preset) == preset.config


def test_load_config(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(get_preset("fig1.1").config.to_text())
    assert load_config(p) == get_preset("fig1.1").config


def test_coarsening_scales_dx_and_dt():
    cfg = preset_config("fig5.1", 4)
    assert cfg.n_cells == 5000 and cfg.dt == pytest.approx(2e-4)
    with pytest.raises(ConfigError):
        get_preset("fig5.1").config.coarsened(3)


def test_model_topology_pairing():
    with pytest.raises(ConfigError):
        RunConfig(model="wave", n_cells=10, dt=0.1, t_final=1, initial="wave_plateau")
    with pytest.raises(ConfigError):
        RunConfig(model="nls", n_cells=100, dt=0.1, t_final=1, initial="soliton")


def test_unknown_preset():
    with pytest.raises(ConfigError):
        get_preset("fig9.9")
