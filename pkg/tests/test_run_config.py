from pathlib import Path

import pytest

import config
from errors import ConfigError
from run_config import RunConfig, build_run_config, load_run_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_defaults():
    cfg = RunConfig()
    assert cfg.command == "verify"
    assert cfg.samples == config.DEFAULT_SAMPLES
    assert cfg.tolerances.sigma is None
    assert cfg.refine.sample_counts == [25, 50, 100]
    echo = cfg.echo()
    assert echo["tolerances"]["bianchi"] == config.BIANCHI_TOL
    assert echo["warp"]["csv"] is True


@pytest.mark.parametrize("fields", [
    {"systems": ["sigma7"], "kid": "static"},
    {"command": "develop"},
    {"systems": ["sigma1"]},
    {"samples": 3},
    {"jet_order": 1},
    {"command": "plot"},
    {"colour": "blue"},
    {"tolerances": {"sigma": -1.0}},
    {"refine": {"sample_counts": [40, 20]}},
    {"refine": {"ode_rtols": [1e-12, 1e-8]}},
])
def test_invalid_configurations(fields):
    with pytest.raises(ConfigError):
        build_run_config(fields)


@pytest.mark.parametrize("name", ["sphere_sigma1.toml", "warped_ode.toml", "de_sitter.toml",
                                  "refine_bianchi.toml"])
def test_shipped_configs_load(name):
    cfg = load_run_config(CONFIGS / name)
    assert cfg.model


def test_sections_map_onto_fields():
    cfg = load_run_config(CONFIGS / "sphere_sigma1.toml")
    assert cfg.model == "sphere:n=3,r=1"
    assert cfg.kid == "obata:i=4,c=1"
    assert cfg.systems == ["sigma1", "sigma2"]
    refine = load_run_config(CONFIGS / "refine_bianchi.toml")
    assert refine.refine.suite == "bianchi"
    assert refine.refine.sample_counts == [20, 40, 80]


def test_overrides_win_and_none_is_ignored():
    cfg = load_run_config(CONFIGS / "de_sitter.toml",
                          {"samples": 30, "seed": None, "tolerances": {"einstein": 1e-6, "sigma": None}})
    assert cfg.samples == 30
    assert cfg.seed == 7
    assert cfg.tolerances.einstein == 1e-6
    assert cfg.tolerances.sigma is None


def test_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(tmp_path / "missing.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("[run\ncommand = 1\n")
    with pytest.raises(ConfigError, match="not valid TOML"):
        load_run_config(broken)
    extra = tmp_path / "extra.toml"
    extra.write_text("[plot]\ncolour = 'red'\n")
    with pytest.raises(ConfigError, match="unknown config section"):
        load_run_config(extra)
