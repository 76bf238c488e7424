import json
from pathlib import Path

import pytest

from src.config.run_config import RunConfig, parse_config
from src.config.settings import LabSettings, load_config
from src.core.exceptions import ConfigError


def test_estimate_config_defaults_unset_noise(settings):
    config = parse_config(
        '{"command":"estimate","noise":{"seed":42,"p_classical":0.1},"trials":10000}',
        settings=settings,
    )
    assert isinstance(config, RunConfig)
    assert config.trials == 10_000
    assert config.noise.p_classical == 0.1
    assert (config.noise.eta_bell, config.noise.sigma_gate, config.noise.q_readout) == (0, 0, 0)
    assert config.noise.active_sites.enabled == ("channel",)
    assert config.resolved_format == "json"


def test_out_of_range_value_names_the_key(settings):
    with pytest.raises(ConfigError) as info:
        parse_config('{"command":"estimate","noise":{"seed":1,"p_classical":1.5}}', settings=settings)
    assert "p_classical" in str(info.value)
    assert info.value.key == "noise.p_classical"


def test_unknown_key_is_rejected(settings):
    with pytest.raises(ConfigError) as info:
        parse_config('{"command":"estimate","noise":{"seed":1,"gamma":0.2}}', settings=settings)
    assert "gamma" in str(info.value)


def test_malformed_json(settings):
    with pytest.raises(ConfigError, match="malformed JSON"):
        parse_config('{"command": "estimate",', settings=settings)


def test_flags_override_file_values(settings):
    config = parse_config(
        '{"command":"estimate","noise":{"seed":1}}',
        [("seed", "2"), ("trials", "50")],
        settings=settings,
    )
    assert config.noise.seed == 2
    assert config.trials == 50


def test_seed_is_required(settings):
    with pytest.raises(ConfigError) as info:
        parse_config('{"command":"estimate"}', settings=settings)
    assert info.value.key == "noise.seed"


def test_trials_default_from_settings(settings):
    config = parse_config('{"command":"estimate","noise":{"seed":3}}', settings=settings)
    assert config.trials == settings.default_trials


def test_sweep_from_flags(settings):
    config = parse_config(
        "",
        [("command", "sweep"), ("seed", "7"), ("param", "p_classical"), ("values", "0,0.1")],
        settings=settings,
    )
    spec = config.sweep_spec()
    assert spec.parameter == "p_classical"
    assert spec.values == (0.0, 0.1)
    assert config.resolved_format == "csv"


def test_sweep_requires_its_section(settings):
    with pytest.raises(ConfigError) as info:
        parse_config('{"command":"sweep","noise":{"seed":1}}', settings=settings)
    assert info.value.key == "sweep"


def test_sweep_values_are_range_checked(settings):
    with pytest.raises(ConfigError, match="sweep.values"):
        parse_config(
            '{"command":"sweep","noise":{"seed":1},"sweep":{"parameter":"q_readout","values":[0.5,2]}}',
            settings=settings,
        )


def test_bad_sweep_values_flag(settings):
    with pytest.raises(ConfigError, match="sweep.values"):
        parse_config('{"command":"sweep","noise":{"seed":1}}', [("values", "0,abc")], settings=settings)


def test_dotted_overrides(settings):
    config = parse_config(
        '{"command":"certify","noise":{"seed":1}}',
        [("noise.eta_bell", "0.3"), ("certify.n_pairs", "40"), ("noise.sites.bell", "true")],
        settings=settings,
    )
    assert config.certify_eta == 0.3
    assert config.certify_pairs == 40
    assert config.noise.active_sites.enabled == ("bell",)


def test_explicit_input_is_normalized(settings):
    config = parse_config(
        json.dumps({"command": "run", "noise": {"seed": 1}, "input": {"a": [3, 0], "b": [0, 4]}}),
        settings=settings,
    )
    state = config.input.to_state()
    assert state.amplitude("0") == pytest.approx(0.6)
    assert state.amplitude("1") == pytest.approx(0.8j)


def test_zero_input_is_rejected(settings):
    with pytest.raises(ConfigError, match="input"):
        parse_config('{"command":"run","noise":{"seed":1},"input":{"a":[0,0],"b":[0,0]}}', settings=settings)


def test_output_settings(settings):
    config = parse_config(
        '{"command":"amplify","noise":{"seed":1}}',
        [("out", "result.json"), ("format", "json")],
        settings=settings,
    )
    assert config.output_path == Path("result.json")
    assert config.resolved_format == "json"


def test_settings_read_from_environment(monkeypatch):
    monkeypatch.setenv("TELEPORT_LAB_DEFAULT_TRIALS", "123")
    monkeypatch.setenv("TELEPORT_LAB_FLOAT_DIGITS", "8")
    loaded = load_config()
    assert isinstance(loaded, LabSettings)
    assert loaded.default_trials == 123
    assert loaded.float_digits == 8
