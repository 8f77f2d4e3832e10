import json
import sys
from pathlib import Path

import pytest

from src.core.interfaces import ConfigError
from src.services.settings import APP_CONFIG, CliConfig, load_config
from src.services.user_config import (
    get_bundled_resource_path, get_default_cache_path, get_settings_file_path,
    get_user_config_directory, load_json_config, load_settings
)
from src.services.validation import ConfigValidator


def write_json(path: Path, data) -> Path:
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def test_bundled_defaults_exist():
    path = get_bundled_resource_path(APP_CONFIG)
    assert path.exists()
    data = load_json_config(path)
    assert data['numerics']['precision_bits'] == 128


def test_bundled_defaults_are_loaded():
    config = load_config()
    assert config.precision_bits == 128
    assert config.z_grid == (0.1, 0.3, 0.5, 0.7, 0.9)
    assert config.cache_path.endswith("constants.mzvcache")
    assert any(source.endswith("app_config.json") for source in config.sources)


def test_priority_order(tmp_path):
    bundled = write_json(tmp_path / "bundled.json", {
        "_comment": "defaults",
        "numerics": {"precision_bits": 128, "guard_bits": 16},
        "verification": {"jobs": 1},
    })
    user = write_json(tmp_path / "user.json", {"numerics": {"precision_bits": 192}})
    config = load_config({'precision_bits': 256, 'jobs': None}, bundled_path=bundled, user_path=user)
    assert config.precision_bits == 256
    assert config.guard_bits == 16
    assert config.jobs == 1
    assert config.sources[-1] == 'command line'

    config = load_config(None, bundled_path=bundled, user_path=user)
    assert config.precision_bits == 192


def test_unknown_setting_is_ignored(tmp_path, caplog):
    user = write_json(tmp_path / "user.json", {"numerics": {"precision": 99}})
    config = load_config(user_path=user)
    assert config.precision_bits == 128
    assert "numerics.precision" in caplog.text


def test_cache_environment_variable(tmp_path, monkeypatch):
    target = tmp_path / "elsewhere.mzvcache"
    monkeypatch.setenv("AKZETA_CACHE", str(target))
    config = load_config()
    assert config.cache_path == str(target)
    assert "AKZETA_CACHE" in config.sources
    assert get_default_cache_path() == target


def test_unknown_override():
    with pytest.raises(ConfigError):
        load_config({'colour': 'blue'})


def test_malformed_z_grid(tmp_path):
    user = write_json(tmp_path / "user.json", {"verification": {"z_grid": ["half"]}})
    with pytest.raises(ConfigError):
        load_config(user_path=user)


def test_user_settings_file_is_read():
    path = get_settings_file_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    write_json(path, {"output": {"format": "json"}})
    assert load_settings() == {"output": {"format": "json"}}
    assert load_config().output_format == 'json'


def test_config_dict_form():
    data = CliConfig(z_grid=(0.5,), sources=('x',)).to_dict()
    assert data['z_grid'] == [0.5]
    assert data['sources'] == ['x']


def test_validator_accepts_defaults(tmp_path):
    assert ConfigValidator().validate(CliConfig(cache_path=str(tmp_path / "c"))) == (True, [])


@pytest.mark.parametrize("changes, message", [
    ({'precision_bits': 32}, "precision_bits must be >= 64"),
    ({'precision_bits': True}, "precision_bits must be an integer"),
    ({'jobs': 0}, "jobs must be >= 1"),
    ({'tolerance_level1': 0}, "tolerance_level1 must be positive"),
    ({'z_grid': ()}, "z_grid cannot be empty"),
    ({'z_grid': (0.5, 0.99)}, "z value 0.99"),
    ({'z_cap': 1.0}, "z_cap must lie in (0, 1)"),
    ({'output_format': 'xml'}, "output_format must be one of"),
    ({'mzv_method': 'euler'}, "mzv_method must be one of"),
    ({'cache_path': None}, "cache_path is required"),
])
def test_validator_errors(changes, message):
    config = CliConfig(**dict({'cache_path': 'constants.mzvcache'}, **changes))
    is_valid, errors = ConfigValidator().validate(config)
    assert not is_valid
    assert any(message in error for error in errors)


@pytest.mark.skipif(sys.platform in ('win32', 'darwin'), reason="XDG layout")
def test_config_directory_follows_xdg(tmp_path):
    assert get_user_config_directory() == tmp_path / "config" / "AKZeta"


def test_json_helpers(tmp_path):
    path = write_json(tmp_path / "data.json", {"a": 1})
    assert load_json_config(path) == {"a": 1}
    assert load_json_config(tmp_path / "missing.json", {"b": 2}) == {"b": 2}
    write_json(tmp_path / "list.json", [1, 2])
    assert load_json_config(tmp_path / "list.json") == {}
