"""Tests for run configuration and provenance."""
import pytest

from repo_drift.config import artifact_meta, config_hash, default_map, load_run_config
from repo_drift.constants import VERSION
from repo_drift.exceptions import ConfigError


def test_load(tmp_path):
    """Test a TOML config is validated and normalized."""
    path = tmp_path / "run.toml"
    path.write_text('seed = 5\nlog_level = "info"\n\n[eval]\nno-remap = true\n')
    config = load_run_config(str(path))
    assert config == {"seed": 5, "log_level": "INFO", "eval": {"no-remap": True}}


def test_load_empty():
    """Test no path gives an empty config."""
    assert load_run_config(None) == {}


@pytest.mark.parametrize(
    "text",
    [
        "seed = -1\n",
        'log_level = "loud"\n',
        "[unknown]\nx = 1\n",
        "seed = \n",
    ],
)
def test_load_invalid(tmp_path, text):
    """Test bad values, unknown sections and broken TOML are config errors."""
    path = tmp_path / "run.toml"
    path.write_text(text)
    with pytest.raises(ConfigError):
        load_run_config(str(path))


def test_load_missing(tmp_path):
    """Test an unreadable file is a config error."""
    with pytest.raises(ConfigError):
        load_run_config(str(tmp_path / "missing.toml"))


def test_default_map():
    """Test dashes become underscores and renamed options map to their parameter."""
    config = {"seed": 1, "report": {"format": "csv", "base-name": "stale"}, "dataset": {"new": 4}}
    names = {"report": {"format": "fmt"}, "dataset": {"new": "new_count"}}
    assert default_map(config, names) == {
        "seed": 1,
        "report": {"fmt": "csv", "base_name": "stale"},
        "dataset": {"new_count": 4},
    }


def test_artifact_meta(tmp_path):
    """Test provenance hashes existing inputs and skips missing ones."""
    source = tmp_path / "gold.jsonl"
    source.write_text('{"id": "q1"}\n')
    config = {"seed": 0, "eval": {"no_remap": False}}
    meta = artifact_meta(config, [str(source), None, str(tmp_path / "absent.jsonl")])
    assert meta["tool_version"] == VERSION
    assert meta["config_hash"] == config_hash(config)
    assert list(meta["inputs"]) == [str(source)]
    assert len(meta["inputs"][str(source)]) == 64


def test_config_hash_order():
    """Test key order does not change the hash."""
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
