"""Run configuration: TOML file loading, click default maps and artifact provenance."""
import logging
import os
import tomllib
from typing import Any, Dict, Iterable, Mapping, Optional

from .constants import VERSION
from .exceptions import ConfigError
from .schemas import RUN_CONFIG_SCHEMA, SUBCOMMANDS, validate
from .utils import content_hash, file_sha256

_LOGGER = logging.getLogger(__name__)


def _option_key(key: str) -> str:
    return key.replace("-", "_")


def load_run_config(path: Optional[str]) -> Dict[str, Any]:
    """Read and validate a TOML run config; no path means an empty config."""
    if not path:
        return {}
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config {path} is not valid TOML: {e}") from e

    config = validate(RUN_CONFIG_SCHEMA, raw, f"config {path}")
    _LOGGER.debug("Loaded run config from %s", path)
    return config


def default_map(
    config: Mapping[str, Any], option_names: Optional[Mapping[str, Mapping[str, str]]] = None
) -> Dict[str, Any]:
    """Turn a run config into a click default_map; explicit flags still win.

    option_names maps a command name ("" for the top-level group) to
    {flag name: parameter name} for options stored under another name,
    e.g. `format` -> `fmt`.
    """
    option_names = option_names or {}

    def param(scope: str, name: str) -> str:
        key = _option_key(name)
        return option_names.get(scope, {}).get(key, key)

    defaults: Dict[str, Any] = {}
    for key, value in config.items():
        if key in SUBCOMMANDS:
            defaults[key] = {param(key, name): item for name, item in value.items()}
        else:
            defaults[param("", key)] = value
    return defaults


def config_hash(config: Mapping[str, Any]) -> str:
    """Key-order independent hash of a run config."""
    return content_hash(dict(config))


def artifact_meta(config: Mapping[str, Any], inputs: Iterable[Optional[str]] = ()) -> Dict[str, Any]:
    """Provenance block embedded in every output artifact."""
    hashes = {}
    for path in inputs:
        if path and os.path.isfile(path):
            hashes[path] = file_sha256(path)
    return {
        "tool_version": VERSION,
        "config_hash": config_hash(config),
        "config": dict(config),
        "inputs": dict(sorted(hashes.items())),
    }
