"""voluptuous schemas for JSONL records and configuration files."""
import logging
from typing import Any, Callable, Dict, List, Type

import voluptuous as vol

from .constants import (
    ADAPTER_LEXICAL,
    ADAPTER_REPLAY,
    ADAPTER_SERVICE,
    MODE_BASE,
    MODE_FULL_FILE,
    MODE_GIT_DIFF,
    ORIGIN_NEW,
    ORIGIN_OLD,
)
from .exceptions import ConfigError, DriftError
from .utils import read_jsonl

_LOGGER = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
SUBCOMMANDS = [
    "window", "summarize", "dataset", "icl", "answer", "baseline", "eval", "probe", "report",
]


def _one_prediction_field(record: Dict[str, Any]) -> Dict[str, Any]:
    present = [key for key in ("raw_output", "paths") if key in record]
    if len(present) != 1:
        raise vol.Invalid("prediction needs exactly one of raw_output or paths")
    return record


QUESTION_RECORD_SCHEMA = vol.Schema({
    vol.Required("id"): str,
    vol.Required("question"): str,
}, extra=vol.ALLOW_EXTRA)

GOLD_RECORD_SCHEMA = vol.Schema({
    vol.Required("id"): str,
    vol.Optional("question", default=""): str,
    vol.Required("gold_paths"): [str],
}, extra=vol.ALLOW_EXTRA)

PREDICTION_RECORD_SCHEMA = vol.All(
    vol.Schema({
        vol.Required("id"): str,
        vol.Optional("raw_output"): str,
        vol.Optional("paths"): list,
    }, extra=vol.ALLOW_EXTRA),
    _one_prediction_field,
)

EXAMPLE_RECORD_SCHEMA = vol.Schema({
    vol.Optional("id"): str,
    vol.Required("question"): str,
    vol.Required("relevant_file_paths"): vol.All([str], vol.Length(min=1)),
    vol.Optional("origin", default=ORIGIN_OLD): vol.In([ORIGIN_NEW, ORIGIN_OLD]),
    vol.Optional("mode", default=MODE_BASE): vol.In([MODE_GIT_DIFF, MODE_FULL_FILE, MODE_BASE]),
    vol.Optional("anchor_path"): vol.Any(None, str),
}, extra=vol.ALLOW_EXTRA)

SYNTH_SAMPLE_SCHEMA = vol.Schema({
    vol.Required("question"): vol.All(str, vol.Length(min=1)),
    vol.Required("relevant_file_paths"): [str],
})

SYNTH_REPLY_SCHEMA = vol.Schema({
    vol.Required("samples"): list,
})

PROMPT_RECORD_SCHEMA = vol.Schema({
    vol.Required("id"): str,
    vol.Required("system"): str,
    vol.Required("user"): str,
    vol.Optional("included_paths", default=list): [str],
}, extra=vol.ALLOW_EXTRA)

ADAPTER_CONFIG_SCHEMA = vol.Schema({
    vol.Required("kind"): vol.In([ADAPTER_REPLAY, ADAPTER_SERVICE, ADAPTER_LEXICAL]),
    vol.Optional("endpoint"): vol.Any(None, str),
    vol.Optional("model"): vol.Any(None, str),
    vol.Optional("api_key"): vol.Any(None, str),
    vol.Optional("replay_file"): vol.Any(None, str),
    vol.Optional("cache_dir"): vol.Any(None, str),
    vol.Optional("timeout"): vol.All(int, vol.Range(min=1)),
    vol.Optional("retries"): vol.All(int, vol.Range(min=0)),
    vol.Optional("lexical_top_k"): vol.All(int, vol.Range(min=0)),
    vol.Optional("lexical_min_score"): vol.All(vol.Coerce(float), vol.Range(min=0.0, max=1.0)),
})

RUN_CONFIG_SCHEMA = vol.Schema({
    vol.Optional("seed"): vol.All(int, vol.Range(min=0)),
    vol.Optional("log_level"): vol.All(str, vol.Upper, vol.In(LOG_LEVELS)),
    **{vol.Optional(name): dict for name in SUBCOMMANDS},
})


def validate(schema: Callable, value: Any, what: str, error: Type[DriftError] = ConfigError) -> Any:
    """Run a schema and turn vol.Invalid into the given DriftError subclass."""
    try:
        return schema(value)
    except vol.Invalid as e:
        raise error(f"invalid {what}: {e}") from e


def load_records(path: str, schema: Callable, what: str, error: Type[DriftError]) -> List[Dict[str, Any]]:
    """Read a JSONL file and validate every record."""
    try:
        raw = read_jsonl(path)
    except (OSError, ValueError) as e:
        raise error(f"cannot read {what} from {path}: {e}") from e

    records = []
    for number, record in enumerate(raw, start=1):
        records.append(validate(schema, record, f"{what} record {number} in {path}", error))
    _LOGGER.debug("Loaded %d %s records from %s", len(records), what, path)
    return records
