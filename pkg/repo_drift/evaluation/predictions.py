"""Lenient parsing of model output under the JSON-array output contract."""
import logging
from typing import Any, Iterable, List

from ..utils import find_json_value

_LOGGER = logging.getLogger(__name__)


def unique_strings(items: Iterable[Any]) -> List[str]:
    """String items only, duplicates collapsed, first occurrence kept."""
    seen = set()
    paths = []
    for item in items:
        if isinstance(item, str) and item not in seen:
            seen.add(item)
            paths.append(item)
    return paths


def parse_prediction(raw: str) -> List[str]:
    """Paths from the first well-formed JSON array in raw; [] when there is none."""
    array = find_json_value(raw or "", list)
    if array is None:
        _LOGGER.debug("No JSON array in model output (%d chars)", len(raw or ""))
        return []
    return unique_strings(array)
