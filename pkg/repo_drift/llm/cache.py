"""On-disk request/response cache keyed by content hash."""
import json
import logging
import os
from typing import Any, Dict, Optional

from ..utils import atomic_write_text

_LOGGER = logging.getLogger(__name__)


class ResponseCache:
    """Append-only JSON cache; one file per key, written via atomic rename.

    Concurrent writers of the same key race harmlessly: both write the same
    content and the last os.replace wins.
    """

    def __init__(self, directory: str):
        self.directory = directory

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, key[:2], f"{key}.json")

    def get(self, key: str) -> Optional[Dict[str, Any]]:
        path = self._path(key)
        if not os.path.isfile(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                record = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            _LOGGER.warning("Ignoring unreadable cache entry %s: %s", path, e)
            return None
        _LOGGER.debug("Cache hit %s", key[:12])
        return record

    def put(self, key: str, record: Dict[str, Any]):
        atomic_write_text(self._path(key), json.dumps(record, indent=2, ensure_ascii=False) + "\n")

    def __contains__(self, key: str) -> bool:
        return os.path.isfile(self._path(key))
