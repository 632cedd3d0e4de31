"""Alias map algebra: build, compose and resolve historical paths."""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Optional, Set

from ..constants import DELETED, STATUS_DELETED, STATUS_RENAMED
from ..exceptions import AliasConflictError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Resolution:
    """Outcome of resolving a path through an alias map."""

    KEPT = "kept"
    RENAMED = "renamed"
    DELETED = "deleted"

    kind: str
    path: Optional[str] = None

    @classmethod
    def kept(cls, path: str) -> "Resolution":
        return cls(cls.KEPT, path)

    @classmethod
    def renamed(cls, path: str) -> "Resolution":
        return cls(cls.RENAMED, path)

    @classmethod
    def deleted(cls) -> "Resolution":
        return cls(cls.DELETED, None)


class AliasMap(Mapping[str, str]):
    """Immutable mapping old path -> new path or the DELETED sentinel.

    Invariants checked on construction: no key maps to itself, and no
    non-sentinel value is also a key (chains are collapsed).
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[Mapping[str, str]] = None):
        entries = dict(entries or {})
        for key, value in entries.items():
            if key == value:
                raise AliasConflictError(f"alias maps {key!r} to itself")
            if value != DELETED and value in entries:
                raise AliasConflictError(
                    f"alias target {value!r} (from {key!r}) is itself an alias key"
                )
        self._entries: Dict[str, str] = dict(sorted(entries.items()))

    @classmethod
    def empty(cls) -> "AliasMap":
        return cls()

    @classmethod
    def from_dict(cls, data: Mapping[str, str]) -> "AliasMap":
        for key, value in data.items():
            if not isinstance(key, str) or not isinstance(value, str):
                raise AliasConflictError("alias map entries must be strings")
        return cls(data)

    def __getitem__(self, key: str) -> str:
        return self._entries[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if isinstance(other, AliasMap):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self._entries == dict(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"AliasMap({self._entries!r})"

    @property
    def deleted(self) -> Set[str]:
        """The deleted set D."""
        return {key for key, value in self._entries.items() if value == DELETED}

    @property
    def renames(self) -> Dict[str, str]:
        return {key: value for key, value in self._entries.items() if value != DELETED}

    @property
    def rename_targets(self) -> Set[str]:
        return {value for value in self._entries.values() if value != DELETED}

    def resolve(self, path: str) -> Resolution:
        return resolve(self, path)

    def to_dict(self) -> Dict[str, str]:
        return dict(self._entries)


def build_alias_map(entries: Iterable) -> AliasMap:
    """Build the alias map of one window from its change entries.

    D entries map to the sentinel, R entries map old -> new, A/M add nothing.
    The same old path with two different targets is an error; several old
    paths may share one target.
    """
    mapping: Dict[str, str] = {}

    for entry in entries:
        if entry.status == STATUS_DELETED:
            key, value = entry.path, DELETED
        elif entry.status == STATUS_RENAMED:
            key, value = entry.old_path, entry.new_path
        else:
            continue

        existing = mapping.get(key)
        if existing is not None and existing != value:
            raise AliasConflictError(
                f"ambiguous history for {key!r}: {existing!r} and {value!r}"
            )
        mapping[key] = value

    alias = AliasMap(mapping)
    _LOGGER.debug(
        "Built alias map: %d renames, %d deletes", len(alias.renames), len(alias.deleted)
    )
    return alias


def resolve(alias: Mapping[str, str], path: str) -> Resolution:
    """Look path up once; paths outside the domain are kept as they are."""
    if path not in alias:
        return Resolution.kept(path)
    target = alias[path]
    if target == DELETED:
        return Resolution.deleted()
    return Resolution.renamed(target)


def _follow(alias: Mapping[str, str], path: str) -> str:
    if path == DELETED:
        return DELETED
    return alias.get(path, path)


def compose(first: Mapping[str, str], second: Mapping[str, str]) -> AliasMap:
    """Compose the alias map of X->Y with the one of Y->Z into X->Z.

    Deletion dominates: a path deleted in either window stays deleted. Keys of
    the second map are carried over unless the first already maps them.
    Paths that come back to life at Z (a key that is also a live target) are
    dropped from the domain.
    """
    result: Dict[str, str] = {}

    for key, value in first.items():
        result[key] = _follow(second, value)

    for key, value in second.items():
        if key not in result:
            result[key] = value

    result = {key: value for key, value in result.items() if key != value}

    live_targets = {value for value in result.values() if value != DELETED}
    reused = [key for key in result if key in live_targets]
    for key in reused:
        _LOGGER.debug("Path %s is live again after composition; dropping alias", key)
        del result[key]

    return AliasMap(result)
