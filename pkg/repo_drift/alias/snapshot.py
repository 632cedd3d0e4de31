"""Snapshot index: the finite set of paths existing at a snapshot."""
import logging
import os
from typing import Dict, Iterable, Iterator, List, Mapping, Optional

from ..constants import DELETED
from ..utils import split_lines
from .paths import basename, normalize_path

_LOGGER = logging.getLogger(__name__)


class SnapshotIndex:
    """Immutable set of normalized paths at one snapshot (P_Y)."""

    def __init__(self, paths: Iterable[str]):
        normalized = set()
        for raw in paths:
            path = normalize_path(raw)
            if path is None:
                _LOGGER.debug("Skipping invalid snapshot path: %r", raw)
                continue
            normalized.add(path)
        self._paths = frozenset(normalized)
        self._by_basename: Optional[Dict[str, List[str]]] = None

    @classmethod
    def from_listing(cls, text: str) -> "SnapshotIndex":
        """Build from a newline-delimited path listing."""
        return cls(line for line in split_lines(text) if line.strip())

    @classmethod
    def from_tree(cls, root: str) -> "SnapshotIndex":
        """Walk a checked-out tree, skipping the .git directory."""
        paths = []
        for dirpath, dirnames, filenames in os.walk(root):
            dirnames[:] = sorted(d for d in dirnames if d != ".git")
            for filename in filenames:
                full = os.path.join(dirpath, filename)
                paths.append(os.path.relpath(full, root).replace(os.sep, "/"))
        return cls(paths)

    @classmethod
    def from_git(cls, repo_root: str, ref: str) -> "SnapshotIndex":
        """List the tracked paths of a commit."""
        from ..window.git import GitRunner

        return cls.from_listing(GitRunner(repo_root).list_tree(ref))

    @classmethod
    def load(cls, location: str) -> "SnapshotIndex":
        """Load from a directory (walked) or a listing file."""
        if os.path.isdir(location):
            index = cls.from_tree(location)
        else:
            with open(location, "r", encoding="utf-8") as f:
                index = cls.from_listing(f.read())
        _LOGGER.debug("Loaded snapshot index with %d paths from %s", len(index), location)
        return index

    def __contains__(self, path: object) -> bool:
        return path in self._paths

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._paths))

    def __len__(self) -> int:
        return len(self._paths)

    @property
    def paths(self) -> frozenset:
        return self._paths

    def with_basename(self, name: str) -> List[str]:
        """Paths whose last segment equals name."""
        if self._by_basename is None:
            index: Dict[str, List[str]] = {}
            for path in sorted(self._paths):
                index.setdefault(basename(path), []).append(path)
            self._by_basename = index
        return self._by_basename.get(name, [])

    def check_against(self, alias: Mapping[str, str]) -> List[str]:
        """Describe inconsistencies between this snapshot and a window's alias map."""
        problems = []
        for key, value in sorted(alias.items()):
            if value == DELETED and key in self._paths:
                problems.append(f"deleted path {key} exists in snapshot")
            elif value != DELETED and value not in self._paths:
                problems.append(f"rename target {value} (from {key}) missing from snapshot")
        return problems

    def to_listing(self) -> str:
        return "".join(f"{path}\n" for path in sorted(self._paths))
