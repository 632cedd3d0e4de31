"""Change entries and the per-window change manifest (bundle JSON)."""
import json
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Mapping, Optional, Set, Tuple

from ..alias.alias_map import AliasMap, build_alias_map
from ..alias.paths import normalize_path
from ..constants import (
    STATUS_ADDED,
    STATUS_DELETED,
    STATUS_MODIFIED,
    STATUS_RENAMED,
)
from ..exceptions import ManifestError

_LOGGER = logging.getLogger(__name__)

_STATUS_CODE_RE = re.compile(r"^(?:([AMD])|R(\d{1,3}))$")

BUNDLE_KEYS = ("base", "head", "changes", "alias_map", "adds", "mods", "deletes", "renames")


@dataclass(frozen=True)
class ChangeEntry:
    """One touched path of a window.

    For A/M, path is the Y-side path; for D it is the deleted X-side path.
    Renames carry old_path/new_path/rename_score and use new_path as path.
    """

    status: str
    path: str
    rename_score: Optional[int] = None
    old_path: Optional[str] = None
    new_path: Optional[str] = None
    summary: Optional[str] = None

    def __post_init__(self):
        if self.status not in (STATUS_ADDED, STATUS_MODIFIED, STATUS_DELETED, STATUS_RENAMED):
            raise ManifestError(f"unknown change status {self.status!r}")
        if self.status == STATUS_RENAMED:
            if self.old_path is None or self.new_path is None or self.rename_score is None:
                raise ManifestError("rename entries need old_path, new_path and rename_score")
            if self.old_path == self.new_path:
                raise ManifestError(f"rename of {self.old_path!r} onto itself")
            if self.path != self.new_path:
                raise ManifestError("rename entries use new_path as their path")
            if not 0 <= self.rename_score <= 100:
                raise ManifestError(f"rename score {self.rename_score} outside 0-100")
        elif self.rename_score is not None or self.old_path is not None or self.new_path is not None:
            raise ManifestError(f"{self.status} entry for {self.path!r} carries rename fields")

    @classmethod
    def added(cls, path: str) -> "ChangeEntry":
        return cls(STATUS_ADDED, path)

    @classmethod
    def modified(cls, path: str) -> "ChangeEntry":
        return cls(STATUS_MODIFIED, path)

    @classmethod
    def deleted(cls, path: str) -> "ChangeEntry":
        return cls(STATUS_DELETED, path)

    @classmethod
    def renamed(cls, old_path: str, new_path: str, score: int) -> "ChangeEntry":
        return cls(STATUS_RENAMED, new_path, rename_score=score, old_path=old_path, new_path=new_path)

    @property
    def status_code(self) -> str:
        """Git's literal status code, e.g. "M" or "R085"."""
        if self.status == STATUS_RENAMED:
            return f"R{self.rename_score:03d}"
        return self.status

    @property
    def touched_paths(self) -> Tuple[str, ...]:
        if self.status == STATUS_RENAMED:
            return (self.old_path, self.new_path)
        return (self.path,)

    def sort_key(self) -> Tuple[str, str, str]:
        return (self.path, self.status_code, self.old_path or "")

    def with_summary(self, summary: Optional[str]) -> "ChangeEntry":
        return replace(self, summary=summary)

    def without_summary(self) -> "ChangeEntry":
        return replace(self, summary=None)

    def to_dict(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"status": self.status_code}
        if self.status == STATUS_RENAMED:
            record["old_path"] = self.old_path
            record["new_path"] = self.new_path
        else:
            record["path"] = self.path
        if self.summary is not None:
            record["summary"] = self.summary
        return record

    @classmethod
    def from_dict(cls, record: Mapping[str, Any]) -> "ChangeEntry":
        code = record.get("status")
        match = _STATUS_CODE_RE.match(code) if isinstance(code, str) else None
        if not match:
            raise ManifestError(f"invalid status code {code!r} in bundle")
        summary = record.get("summary")
        if match.group(1):
            path = _checked_path(record.get("path"))
            return cls(match.group(1), path, summary=summary)
        return cls(
            STATUS_RENAMED,
            _checked_path(record.get("new_path")),
            rename_score=int(match.group(2)),
            old_path=_checked_path(record.get("old_path")),
            new_path=_checked_path(record.get("new_path")),
            summary=summary,
        )


def _checked_path(raw: Any) -> str:
    path = normalize_path(raw)
    if path is None or path != raw:
        raise ManifestError(f"bundle path {raw!r} is not normalized")
    return path


@dataclass(frozen=True)
class ChangeManifest:
    """The per-window bundle: SHAs, change entries and the alias map."""

    base: str
    head: str
    changes: Tuple[ChangeEntry, ...] = ()
    alias_map: AliasMap = field(default_factory=AliasMap)

    @property
    def adds(self) -> List[str]:
        return [c.path for c in self.changes if c.status == STATUS_ADDED]

    @property
    def mods(self) -> List[str]:
        return [c.path for c in self.changes if c.status == STATUS_MODIFIED]

    @property
    def deletes(self) -> List[str]:
        return [c.path for c in self.changes if c.status == STATUS_DELETED]

    @property
    def renames(self) -> List[Dict[str, str]]:
        return [
            {"old": c.old_path, "new": c.new_path, "score": c.status_code}
            for c in self.changes
            if c.status == STATUS_RENAMED
        ]

    def modified_or_added(self) -> Set[str]:
        """Y-side paths marked M or A (the NEW slice universe)."""
        return set(self.adds) | set(self.mods)

    def changed_paths(self) -> Set[str]:
        """Every path touched by the window, rename olds and news included."""
        changed: Set[str] = set()
        for change in self.changes:
            changed.update(change.touched_paths)
        return changed

    def entry_for(self, path: str) -> Optional[ChangeEntry]:
        for change in self.changes:
            if path in change.touched_paths:
                return change
        return None

    def with_summaries(self, summaries: Mapping[str, str]) -> "ChangeManifest":
        """Attach summaries keyed by each entry's current-side path."""
        changes = tuple(
            c.with_summary(summaries[c.path]) if c.path in summaries else c
            for c in self.changes
        )
        return replace(self, changes=changes)

    def summaries(self) -> Dict[str, str]:
        return {c.path: c.summary for c in self.changes if c.summary is not None}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base,
            "head": self.head,
            "changes": [c.to_dict() for c in self.changes],
            "alias_map": self.alias_map.to_dict(),
            "adds": self.adds,
            "mods": self.mods,
            "deletes": self.deletes,
            "renames": self.renames,
        }

    def to_json(self, meta: Optional[Mapping[str, Any]] = None) -> str:
        data = self.to_dict()
        if meta is not None:
            data["meta"] = dict(meta)
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ChangeManifest":
        """Load a bundle, checking that the projections agree with the changes."""
        missing = [key for key in BUNDLE_KEYS if key not in data]
        if missing:
            raise ManifestError(f"bundle is missing keys: {', '.join(missing)}")

        entries = [ChangeEntry.from_dict(record) for record in data["changes"]]
        manifest = build_manifest(entries, data["base"], data["head"])

        stored_alias = AliasMap.from_dict(data["alias_map"])
        if stored_alias != manifest.alias_map:
            raise ManifestError("bundle alias_map disagrees with its changes")
        for key in ("adds", "mods", "deletes", "renames"):
            if list(data[key]) != getattr(manifest, key):
                raise ManifestError(f"bundle {key} list disagrees with its changes")
        return manifest

    @classmethod
    def from_json(cls, text: str) -> "ChangeManifest":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ManifestError(f"bundle is not valid JSON: {e.msg}") from e
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "ChangeManifest":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_json(f.read())


def build_manifest(entries: Iterable[ChangeEntry], base: str, head: str) -> ChangeManifest:
    """Build a manifest from parsed entries.

    Identical duplicates collapse; two different entries touching the same
    path (other than renames sharing a target) raise ManifestError.
    """
    by_path: Dict[str, ChangeEntry] = {}
    renames: Dict[Tuple[str, str], ChangeEntry] = {}

    for entry in entries:
        if entry.status == STATUS_RENAMED:
            key = (entry.old_path, entry.new_path)
            previous = renames.get(key)
            if previous is not None and previous.without_summary() != entry.without_summary():
                raise ManifestError(f"conflicting rename entries for {entry.old_path}")
            if previous is None or entry.summary is not None:
                renames[key] = entry
            continue

        previous = by_path.get(entry.path)
        if previous is not None and previous.without_summary() != entry.without_summary():
            raise ManifestError(
                f"conflicting entries for {entry.path}: {previous.status_code} and {entry.status_code}"
            )
        if previous is None or entry.summary is not None:
            by_path[entry.path] = entry

    for rename in renames.values():
        for path in rename.touched_paths:
            if path in by_path:
                raise ManifestError(
                    f"conflicting entries for {path}: {by_path[path].status_code} and {rename.status_code}"
                )

    changes = sorted(list(by_path.values()) + list(renames.values()), key=ChangeEntry.sort_key)
    alias = build_alias_map(changes)

    _LOGGER.debug("Built manifest %s..%s with %d changes", base, head, len(changes))
    return ChangeManifest(base=base, head=head, changes=tuple(changes), alias_map=alias)
