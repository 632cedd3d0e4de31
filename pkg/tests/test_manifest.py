"""Tests for change entries and the bundle manifest."""
import json
import random

import pytest

from repo_drift.constants import DELETED
from repo_drift.exceptions import ManifestError
from repo_drift.window.manifest import ChangeEntry, ChangeManifest, build_manifest
from repo_drift.window.name_status import parse_name_status

from .test_name_status import FLASK_NAME_STATUS


@pytest.fixture
def manifest():
    """Flask window manifest."""
    return build_manifest(parse_name_status(FLASK_NAME_STATUS), "aaa111", "bbb222")


class TestBuildManifest:
    """Test manifest construction."""

    def test_projections(self, manifest):
        """Test the per-status lists and alias map."""
        assert manifest.adds == ["tests/test_converters.py"]
        assert manifest.mods == ["examples/tutorial/flaskr/db.py"]
        assert manifest.deletes == ["flask/__init__.py"]
        assert manifest.renames == [
            {"old": "flask/app.py", "new": "src/flask/app.py", "score": "R100"}
        ]
        assert manifest.alias_map == {
            "flask/app.py": "src/flask/app.py",
            "flask/__init__.py": DELETED,
        }

    def test_sorted_by_path(self, manifest):
        """Test entries are sorted by their current-side path."""
        paths = [c.path for c in manifest.changes]
        assert paths == sorted(paths)

    def test_changed_paths(self, manifest):
        """Test rename olds and news both count as changed."""
        assert manifest.changed_paths() == {
            "examples/tutorial/flaskr/db.py",
            "flask/app.py",
            "src/flask/app.py",
            "flask/__init__.py",
            "tests/test_converters.py",
        }
        assert manifest.modified_or_added() == {
            "examples/tutorial/flaskr/db.py",
            "tests/test_converters.py",
        }

    def test_duplicates_collapse(self):
        """Test identical entries merge."""
        manifest = build_manifest([ChangeEntry.modified("a.py"), ChangeEntry.modified("a.py")], "x", "y")
        assert len(manifest.changes) == 1

    def test_conflicting_entries(self):
        """Test two statuses for one path are rejected."""
        with pytest.raises(ManifestError):
            build_manifest([ChangeEntry.modified("a.py"), ChangeEntry.deleted("a.py")], "x", "y")
        with pytest.raises(ManifestError):
            build_manifest([ChangeEntry.renamed("a.py", "b.py", 90), ChangeEntry.added("b.py")], "x", "y")

    def test_entry_invariants(self):
        """Test malformed entries are rejected."""
        with pytest.raises(ManifestError):
            ChangeEntry("X", "a.py")
        with pytest.raises(ManifestError):
            ChangeEntry.renamed("a.py", "b.py", 120)
        with pytest.raises(ManifestError):
            ChangeEntry("M", "a.py", rename_score=90)


class TestBundleJson:
    """Test bundle serialization."""

    def test_round_trip(self, manifest):
        """Test a bundle survives to_json and from_json."""
        assert ChangeManifest.from_json(manifest.to_json()) == manifest

    def test_sentinel_literal(self, manifest):
        """Test the sentinel is serialized bit-exact."""
        data = json.loads(manifest.to_json())
        assert data["alias_map"]["flask/__init__.py"] == "__DELETED__"
        assert data["changes"][0]["status"] in ("M", "D", "A", "R100")

    def test_meta_tolerated(self, manifest):
        """Test extra keys such as meta are ignored on load."""
        text = manifest.to_json(meta={"tool_version": "0.1.0"})
        assert json.loads(text)["meta"] == {"tool_version": "0.1.0"}
        assert ChangeManifest.from_json(text) == manifest

    def test_summaries_kept(self, manifest):
        """Test attached summaries serialize and reload."""
        summarized = manifest.with_summaries({"src/flask/app.py": "Moved to src layout."})
        reloaded = ChangeManifest.from_json(summarized.to_json())
        assert reloaded.summaries() == {"src/flask/app.py": "Moved to src layout."}

    def test_inconsistent_alias_rejected(self, manifest):
        """Test a tampered alias map fails to load."""
        data = manifest.to_dict()
        data["alias_map"]["flask/app.py"] = "elsewhere/app.py"
        with pytest.raises(ManifestError):
            ChangeManifest.from_dict(data)

    def test_missing_keys(self):
        """Test missing bundle keys are reported."""
        with pytest.raises(ManifestError, match="missing keys"):
            ChangeManifest.from_dict({"base": "x"})

    def test_invalid_json(self):
        """Test a non-JSON bundle raises ManifestError."""
        with pytest.raises(ManifestError):
            ChangeManifest.from_json("{not json")

    def test_unnormalized_path(self, manifest):
        """Test bundle paths must already be normalized."""
        data = manifest.to_dict()
        data["changes"][0]["path"] = "./" + data["changes"][0].get("path", "x.py")
        data["changes"][0].setdefault("status", "M")
        with pytest.raises(ManifestError):
            ChangeManifest.from_dict(data)


def _random_entries(rng, count):
    entries = []
    for i in range(count):
        kind = rng.choice("AMDR")
        path = f"pkg{rng.randint(0, 4)}/mod_{i}.py"
        if kind == "A":
            entries.append(ChangeEntry.added(path))
        elif kind == "M":
            entries.append(ChangeEntry.modified(path))
        elif kind == "D":
            entries.append(ChangeEntry.deleted(path))
        else:
            entries.append(ChangeEntry.renamed(f"old/mod_{i}.py", path, rng.randint(50, 100)))
    rng.shuffle(entries)
    return entries


@pytest.mark.parametrize("seed", range(5))
def test_random_manifest_partition(seed):
    """Test 50 random entries round-trip and land in exactly one projection each."""
    rng = random.Random(seed)
    entries = _random_entries(rng, 50)
    manifest = build_manifest(entries, "base", "head")

    assert ChangeManifest.from_json(manifest.to_json()) == manifest
    assert len(manifest.changes) == 50

    rename_pairs = {(r["old"], r["new"]) for r in manifest.renames}
    for entry in entries:
        hits = [
            entry.path in manifest.adds,
            entry.path in manifest.mods,
            entry.path in manifest.deletes,
            (entry.old_path, entry.new_path) in rename_pairs,
        ]
        assert sum(hits) == 1, entry
    assert len(manifest.adds) + len(manifest.mods) + len(manifest.deletes) + len(rename_pairs) == 50

    for entry in entries:
        if entry.status == "R":
            assert manifest.alias_map[entry.old_path] == entry.new_path
        elif entry.status == "D":
            assert manifest.alias_map[entry.path] == DELETED
        else:
            assert entry.path not in manifest.alias_map
