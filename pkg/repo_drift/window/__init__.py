"""Commit-window capture and the change manifest."""
from .git import (
    GitRunner,
    WindowCapture,
    WindowRef,
    capture_window,
    extract_diff,
    list_tree,
    read_file_at,
    resolve_range,
)
from .manifest import BUNDLE_KEYS, ChangeEntry, ChangeManifest, build_manifest
from .name_status import parse_name_status, unquote_git_path

__all__ = [
    "BUNDLE_KEYS",
    "ChangeEntry",
    "ChangeManifest",
    "GitRunner",
    "WindowCapture",
    "WindowRef",
    "build_manifest",
    "capture_window",
    "extract_diff",
    "list_tree",
    "parse_name_status",
    "read_file_at",
    "resolve_range",
    "unquote_git_path",
]
