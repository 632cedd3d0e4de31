"""Path normalization and alias map algebra."""
from .alias_map import AliasMap, Resolution, build_alias_map, compose, resolve
from .paths import normalize_path
from .snapshot import SnapshotIndex

__all__ = [
    "AliasMap",
    "Resolution",
    "SnapshotIndex",
    "build_alias_map",
    "compose",
    "normalize_path",
    "resolve",
]
