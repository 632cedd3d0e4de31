"""Diff parsing and delta summaries."""
from .diff import Hunk, UnifiedDiff, parse_unified_diff, truncate_diff
from .summarizer import (
    DeltaSummarizer,
    DeltaSummary,
    count_sentences,
    heuristic_summary,
    summarize,
    summary_from_entry,
)
from .symbols import extract_symbols, is_formatting_only, top_level_symbols

__all__ = [
    "DeltaSummarizer",
    "DeltaSummary",
    "Hunk",
    "UnifiedDiff",
    "count_sentences",
    "extract_symbols",
    "heuristic_summary",
    "is_formatting_only",
    "parse_unified_diff",
    "summarize",
    "summary_from_entry",
    "top_level_symbols",
    "truncate_diff",
]
