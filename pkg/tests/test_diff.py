"""Tests for diff parsing, truncation and symbol extraction."""
import pytest

from repo_drift.constants import FORMATTING_ONLY_STATEMENT, STATUS_MODIFIED, TRUNCATION_MARKER
from repo_drift.delta.diff import parse_unified_diff, truncate_diff
from repo_drift.delta.summarizer import heuristic_summary
from repo_drift.delta.symbols import (
    LineSyntax,
    backticked_symbols,
    canonical_line,
    extract_symbols,
    is_formatting_only,
    line_syntax,
    top_level_symbols,
)
from repo_drift.exceptions import DiffParseError

from .conftest import ADDED_DIFF, DELETED_DIFF, MODIFIED_DIFF, QUOTE_ONLY_DIFF, RENAME_ONLY_DIFF


class TestTruncateDiff:
    """Test line-boundary truncation."""

    def test_short_text_untouched(self):
        """Test text within the cap is returned as is."""
        assert truncate_diff("a\nb\n", 100) == "a\nb\n"

    def test_cuts_at_line_boundary(self):
        """Test the cut lands after the last complete line."""
        text = "line one\nline two\nline three\n"
        out = truncate_diff(text, 15)
        assert out == "line one\n" + TRUNCATION_MARKER

    def test_idempotent(self):
        """Test truncating twice at the same cap is stable."""
        text = "".join(f"+line {i}\n" for i in range(200))
        once = truncate_diff(text, 120)
        assert truncate_diff(once, 120) == once
        assert once.endswith(TRUNCATION_MARKER)

    def test_no_newline_in_window(self):
        """Test a single long line collapses to the marker."""
        assert truncate_diff("x" * 50, 10) == TRUNCATION_MARKER

    def test_invalid_cap(self):
        """Test a non-positive cap is rejected."""
        with pytest.raises(ValueError):
            truncate_diff("abc", 0)


class TestParseUnifiedDiff:
    """Test hunk parsing."""

    def test_modified(self):
        """Test a modified file with one hunk."""
        diff = parse_unified_diff(MODIFIED_DIFF)
        assert diff.path == "examples/tutorial/flaskr/db.py"
        assert diff.old_path is None
        assert len(diff.hunks) == 1
        hunk = diff.hunks[0]
        assert (hunk.old_start, hunk.old_count, hunk.new_start, hunk.new_count) == (10, 3, 10, 4)
        assert hunk.context_header == "def init_db():"
        assert diff.added_count == 2
        assert diff.removed_count == 1
        assert not diff.truncated

    def test_rename_only(self):
        """Test a pure rename has no hunks."""
        diff = parse_unified_diff(RENAME_ONLY_DIFF)
        assert diff.is_rename
        assert diff.old_path == "flask/app.py"
        assert diff.path == "src/flask/app.py"
        assert diff.similarity == 100
        assert diff.hunks == ()

    def test_deleted(self):
        """Test deleted files keep their path."""
        diff = parse_unified_diff(DELETED_DIFF)
        assert diff.deleted_file
        assert diff.path == "flask/__init__.py"
        assert diff.old_path is None
        assert diff.removed_count == 2

    def test_added(self):
        """Test added files."""
        diff = parse_unified_diff(ADDED_DIFF)
        assert diff.new_file
        assert diff.path == "tests/test_converters.py"
        assert diff.added_count == 3

    def test_empty(self):
        """Test empty input parses to an empty diff."""
        diff = parse_unified_diff("")
        assert diff.hunks == ()
        assert diff.path is None

    def test_truncated_tolerates_partial_hunk(self):
        """Test a marker after an incomplete hunk is accepted."""
        text = MODIFIED_DIFF.splitlines(keepends=True)
        partial = "".join(text[:-2]) + TRUNCATION_MARKER
        diff = parse_unified_diff(partial)
        assert diff.truncated
        assert diff.added_count == 1

    def test_short_hunk_raises(self):
        """Test a hunk with fewer lines than declared fails without the marker."""
        text = "".join(MODIFIED_DIFF.splitlines(keepends=True)[:-2])
        with pytest.raises(DiffParseError) as err:
            parse_unified_diff(text)
        assert err.value.hunk_index == 0

    def test_long_hunk_raises(self):
        """Test extra lines beyond the header count fail."""
        with pytest.raises(DiffParseError):
            parse_unified_diff(MODIFIED_DIFF + "+    extra()\n")

    def test_malformed_header(self):
        """Test a broken @@ header fails."""
        with pytest.raises(DiffParseError):
            parse_unified_diff("diff --git a/x.py b/x.py\n@@ nonsense @@\n")


class TestSymbols:
    """Test symbol extraction and formatting-only detection."""

    def test_context_header_symbol(self):
        """Test the hunk header definition is found."""
        assert extract_symbols(parse_unified_diff(MODIFIED_DIFF)) == ["init_db"]

    def test_changed_line_symbols(self):
        """Test definitions on changed lines are found after header ones."""
        assert extract_symbols(parse_unified_diff(ADDED_DIFF)) == ["test_custom_converters"]

    def test_top_level(self):
        """Test only column-0 definitions count."""
        content = "def outer():\n    def inner():\n        pass\nclass Thing:\n    pass\nasync def run():\n    pass\n"
        assert top_level_symbols(content) == ["outer", "Thing", "run"]

    def test_backticked(self):
        """Test backticked names are read from summary text."""
        assert backticked_symbols("Touches `a`, `b` and `a`.") == ["a", "b"]

    @pytest.mark.parametrize(
        "left, right, path",
        [
            ("x = 'a'", 'x = "a"', "db.py"),
            ("x=1  # note", "x = 1", "db.py"),
            ("call(a,  b)", "call(a, b)", "db.py"),
            ("int y = 2; // trailing", "int y = 2;", "main.c"),
            ("a = 1; /* note */", "a = 1;", "app.ts"),
            ("color: red; /* brand */", "color: red;", "site.css"),
            ("        return db", "    return db", "db.py"),
        ],
    )
    def test_canonical_equal(self, left, right, path):
        """Test formatting differences vanish."""
        assert canonical_line(left, path) == canonical_line(right, path)

    @pytest.mark.parametrize(
        "left, right, path",
        [
            ("    return n // 2", "    return n // 4", "calc.py"),
            ("#[derive(Debug)]", "#[derive(Clone, Copy)]", "lib.rs"),
            ("color: #ffffff;", "color: #000000;", "site.css"),
            ("#!/usr/bin/env python", "#!/usr/bin/env python3", "run.py"),
            ("#include <a.h>", "#include <b.h>", "main.c"),
            ("return a", "returna", "db.py"),
            ("let c = 'x';", 'let c = "x";', "lib.rs"),
            ('s = "a # b"', 's = "a"', "db.py"),
            ("x = 1 # note", "x = 1 # other", "notes.txt"),
        ],
    )
    def test_canonical_differs(self, left, right, path):
        """Test code changes survive canonicalization for each file type."""
        assert canonical_line(left, path) != canonical_line(right, path)

    def test_canonical_whitespace_separator(self):
        """Test whitespace becomes one space between identifiers and vanishes elsewhere."""
        assert canonical_line("  return   n  //  2", "calc.py") == "return n//2"
        assert canonical_line("x = 'a b'", "db.py") == 'x="a b"'

    def test_line_syntax(self):
        """Test comment rules follow the file extension."""
        assert line_syntax("src/app.py").hash_comments
        assert not line_syntax("src/app.py").slash_comments
        assert line_syntax("src/lib.rs") == LineSyntax(False, True, True, False)
        assert line_syntax("web/site.css") == LineSyntax(False, False, True, False)
        assert line_syntax("Makefile").hash_comments
        assert line_syntax(None) == LineSyntax()

    def test_formatting_only(self):
        """Test quote-only changes are formatting-only and real edits are not."""
        assert is_formatting_only(parse_unified_diff(QUOTE_ONLY_DIFF))
        assert not is_formatting_only(parse_unified_diff(MODIFIED_DIFF))
        assert not is_formatting_only(parse_unified_diff(RENAME_ONLY_DIFF))

    @pytest.mark.parametrize(
        "path, removed, added",
        [
            ("calc.py", "    return n // 2", "    return n // 4"),
            ("src/lib.rs", "#[derive(Debug)]", "#[derive(Clone, Copy)]"),
            ("web/site.css", "  color: #ffffff;", "  color: #000000;"),
        ],
    )
    def test_code_edit_not_formatting_only(self, path, removed, added):
        """Test edits that look like comments in another language are real changes."""
        diff = parse_unified_diff(_one_line_diff(path, removed, added))
        assert not is_formatting_only(diff)
        summary = heuristic_summary(path, STATUS_MODIFIED, diff)
        assert not summary.formatting_only
        assert not summary.text.startswith(FORMATTING_ONLY_STATEMENT)

    def test_rewrap_is_formatting_only(self):
        """Test a call split over two lines still counts as formatting."""
        text = (
            "diff --git a/db.py b/db.py\n"
            "--- a/db.py\n"
            "+++ b/db.py\n"
            "@@ -1,1 +1,2 @@\n"
            "-connect(path, timeout=5)\n"
            "+connect(path,\n"
            "+        timeout=5)  # keep short\n"
        )
        assert is_formatting_only(parse_unified_diff(text))

    def test_reindent_is_formatting_only(self):
        """Test re-indenting a block is formatting-only."""
        text = (
            "diff --git a/db.py b/db.py\n"
            "--- a/db.py\n"
            "+++ b/db.py\n"
            "@@ -1,2 +1,2 @@\n"
            "-  if ready:\n"
            "-    run()\n"
            "+    if ready:\n"
            "+        run()\n"
        )
        assert is_formatting_only(parse_unified_diff(text))


def _one_line_diff(path, removed, added):
    return (
        f"diff --git a/{path} b/{path}\n"
        f"--- a/{path}\n"
        f"+++ b/{path}\n"
        "@@ -1,2 +1,2 @@\n"
        f"-{removed}\n"
        f"+{added}\n"
        " x = 1\n"
    )


@pytest.mark.parametrize("char", ["\x0c", "\x1c", "\x1d", "\x1e", "\x85", "\u2028", "\u2029"])
def test_content_with_unicode_line_separators(char):
    """Test characters str.splitlines breaks on stay inside their diff line."""
    diff = parse_unified_diff(_one_line_diff("sep.py", "SEP = 'a'", f"SEP = '{char}'"))
    (hunk,) = diff.hunks
    assert hunk.added_lines == [f"SEP = '{char}'"]
    assert diff.added_count == 1
    assert diff.removed_count == 1
