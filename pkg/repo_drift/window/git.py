"""Thin wrapper around the git binary for commit-window capture."""
import json
import logging
import os
import subprocess
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..constants import DEFAULT_CODE_GLOBS, DEFAULT_WORKERS, DIFF_CONTEXT_LINES
from ..exceptions import GitCommandError, WindowError
from ..utils import atomic_write_text, split_lines
from .manifest import ChangeEntry
from .name_status import parse_name_status

_LOGGER = logging.getLogger(__name__)

NAME_STATUS_FILE = "name_status.txt"
PATCH_DIR = "patches"
INVOCATIONS_FILE = "invocations.json"
WINDOW_FILE = "window.json"


@dataclass(frozen=True)
class GitInvocation:
    command: Tuple[str, ...]
    returncode: int

    def to_dict(self) -> Dict:
        return {"command": list(self.command), "returncode": self.returncode}


class GitRunner:
    """Runs git commands inside one repository and records every invocation."""

    def __init__(self, repo_root: str):
        """Initialize runner.

        Args:
            repo_root: Path inside the git working tree.
        """
        self.repo_root = repo_root
        self._invocations: List[GitInvocation] = []
        self._lock = threading.Lock()

    @property
    def invocations(self) -> List[GitInvocation]:
        with self._lock:
            return list(self._invocations)

    def run(self, *args: str, errors: str = "surrogateescape") -> str:
        """Run `git <args>` and return stdout; nonzero exit raises GitCommandError."""
        command = ["git", "-C", self.repo_root, "-c", "core.quotepath=false", *args]
        try:
            completed = subprocess.run(command, capture_output=True, check=False)
        except FileNotFoundError as e:
            raise WindowError("git executable not found") from e

        with self._lock:
            self._invocations.append(GitInvocation(tuple(command), completed.returncode))
        _LOGGER.debug("git %s -> %d", " ".join(args), completed.returncode)

        if completed.returncode != 0:
            stderr = completed.stderr.decode("utf-8", errors="replace")
            raise GitCommandError(command, completed.returncode, stderr)
        return completed.stdout.decode("utf-8", errors=errors)

    def toplevel(self) -> str:
        if not os.path.isdir(self.repo_root):
            raise WindowError(f"repository not found: {self.repo_root}")
        try:
            return self.run("rev-parse", "--show-toplevel").strip()
        except GitCommandError as e:
            raise WindowError(f"not a git repository: {self.repo_root}") from e

    def rev_parse(self, ref: str) -> str:
        try:
            return self.run("rev-parse", "--verify", "--quiet", f"{ref}^{{commit}}").strip()
        except GitCommandError as e:
            raise WindowError(f"cannot resolve revision {ref!r}") from e

    def name_status(self, base: str, head: str, diff_filter: str, globs: Sequence[str]) -> str:
        return self.run(
            "diff", "--name-status", "-M", f"--diff-filter={diff_filter}",
            f"{base}..{head}", "--", *globs,
        )

    def diff_file(self, base: str, head: str, entry: ChangeEntry) -> str:
        """Unified diff of one entry (both sides of a rename in the pathspec)."""
        return self.run(
            "diff", f"-U{DIFF_CONTEXT_LINES}", "--diff-algorithm=histogram", "--minimal",
            "--ignore-space-at-eol", "-M", "--no-color", "--no-ext-diff",
            f"{base}..{head}", "--", *entry.touched_paths,
            errors="replace",
        )

    def read_file_at(self, ref: str, path: str) -> str:
        return self.run("show", f"{ref}:{path}", errors="replace")

    def list_tree(self, ref: str) -> str:
        return self.run("ls-tree", "-r", "--name-only", ref)


@dataclass(frozen=True)
class WindowRef:
    """A commit window X -> Y inside one repository."""

    repo_root: str
    base_ref: str
    head_ref: str
    path_globs: Tuple[str, ...] = tuple(DEFAULT_CODE_GLOBS)

    def __post_init__(self):
        if not self.path_globs:
            raise WindowError("path_globs must not be empty")


@dataclass
class WindowCapture:
    """Raw git output of a window: name-status text plus per-file patches."""

    base: str
    head: str
    name_status: str = ""
    patches: Dict[str, str] = field(default_factory=dict)
    invocations: List[GitInvocation] = field(default_factory=list)

    def entries(self) -> List[ChangeEntry]:
        return parse_name_status(self.name_status)

    def diff_for(self, path: str) -> str:
        if path not in self.patches:
            raise WindowError(f"no captured patch for {path}")
        return self.patches[path]

    def save(self, directory: str, meta: Optional[Dict[str, Any]] = None):
        """Write the capture as an offline directory; meta lands in window.json."""
        atomic_write_text(os.path.join(directory, NAME_STATUS_FILE), self.name_status)
        for path, text in sorted(self.patches.items()):
            atomic_write_text(os.path.join(directory, PATCH_DIR, f"{path}.patch"), text)
        atomic_write_text(
            os.path.join(directory, INVOCATIONS_FILE),
            json.dumps([i.to_dict() for i in self.invocations], indent=2) + "\n",
        )
        window = {"base": self.base, "head": self.head}
        if meta:
            window["meta"] = meta
        atomic_write_text(
            os.path.join(directory, WINDOW_FILE),
            json.dumps(window, indent=2) + "\n",
        )
        _LOGGER.info("Saved window capture (%d patches) to %s", len(self.patches), directory)

    @classmethod
    def load(cls, directory: str, base: Optional[str] = None, head: Optional[str] = None) -> "WindowCapture":
        """Load a pre-captured window; base/head default to window.json."""
        status_file = os.path.join(directory, NAME_STATUS_FILE)
        if not os.path.isfile(status_file):
            raise WindowError(f"offline capture has no {NAME_STATUS_FILE}: {directory}")
        with open(status_file, "r", encoding="utf-8", errors="surrogateescape") as f:
            name_status = f.read()

        window_file = os.path.join(directory, WINDOW_FILE)
        if os.path.isfile(window_file):
            with open(window_file, "r", encoding="utf-8") as f:
                stored = json.load(f)
            base = base or stored.get("base")
            head = head or stored.get("head")
        if not base or not head:
            raise WindowError("offline capture needs base and head revisions")

        patches: Dict[str, str] = {}
        patch_root = os.path.join(directory, PATCH_DIR)
        for dirpath, _, filenames in os.walk(patch_root):
            for filename in filenames:
                if not filename.endswith(".patch"):
                    continue
                full = os.path.join(dirpath, filename)
                rel = os.path.relpath(full, patch_root).replace(os.sep, "/")[: -len(".patch")]
                with open(full, "r", encoding="utf-8", errors="replace", newline="") as f:
                    patches[rel] = f.read()

        _LOGGER.debug("Loaded offline capture from %s (%d patches)", directory, len(patches))
        return cls(base=base, head=head, name_status=name_status, patches=patches)


def capture_window(
    window: WindowRef,
    include_deletes: bool = False,
    workers: int = DEFAULT_WORKERS,
    with_patches: bool = True,
) -> WindowCapture:
    """Capture name-status and per-file unified diffs for a window.

    Runs the ACMR pass (rename detection on) and, when requested, a separate
    D pass. Per-file diffs run on a bounded thread pool.
    """
    runner = GitRunner(window.repo_root)
    _, base, head = _resolve(runner, window.base_ref, window.head_ref)

    if base == head:
        _LOGGER.info("Empty window: %s and %s resolve to %s", window.base_ref, window.head_ref, base)
        return WindowCapture(base=base, head=head, invocations=runner.invocations)

    text = runner.name_status(base, head, "ACMR", window.path_globs)
    if include_deletes:
        text += runner.name_status(base, head, "D", window.path_globs)

    patches: Dict[str, str] = {}
    if with_patches:
        entries = parse_name_status(text)
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            results = pool.map(lambda entry: (entry.path, runner.diff_file(base, head, entry)), entries)
            for path, diff_text in results:
                patches[path] = diff_text

    capture = WindowCapture(
        base=base, head=head, name_status=text, patches=patches, invocations=runner.invocations
    )
    _LOGGER.info("Captured window %s..%s: %d patches", base[:12], head[:12], len(patches))
    return capture


def extract_diff(
    window: WindowRef,
    path: str,
    changes: Sequence[ChangeEntry],
    capture: Optional[WindowCapture] = None,
) -> str:
    """Return the unified diff of one changed path, live or from a capture."""
    entry = next((c for c in changes if path in c.touched_paths), None)
    if entry is None:
        raise WindowError(f"{path} is not part of the window")

    if capture is not None:
        return capture.diff_for(entry.path)

    runner = GitRunner(window.repo_root)
    base = runner.rev_parse(window.base_ref)
    head = runner.rev_parse(window.head_ref)
    return runner.diff_file(base, head, entry)


def _resolve(runner: GitRunner, base_ref: str, head_ref: str) -> Tuple[str, str, str]:
    root = runner.toplevel()
    return root, runner.rev_parse(base_ref), runner.rev_parse(head_ref)


def resolve_range(repo_root: str, base_ref: str, head_ref: str) -> Tuple[str, str, str]:
    """Resolve the repo toplevel and both refs to commit SHAs."""
    return _resolve(GitRunner(repo_root), base_ref, head_ref)


def read_file_at(repo_root: str, ref: str, path: str) -> str:
    """File content at a revision (`git show <ref>:<path>`)."""
    return GitRunner(repo_root).read_file_at(ref, path)


def list_tree(repo_root: str, ref: str) -> List[str]:
    """Tracked paths of a revision."""
    return [line for line in split_lines(GitRunner(repo_root).list_tree(ref)) if line]
