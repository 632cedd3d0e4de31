"""Global fixtures for repo_drift tests."""
import os
import shutil
import subprocess

import pytest

from repo_drift.alias.alias_map import AliasMap
from repo_drift.alias.snapshot import SnapshotIndex
from repo_drift.constants import DELETED

requires_git = pytest.mark.skipif(shutil.which("git") is None, reason="git binary not available")

GIT_ENV = {
    "GIT_AUTHOR_NAME": "Fixture",
    "GIT_AUTHOR_EMAIL": "fixture@example.com",
    "GIT_COMMITTER_NAME": "Fixture",
    "GIT_COMMITTER_EMAIL": "fixture@example.com",
    "GIT_CONFIG_NOSYSTEM": "1",
}

MODIFIED_DIFF = """diff --git a/examples/tutorial/flaskr/db.py b/examples/tutorial/flaskr/db.py
index 1111111..2222222 100644
--- a/examples/tutorial/flaskr/db.py
+++ b/examples/tutorial/flaskr/db.py
@@ -10,3 +10,4 @@ def init_db():
     db = get_db()
-    with current_app.open_resource("schema.sql") as f:
+    with current_app.open_resource("schema.sql", mode="rb") as f:
+        db.executescript(f.read().decode("utf8"))
     return db
"""

QUOTE_ONLY_DIFF = """diff --git a/examples/tutorial/flaskr/db.py b/examples/tutorial/flaskr/db.py
index 1111111..2222222 100644
--- a/examples/tutorial/flaskr/db.py
+++ b/examples/tutorial/flaskr/db.py
@@ -1,3 +1,3 @@
 import sqlite3
-DATABASE = 'flaskr.sqlite'
+DATABASE = "flaskr.sqlite"

"""

RENAME_ONLY_DIFF = """diff --git a/flask/app.py b/src/flask/app.py
similarity index 100%
rename from flask/app.py
rename to src/flask/app.py
"""

DELETED_DIFF = """diff --git a/flask/__init__.py b/flask/__init__.py
deleted file mode 100644
index 3333333..0000000
--- a/flask/__init__.py
+++ /dev/null
@@ -1,2 +0,0 @@
-from .app import Flask
-from .globals import request
"""

ADDED_DIFF = """diff --git a/tests/test_converters.py b/tests/test_converters.py
new file mode 100644
index 0000000..4444444
--- /dev/null
+++ b/tests/test_converters.py
@@ -0,0 +1,3 @@
+def test_custom_converters(app):
+    assert app.url_map.converters
+    return None
"""


@pytest.fixture
def flask_alias():
    """Alias map of the flask src-layout window."""
    return AliasMap({"flask/app.py": "src/flask/app.py", "flask/__init__.py": DELETED})


@pytest.fixture
def flask_snapshot():
    """Paths at Y for the flask window (README.md deliberately absent)."""
    return SnapshotIndex([
        "src/flask/app.py",
        "src/flask/globals.py",
        "src/flask/helpers.py",
        "examples/tutorial/flaskr/db.py",
        "examples/tutorial/flaskr/auth.py",
        "tests/test_converters.py",
        "tests/test_basic.py",
    ])


def git(root, *args):
    """Run git in root with a fixed identity and return stdout."""
    env = {**os.environ, **GIT_ENV}
    completed = subprocess.run(
        ["git", "-C", str(root), *args], capture_output=True, check=True, env=env
    )
    return completed.stdout.decode("utf-8").strip()


def write(root, path, text):
    full = os.path.join(str(root), path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w", encoding="utf-8") as f:
        f.write(text)


@pytest.fixture
def fixture_repo(tmp_path):
    """Scripted two-commit repository: add, modify, rename and delete.

    X holds a.py, c.py and lib/util.py. Y renames a.py to b/a.py unchanged,
    deletes c.py, modifies lib/util.py and adds lib/new.py.
    """
    if shutil.which("git") is None:
        pytest.skip("git binary not available")

    root = tmp_path / "repo"
    root.mkdir()
    git(root, "init", "-q")
    git(root, "config", "commit.gpgsign", "false")

    write(root, "a.py", "def alpha():\n    return 1\n\n\ndef beta():\n    return 2\n")
    write(root, "c.py", "def gamma():\n    return 3\n")
    write(root, "lib/util.py", "def init_db():\n    db = connect()\n    return db\n\n\ndef get_db():\n    return None\n")
    write(root, "README.md", "fixture\n")
    git(root, "add", "-A")
    git(root, "commit", "-q", "-m", "base")
    base = git(root, "rev-parse", "HEAD")

    os.makedirs(root / "b")
    git(root, "mv", "a.py", "b/a.py")
    git(root, "rm", "-q", "c.py")
    write(root, "lib/util.py", "def init_db():\n    db = connect(timeout=5)\n    db.migrate()\n    return db\n\n\ndef get_db():\n    return None\n")
    write(root, "lib/new.py", "def fresh_helper():\n    return 'new'\n")
    git(root, "add", "-A")
    git(root, "commit", "-q", "-m", "head")
    head = git(root, "rev-parse", "HEAD")

    return str(root), base, head
