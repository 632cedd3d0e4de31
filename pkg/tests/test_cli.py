"""Tests for the repo-drift command line."""
import json
import os
from pathlib import Path

import pytest
from click.testing import CliRunner

from repo_drift.cli import cli, run
from repo_drift.constants import VERSION
from repo_drift.utils import read_json, read_jsonl, write_jsonl

from .conftest import ADDED_DIFF, DELETED_DIFF, MODIFIED_DIFF, RENAME_ONLY_DIFF, requires_git, write
from .test_name_status import FLASK_NAME_STATUS

EVAL_FIXTURES = Path(__file__).parent / "fixtures" / "eval"

SNAPSHOT_LISTING = "\n".join([
    "src/flask/app.py",
    "src/flask/globals.py",
    "examples/tutorial/flaskr/db.py",
    "examples/tutorial/flaskr/auth.py",
    "tests/test_converters.py",
]) + "\n"


@pytest.fixture
def capture_dir(tmp_path):
    """A hand-written offline capture of the flask window."""
    root = tmp_path / "capture"
    write(str(root), "name_status.txt", FLASK_NAME_STATUS)
    write(str(root), "window.json", json.dumps({"base": "x1", "head": "y1"}))
    write(str(root), "patches/examples/tutorial/flaskr/db.py.patch", MODIFIED_DIFF)
    write(str(root), "patches/src/flask/app.py.patch", RENAME_ONLY_DIFF)
    write(str(root), "patches/flask/__init__.py.patch", DELETED_DIFF)
    write(str(root), "patches/tests/test_converters.py.patch", ADDED_DIFF)
    return str(root)


def test_help(capsys):
    """Test --help exits cleanly and lists the subcommands."""
    assert run(["--help"]) == 0
    out = capsys.readouterr().out
    for name in ("window", "summarize", "dataset", "icl", "answer", "baseline", "eval", "probe", "report"):
        assert name in out


def test_missing_option(capsys, capture_dir):
    """Test a missing required option is a usage error naming the option."""
    assert run(["window", "--offline", capture_dir]) == 2
    assert "--out" in capsys.readouterr().err


def test_usage_errors(tmp_path, capsys):
    """Test live capture without revisions is a usage error."""
    assert run(["window", "--repo", str(tmp_path), "--out", str(tmp_path / "b.json")]) == 2
    assert "--base" in capsys.readouterr().err


def test_operational_error(tmp_path, capsys):
    """Test a broken bundle exits 1 with the message on stderr."""
    bundle = tmp_path / "bundle.json"
    bundle.write_text('{"adds": []}')
    listing = tmp_path / "listing.txt"
    listing.write_text(SNAPSHOT_LISTING)
    code = run([
        "dataset", "--bundle", str(bundle), "--snapshot", str(listing),
        "--new", "0", "--old", "0", "--out", str(tmp_path / "ds.jsonl"),
    ])
    assert code == 1
    assert "Error:" in capsys.readouterr().err


def test_unwritable_output(tmp_path, capture_dir, capsys):
    """Test an output path under a regular file exits 1 with the message on stderr."""
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    code = run(["window", "--offline", capture_dir, "--out", str(blocker / "bundle.json")])
    assert code == 1
    assert "Error:" in capsys.readouterr().err


def test_offline_pipeline(tmp_path, capture_dir, capsys):
    """Test window through report on an offline capture."""
    bundle = str(tmp_path / "bundle.json")
    listing = tmp_path / "listing.txt"
    listing.write_text(SNAPSHOT_LISTING)

    assert run(["window", "--offline", capture_dir, "--out", bundle]) == 0
    data = read_json(bundle)
    assert data["adds"] == ["tests/test_converters.py"]
    assert data["renames"] == [{"old": "flask/app.py", "new": "src/flask/app.py", "score": "R100"}]
    assert data["meta"]["tool_version"]

    assert run(["summarize", "--bundle", bundle, "--offline", capture_dir]) == 0
    summaries = {c.get("path", c.get("new_path")): c.get("summary") for c in read_json(bundle)["changes"]}
    assert "`init_db`" in summaries["examples/tutorial/flaskr/db.py"]
    assert summaries["src/flask/app.py"] == "Rename only; content unchanged."

    old_pool = str(tmp_path / "old.jsonl")
    write_jsonl(old_pool, [
        {"question": "How does the flaskr auth blueprint log users in?",
         "relevant_file_paths": ["examples/tutorial/flaskr/auth.py"]},
        {"question": "Where is the application object?", "relevant_file_paths": ["flask/app.py"]},
    ])
    dataset = str(tmp_path / "ds.jsonl")
    rejects = str(tmp_path / "rejects.jsonl")
    assert run([
        "--seed", "3", "dataset", "--bundle", bundle, "--snapshot", str(listing), "--old-pool", old_pool,
        "--new", "2", "--old", "1", "--out", dataset, "--reject-log", rejects,
    ]) == 0
    records = read_jsonl(dataset)
    assert len(records) == 3
    assert sorted(r["origin"] for r in records) == ["NEW", "NEW", "OLD"]
    meta = read_json(dataset + ".meta.json")
    assert meta["records"] == 3
    assert meta["counts"]["old_pool"] == 1
    assert meta["config"]["seed"] == 3
    assert [r["reason"] for r in read_jsonl(rejects)] == ["blocklisted"]
    reject_meta = read_json(rejects + ".meta.json")
    assert reject_meta["records"] == 1
    assert reject_meta["config"]["seed"] == 3
    assert bundle in reject_meta["inputs"]

    prompts = str(tmp_path / "prompts.jsonl")
    assert run(["icl", "--bundle", bundle, "--questions", dataset, "--out", prompts]) == 0
    assert [p["id"] for p in read_jsonl(prompts)] == [r["id"] for r in records]

    predictions = str(tmp_path / "pred.jsonl")
    assert run([
        "baseline", "--snapshot", str(listing), "--questions", dataset, "--out", predictions,
    ]) == 0
    assert len(read_jsonl(predictions)) == 3

    gold = str(tmp_path / "gold.jsonl")
    write_jsonl(gold, [
        {"id": r["id"], "question": r["question"], "gold_paths": r["relevant_file_paths"]} for r in records
    ])
    report = str(tmp_path / "eval.json")
    instances = str(tmp_path / "instances.jsonl")
    assert run([
        "eval", "--bundle", bundle, "--snapshot", str(listing), "--gold", gold, "--pred", predictions,
        "--report", report, "--records", instances,
    ]) == 0
    result = read_json(report)
    assert result["n"] == 3
    assert 0.0 <= result["em"] <= result["mr"] <= 1.0
    assert len(read_jsonl(instances)) == 3

    probe_questions = str(tmp_path / "probe_q.jsonl")
    write_jsonl(probe_questions, [{"id": "p1", "question": "Where is the app?"}, {"id": "p2", "question": "And now?"}])
    replay = str(tmp_path / "replay.jsonl")
    write_jsonl(replay, [{"id": "p1", "raw_output": '["flask/app.py"]'}, {"id": "p2", "paths": ["src/flask/app.py"]}])
    probe_pred = str(tmp_path / "probe_pred.jsonl")
    assert run([
        "answer", "--adapter", "replay", "--questions", probe_questions, "--replay", replay, "--out", probe_pred,
    ]) == 0

    probe_gold = str(tmp_path / "probe_gold.jsonl")
    write_jsonl(probe_gold, [{"id": "p1", "gold_paths": ["flask/app.py"]}, {"id": "p2", "gold_paths": ["flask/app.py"]}])
    probe_report = str(tmp_path / "probe.json")
    assert run([
        "probe", "--bundle", bundle, "--snapshot", str(listing), "--gold", probe_gold, "--pred", probe_pred,
        "--report", probe_report,
    ]) == 0
    assert read_json(probe_report)["emission_rate"] == pytest.approx(0.5)

    capsys.readouterr()
    assert run(["report", "--report", probe_report]) == 0
    assert "| variant | 1 | 1 | 0 | 0 | 0.5000 |" in capsys.readouterr().out

    config = tmp_path / "run.toml"
    config.write_text('log_level = "error"\n\n[report]\nformat = "json"\n')
    assert run(["--config", str(config), "report", "--report", report]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 3


def test_eval_golden_report(tmp_path, capture_dir):
    """Test eval on the flask window reproduces the stored report, provenance aside."""
    bundle = str(tmp_path / "bundle.json")
    listing = tmp_path / "listing.txt"
    listing.write_text(SNAPSHOT_LISTING)
    assert run(["window", "--offline", capture_dir, "--out", bundle]) == 0

    report = str(tmp_path / "eval.json")
    assert run([
        "eval", "--bundle", bundle, "--snapshot", str(listing),
        "--gold", str(EVAL_FIXTURES / "gold.jsonl"), "--pred", str(EVAL_FIXTURES / "pred.jsonl"),
        "--report", report,
    ]) == 0
    result = read_json(report)
    assert result.pop("meta")["tool_version"] == VERSION
    assert result == read_json(str(EVAL_FIXTURES / "expected_report.json"))


def test_single_question_prompt(tmp_path, capture_dir):
    """Test --question writes one prompt record and --question/--questions are exclusive."""
    bundle = str(tmp_path / "bundle.json")
    assert run(["window", "--offline", capture_dir, "--out", bundle]) == 0
    assert run(["summarize", "--bundle", bundle, "--offline", capture_dir]) == 0

    prompts = str(tmp_path / "prompts.jsonl")
    assert run(["icl", "--bundle", bundle, "--question", "How does `init_db` load the schema?", "--out", prompts]) == 0
    (record,) = read_jsonl(prompts)
    assert record["included_paths"][0] == "examples/tutorial/flaskr/db.py"

    questions = str(tmp_path / "q.jsonl")
    write_jsonl(questions, [{"id": "q1", "question": "?"}])
    assert run(["icl", "--bundle", bundle, "--question", "?", "--questions", questions, "--out", prompts]) == 2


@requires_git
def test_live_window(fixture_repo, tmp_path):
    """Test capture, summaries and forging straight from git."""
    root, base, head = fixture_repo
    bundle = str(tmp_path / "bundle.json")
    capture = str(tmp_path / "capture")
    assert run([
        "window", "--repo", root, "--base", base, "--head", head, "--include-deletes",
        "--save-capture", capture, "--out", bundle,
    ]) == 0
    data = read_json(bundle)
    assert data["deletes"] == ["c.py"]
    assert data["adds"] == ["lib/new.py"]
    assert os.path.isfile(os.path.join(capture, "patches", "lib", "util.py.patch"))
    stored = read_json(os.path.join(capture, "window.json"))
    assert stored["base"] == base
    assert stored["meta"]["tool_version"] == VERSION

    assert run(["summarize", "--bundle", bundle, "--repo", root]) == 0
    dataset = str(tmp_path / "ds.jsonl")
    assert run([
        "dataset", "--bundle", bundle, "--repo", root, "--new", "1", "--old", "0", "--out", dataset,
    ]) == 0
    (record,) = read_jsonl(dataset)
    assert record["relevant_file_paths"] == ["lib/new.py"]


class TestClickRunner:
    """Test the click group directly."""

    def test_version(self):
        """Test --version prints the tool version."""
        result = CliRunner().invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert VERSION in result.output

    def test_report_csv(self, tmp_path):
        """Test report renders a probe report as CSV on stdout."""
        report = tmp_path / "probe.json"
        report.write_text(json.dumps({
            "n": 2,
            "counts": {"old_name": 1, "new_name": 1, "deleted_old": 0, "unknown": 0},
            "total": 2,
            "emission_rate": 0.5,
            "old_em": 1.0,
            "old_mr": 1.0,
        }))
        result = CliRunner().invoke(cli, ["report", "--report", str(report), "--format", "csv"])
        assert result.exit_code == 0
        assert result.output.startswith("variant,old_name,new_name,deleted_old,unknown,total")
