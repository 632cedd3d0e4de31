"""Command-line entry point: `repo-drift <subcommand>`."""
import json
import logging
import os
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence

import click

from .alias.alias_map import AliasMap
from .alias.snapshot import SnapshotIndex
from .config import artifact_meta, default_map, load_run_config
from .constants import (
    ADAPTER_LEXICAL,
    ADAPTER_REPLAY,
    ADAPTER_SERVICE,
    BACKEND_HEURISTIC,
    BACKEND_OFFLINE,
    BACKEND_RAW_DIFF,
    BACKEND_SERVICE,
    DEFAULT_CODE_GLOBS,
    DEFAULT_ICL_BUDGET_CHARS,
    DEFAULT_ICL_K,
    DEFAULT_MAX_FILES_PER_Q,
    DEFAULT_SYNTH_TARGET,
    DEFAULT_WORKERS,
    FORMATTING_PENALTY,
    LEXICAL_MIN_SCORE,
    LEXICAL_TOP_K,
    MAX_DIFF_CHARS,
    MODE_FULL_FILE,
    MODE_GIT_DIFF,
    ORIGIN_OLD,
    VERSION,
)
from .dataset.examples import MixRecipe, QAExample
from .dataset.forge import forge_dataset
from .dataset.synth import QuestionSynthesizer
from .delta.diff import truncate_diff
from .delta.summarizer import DeltaSummarizer, DeltaSummary, summary_from_entry
from .evaluation.probe import probe_score
from .evaluation.scoring import evaluate, load_gold, load_predictions
from .exceptions import ConfigError, DriftError, GitCommandError
from .harness.adapters import AdapterConfig, PromptRecord, Question, create_adapter
from .icl.composer import compose_for_question
from .llm.service import ChatServiceClient
from .report import FORMATS, render_report
from .schemas import (
    EXAMPLE_RECORD_SCHEMA,
    GOLD_RECORD_SCHEMA,
    LOG_LEVELS,
    PREDICTION_RECORD_SCHEMA,
    PROMPT_RECORD_SCHEMA,
    QUESTION_RECORD_SCHEMA,
    load_records,
)
from .utils import atomic_write_text, content_hash, read_json, write_json, write_jsonl
from .window.git import WindowCapture, WindowRef, capture_window, extract_diff, read_file_at
from .window.manifest import ChangeManifest, build_manifest

_LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _setup_logging(level: str):
    logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level.upper())


def _effective_config(ctx: click.Context) -> Dict[str, Any]:
    root = ctx.find_root()
    config = {"seed": root.params.get("seed"), "log_level": root.params.get("log_level")}
    config[ctx.info_name] = dict(sorted(ctx.params.items()))
    return config


def _write_json_artifact(ctx: click.Context, path: str, data: Dict[str, Any], inputs: Iterable[Optional[str]]):
    data = dict(data)
    data["meta"] = artifact_meta(_effective_config(ctx), inputs)
    write_json(path, data)


def _write_jsonl_artifact(
    ctx: click.Context, path: str, records: Sequence[Dict[str, Any]], inputs: Iterable[Optional[str]],
    extra: Optional[Dict[str, Any]] = None,
):
    """JSONL records stay bare; provenance goes to a <path>.meta.json sidecar."""
    write_jsonl(path, records)
    meta = artifact_meta(_effective_config(ctx), inputs)
    meta["records"] = len(records)
    if extra:
        meta.update(extra)
    write_json(f"{path}.meta.json", meta)


def _load_snapshot(snapshot: Optional[str], manifest: Optional[ChangeManifest], repo: Optional[str]) -> SnapshotIndex:
    """Snapshot from a listing/tree, or from git at the bundle head."""
    if snapshot:
        return SnapshotIndex.load(snapshot)
    if manifest is not None and repo:
        return SnapshotIndex.from_git(repo, manifest.head)
    raise click.UsageError("give --snapshot, or --bundle together with --repo")


def _read_contents(directory: str, paths: Iterable[str]) -> Dict[str, str]:
    contents = {}
    for path in paths:
        full = os.path.join(directory, path)
        if os.path.isfile(full):
            with open(full, "r", encoding="utf-8", errors="replace") as f:
                contents[path] = f.read()
    return contents


def _client(cache: Optional[str]) -> ChatServiceClient:
    return ChatServiceClient.from_env(cache_dir=cache)


def _diff_source(manifest: ChangeManifest, repo: Optional[str], offline: Optional[str]):
    """Return a function path -> raw diff text, from a capture or a live repo."""
    if offline:
        capture = WindowCapture.load(offline, manifest.base, manifest.head)
        return lambda entry: capture.diff_for(entry.path)
    if repo:
        window = WindowRef(repo, manifest.base, manifest.head)
        return lambda entry: extract_diff(window, entry.path, manifest.changes)
    raise click.UsageError("give --repo or --offline to read diffs")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="TOML run config.")
@click.option("--seed", type=int, default=0, show_default=True, help="Global random seed.")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default="WARNING",
    show_default=True,
)
@click.version_option(VERSION, prog_name="repo-drift")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], seed: int, log_level: str):
    """Commit-window drift toolkit: manifests, deltas, datasets, prompts and scoring."""
    _setup_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj["seed"] = seed


@cli.command()
@click.option("--repo", default=".", show_default=True, type=click.Path(file_okay=False))
@click.option("--base", "base_ref", help="Base revision X.")
@click.option("--head", "head_ref", help="Head revision Y.")
@click.option("--glob", "globs", multiple=True, help="Path glob; replaces the default code globs.")
@click.option("--include-deletes", is_flag=True, help="Add the separate delete pass.")
@click.option("--offline", type=click.Path(exists=True, file_okay=False), help="Pre-captured window directory.")
@click.option("--save-capture", type=click.Path(file_okay=False), help="Write the raw capture here.")
@click.option("--workers", type=int, default=DEFAULT_WORKERS, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Bundle JSON to write.")
@click.pass_context
def window(ctx, repo, base_ref, head_ref, globs, include_deletes, offline, save_capture, workers, out):
    """Capture a commit window and write its change manifest bundle."""
    if offline:
        capture = WindowCapture.load(offline, base_ref, head_ref)
    else:
        if not base_ref or not head_ref:
            raise click.UsageError("--base and --head are required without --offline")
        ref = WindowRef(repo, base_ref, head_ref, tuple(globs) or tuple(DEFAULT_CODE_GLOBS))
        capture = capture_window(ref, include_deletes, workers, with_patches=bool(save_capture))

    if save_capture:
        capture.save(save_capture, meta=artifact_meta(_effective_config(ctx), []))

    manifest = build_manifest(capture.entries(), capture.base, capture.head)
    _write_json_artifact(ctx, out, manifest.to_dict(), [])
    _LOGGER.info("Wrote bundle with %d changes to %s", len(manifest.changes), out)


@cli.command()
@click.option("--bundle", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--backend",
    type=click.Choice([BACKEND_SERVICE, BACKEND_HEURISTIC]),
    default=BACKEND_HEURISTIC,
    show_default=True,
)
@click.option("--max-diff-chars", type=click.IntRange(min=1), default=MAX_DIFF_CHARS, show_default=True)
@click.option("--cache", type=click.Path(file_okay=False), help="Service response cache directory.")
@click.option("--repo", type=click.Path(file_okay=False), help="Read diffs from this repository.")
@click.option("--offline", type=click.Path(exists=True, file_okay=False), help="Read diffs from a capture.")
@click.option("--workers", type=int, default=DEFAULT_WORKERS, show_default=True)
@click.option("--summaries-out", type=click.Path(dir_okay=False), help="Also write {path: summary} JSON.")
@click.option("--out", type=click.Path(dir_okay=False), help="Bundle to write (defaults to --bundle).")
@click.pass_context
def summarize(ctx, bundle, backend, max_diff_chars, cache, repo, offline, workers, summaries_out, out):
    """Summarize every changed file and merge the summaries into the bundle."""
    manifest = ChangeManifest.load(bundle)
    diff_for = _diff_source(manifest, repo, offline)
    client = _client(cache) if backend == BACKEND_SERVICE else None
    summarizer = DeltaSummarizer(backend, client, max_diff_chars)

    items = [(entry, diff_for(entry)) for entry in manifest.changes]
    summaries = summarizer.summarize_entries(items, workers)
    fallbacks = sum(1 for s in summaries if s.backend != backend)
    if fallbacks:
        _LOGGER.warning("%d of %d summaries fell back to the heuristic backend", fallbacks, len(summaries))

    texts = {summary.path: summary.text for summary in summaries}
    merged = manifest.with_summaries(texts)
    _write_json_artifact(ctx, out or bundle, merged.to_dict(), [bundle])
    if summaries_out:
        _write_json_artifact(ctx, summaries_out, {"summaries": dict(sorted(texts.items()))}, [bundle])


@cli.command()
@click.option("--bundle", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice([MODE_GIT_DIFF, MODE_FULL_FILE]), default=MODE_GIT_DIFF, show_default=True)
@click.option("--snapshot", type=click.Path(exists=True), help="Path listing or checked-out tree at Y.")
@click.option("--old-pool", type=click.Path(exists=True, dir_okay=False), help="OLD examples JSONL.")
@click.option("--new", "new_count", type=click.IntRange(min=0), required=True)
@click.option("--old", "old_count", type=click.IntRange(min=0), required=True)
@click.option("--seed", type=int, help="Mix seed (defaults to the global --seed).")
@click.option(
    "--backend", type=click.Choice([BACKEND_OFFLINE, BACKEND_SERVICE]), default=BACKEND_OFFLINE, show_default=True
)
@click.option("--target", type=click.IntRange(min=0), default=DEFAULT_SYNTH_TARGET, show_default=True)
@click.option("--max-files-per-q", type=click.IntRange(min=1), default=DEFAULT_MAX_FILES_PER_Q, show_default=True)
@click.option("--contents", type=click.Path(exists=True, file_okay=False), help="Checkout at Y for full-file mode.")
@click.option("--repo", type=click.Path(file_okay=False), help="Repository for file contents and snapshot.")
@click.option("--cache", type=click.Path(file_okay=False))
@click.option("--workers", type=int, default=DEFAULT_WORKERS, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--reject-log", type=click.Path(dir_okay=False))
@click.pass_context
def dataset(
    ctx, bundle, mode, snapshot, old_pool, new_count, old_count, seed, backend, target,
    max_files_per_q, contents, repo, cache, workers, out, reject_log,
):
    """Forge a NEW:OLD training set from the window."""
    manifest = ChangeManifest.load(bundle)
    index = _load_snapshot(snapshot, manifest, repo)

    old_examples = []
    if old_pool:
        records = load_records(old_pool, EXAMPLE_RECORD_SCHEMA, "old pool", ConfigError)
        old_examples = [QAExample.from_record(record, origin=ORIGIN_OLD) for record in records]

    def read_content(path: str) -> Optional[str]:
        if contents:
            return _read_contents(contents, [path]).get(path)
        if repo:
            try:
                return read_file_at(repo, manifest.head, path)
            except GitCommandError:
                return None
        return None

    if mode == MODE_FULL_FILE and not (contents or repo):
        raise click.UsageError("full-file mode needs --contents or --repo")

    client = _client(cache) if backend == BACKEND_SERVICE else None
    synthesizer = QuestionSynthesizer(backend, client, max_files_per_q)
    recipe = MixRecipe(new_count, old_count, ctx.obj["seed"] if seed is None else seed)

    result = forge_dataset(
        manifest, index, old_examples, recipe, mode, synthesizer, target, read_content, workers
    )
    _write_jsonl_artifact(
        ctx,
        out,
        [example.to_record() for example in result.examples],
        [bundle, snapshot, old_pool],
        extra={"counts": result.counts(), "synthesis": result.stats.to_dict()},
    )
    if reject_log:
        _write_jsonl_artifact(ctx, reject_log, result.rejections, [bundle, snapshot, old_pool])


def _delta_entries(manifest: ChangeManifest, raw_diffs: bool, max_diff_chars: int, diff_for) -> List[DeltaSummary]:
    if not raw_diffs:
        return [summary_from_entry(change) for change in manifest.changes if change.summary]
    deltas = []
    for change in manifest.changes:
        text = truncate_diff(diff_for(change), max_diff_chars).strip()
        deltas.append(DeltaSummary(change.path, change.status, text, 0, False, BACKEND_RAW_DIFF, change.old_path))
    return deltas


@cli.command()
@click.option("--bundle", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--question", help="A single question.")
@click.option("--questions", type=click.Path(exists=True, dir_okay=False), help="Questions JSONL.")
@click.option("--k", type=click.IntRange(min=0), default=DEFAULT_ICL_K, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_ICL_BUDGET_CHARS, show_default=True)
@click.option("--penalty", type=click.FloatRange(0.0, 1.0), default=FORMATTING_PENALTY, show_default=True)
@click.option("--raw-diffs", is_flag=True, help="Use truncated raw diffs instead of summaries.")
@click.option("--max-diff-chars", type=click.IntRange(min=1), default=MAX_DIFF_CHARS, show_default=True)
@click.option("--repo", type=click.Path(file_okay=False))
@click.option("--offline", type=click.Path(exists=True, file_okay=False))
@click.option("--chat-markup", is_flag=True, help="Render prompts for chat-markup models.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def icl(ctx, bundle, question, questions, k, budget, penalty, raw_diffs, max_diff_chars, repo, offline, chat_markup, out):
    """Compose in-context prompts with the most relevant deltas."""
    if bool(question) == bool(questions):
        raise click.UsageError("give exactly one of --question or --questions")

    manifest = ChangeManifest.load(bundle)
    diff_for = _diff_source(manifest, repo, offline) if raw_diffs else None
    deltas = _delta_entries(manifest, raw_diffs, max_diff_chars, diff_for)

    if question:
        items = [Question(content_hash(question)[:16], question)]
    else:
        items = [Question.from_record(r) for r in load_records(questions, QUESTION_RECORD_SCHEMA, "question", ConfigError)]

    records = []
    for item in items:
        prompt = compose_for_question(item.question, deltas, k, budget, chat_markup, penalty)
        records.append(prompt.to_record(item.id))
    _write_jsonl_artifact(ctx, out, records, [bundle, questions])
    _LOGGER.info("Wrote %d prompts to %s", len(records), out)


def _answer(ctx, adapter_cfg: AdapterConfig, questions: str, prompts: Optional[str], index, contents, workers, out, inputs):
    items = [Question.from_record(r) for r in load_records(questions, QUESTION_RECORD_SCHEMA, "question", ConfigError)]
    prompt_map = {}
    if prompts:
        for record in load_records(prompts, PROMPT_RECORD_SCHEMA, "prompt", ConfigError):
            prompt = PromptRecord.from_record(record)
            prompt_map[prompt.id] = prompt
    adapter = create_adapter(adapter_cfg, index, contents)
    records = adapter.answer_all(items, prompt_map, workers)
    _write_jsonl_artifact(ctx, out, records, [questions, prompts] + list(inputs))


@cli.command()
@click.option("--adapter", "kind", type=click.Choice([ADAPTER_REPLAY, ADAPTER_SERVICE, ADAPTER_LEXICAL]), required=True)
@click.option("--questions", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--replay", type=click.Path(exists=True, dir_okay=False), help="Stored outputs JSONL.")
@click.option("--prompts", type=click.Path(exists=True, dir_okay=False), help="Prompts JSONL from icl.")
@click.option("--snapshot", type=click.Path(exists=True))
@click.option("--bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--repo", type=click.Path(file_okay=False))
@click.option("--contents", type=click.Path(exists=True, file_okay=False))
@click.option("--top-k", type=click.IntRange(min=0), default=LEXICAL_TOP_K, show_default=True)
@click.option("--min-score", type=click.FloatRange(0.0, 1.0), default=LEXICAL_MIN_SCORE, show_default=True)
@click.option("--cache", type=click.Path(file_okay=False))
@click.option("--workers", type=int, default=DEFAULT_WORKERS, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def answer(ctx, kind, questions, replay, prompts, snapshot, bundle, repo, contents, top_k, min_score, cache, workers, out):
    """Produce predictions with a replay, service or lexical adapter."""
    index = None
    text = None
    if kind == ADAPTER_SERVICE:
        cfg = AdapterConfig.from_env(cache_dir=cache)
    else:
        cfg = AdapterConfig.from_dict({
            "kind": kind, "replay_file": replay, "lexical_top_k": top_k, "lexical_min_score": min_score,
        })
    if kind == ADAPTER_LEXICAL:
        manifest = ChangeManifest.load(bundle) if bundle else None
        index = _load_snapshot(snapshot, manifest, repo)
        text = _read_contents(contents, index) if contents else None
    _answer(ctx, cfg, questions, prompts, index, text, workers, out, [replay, snapshot, bundle])


@cli.command()
@click.option("--bundle", type=click.Path(exists=True, dir_okay=False))
@click.option("--snapshot", type=click.Path(exists=True))
@click.option("--repo", type=click.Path(file_okay=False))
@click.option("--questions", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--contents", type=click.Path(exists=True, file_okay=False), help="Checkout at Y for content overlap.")
@click.option("--top-k", type=click.IntRange(min=0), default=LEXICAL_TOP_K, show_default=True)
@click.option("--min-score", type=click.FloatRange(0.0, 1.0), default=LEXICAL_MIN_SCORE, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def baseline(ctx, bundle, snapshot, repo, questions, contents, top_k, min_score, out):
    """Lexical baseline predictions over the snapshot paths."""
    manifest = ChangeManifest.load(bundle) if bundle else None
    index = _load_snapshot(snapshot, manifest, repo)
    text = _read_contents(contents, index) if contents else None
    cfg = AdapterConfig.from_dict({"kind": ADAPTER_LEXICAL, "lexical_top_k": top_k, "lexical_min_score": min_score})
    _answer(ctx, cfg, questions, None, index, text, 1, out, [bundle, snapshot])


@cli.command(name="eval")
@click.option("--bundle", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--snapshot", type=click.Path(exists=True), help="Path listing or tree at Y.")
@click.option("--repo", type=click.Path(file_okay=False))
@click.option("--gold", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--pred", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--no-remap", is_flag=True, help="Score without the alias map.")
@click.option("--x-snapshot", type=click.Path(exists=True), help="X-side snapshot to clamp no-remap scoring.")
@click.option("--no-rescue", is_flag=True, help="Skip the diagnostic rescues.")
@click.option("--records", type=click.Path(dir_okay=False), help="Write per-instance records JSONL.")
@click.option("--report", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def eval_command(ctx, bundle, snapshot, repo, gold, pred, no_remap, x_snapshot, no_rescue, records, report):
    """Alias-aware EM/MR over gold and predictions."""
    manifest = ChangeManifest.load(bundle)
    if no_remap:
        alias = AliasMap.empty()
        index = SnapshotIndex.load(x_snapshot) if x_snapshot else None
    else:
        alias = manifest.alias_map
        index = _load_snapshot(snapshot, manifest, repo)
        for problem in index.check_against(alias):
            _LOGGER.warning("Snapshot/alias inconsistency: %s", problem)

    gold_items = load_gold(load_records(gold, GOLD_RECORD_SCHEMA, "gold", ConfigError))
    predictions = load_predictions(load_records(pred, PREDICTION_RECORD_SCHEMA, "prediction", ConfigError))
    instance_records, result = evaluate(
        gold_items, predictions, alias, index, manifest.modified_or_added(), rescue=not no_rescue
    )

    _write_json_artifact(ctx, report, result.to_dict(), [bundle, snapshot, x_snapshot, gold, pred])
    if records:
        _write_jsonl_artifact(ctx, records, [r.to_dict() for r in instance_records], [bundle, gold, pred])


@cli.command()
@click.option("--bundle", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--snapshot", type=click.Path(exists=True))
@click.option("--repo", type=click.Path(file_okay=False))
@click.option("--gold", required=True, type=click.Path(exists=True, dir_okay=False), help="X-side gold JSONL.")
@click.option("--pred", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--report", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def probe(ctx, bundle, snapshot, repo, gold, pred, report):
    """Forgetting probe: old-name emission rate and old-side EM/MR."""
    manifest = ChangeManifest.load(bundle)
    index = _load_snapshot(snapshot, manifest, repo)
    gold_items = load_gold(load_records(gold, GOLD_RECORD_SCHEMA, "gold", ConfigError))
    predictions = load_predictions(load_records(pred, PREDICTION_RECORD_SCHEMA, "prediction", ConfigError))
    result = probe_score(gold_items, predictions, manifest.alias_map, index)
    _write_json_artifact(ctx, report, result.to_dict(), [bundle, snapshot, gold, pred])


@cli.command(name="report")
@click.option("--report", "report_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--base-report", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="md", show_default=True)
@click.option("--variant", default="variant", show_default=True)
@click.option("--base-name", default="base", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write here instead of stdout.")
def report_command(report_path, base_report, fmt, variant, base_name, out):
    """Render an eval or probe report as JSON, CSV or markdown."""
    try:
        data = read_json(report_path)
        base = read_json(base_report) if base_report else None
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read report: {e}") from e
    try:
        text = render_report(data, fmt, base, variant, base_name)
    except (KeyError, ValueError) as e:
        raise ConfigError(f"cannot render report: {e}") from e

    if out:
        atomic_write_text(out, text)
    else:
        click.echo(text, nl=False)


def _option_names(command: click.Command) -> Dict[str, str]:
    names = {}
    for param in command.params:
        for opt in param.opts:
            names[opt.lstrip("-").replace("-", "_")] = param.name
    return names


def _config_path(argv: Sequence[str]) -> Optional[str]:
    """Find --config before click parses, so its values can seed default_map."""
    for index, arg in enumerate(argv):
        if arg == "--config" and index + 1 < len(argv):
            return argv[index + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code: 0 ok, 1 operational error, 2 usage error."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        option_names = {name: _option_names(command) for name, command in cli.commands.items()}
        option_names[""] = _option_names(cli)
        defaults = default_map(load_run_config(_config_path(args)), option_names)
        result = cli.main(
            args=args, prog_name="repo-drift", standalone_mode=False, default_map=defaults
        )
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_ERROR
    except DriftError as e:
        _LOGGER.error("%s", e)
        click.echo(f"Error: {e}", err=True)
        return EXIT_ERROR
    except OSError as e:
        _LOGGER.error("%s", e)
        click.echo(f"Error: {e}", err=True)
        return EXIT_ERROR
    return result if isinstance(result, int) else EXIT_OK


def main():
    sys.exit(run())
