"""Label validation, OLD-pool blocklist and seeded NEW:OLD mixing."""
import asyncio
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..alias.alias_map import AliasMap, Resolution, resolve
from ..alias.paths import normalize_path
from ..alias.snapshot import SnapshotIndex
from ..constants import (
    DEFAULT_SYNTH_TARGET,
    DEFAULT_WORKERS,
    MODE_FULL_FILE,
    MODE_GIT_DIFF,
    ORIGIN_NEW,
    ORIGIN_OLD,
)
from ..delta.summarizer import summary_from_entry
from ..exceptions import DatasetError, RecipeError
from ..window.manifest import ChangeManifest
from .examples import MixRecipe, QAExample
from .synth import QuestionSynthesizer, SynthStats, question_mentions_path

_LOGGER = logging.getLogger(__name__)

REJECT_DELETED_LABEL = "deleted-label"
REJECT_NOT_IN_SNAPSHOT = "not-in-snapshot"
REJECT_INVALID_PATH = "invalid-path"
REJECT_PATH_IN_QUESTION = "path-in-question"
REJECT_BLOCKLISTED = "blocklisted"

_SEED_MASK = (1 << 64) - 1


def _rejection(example: QAExample, reason: str, path: Optional[str] = None) -> Dict[str, Any]:
    record = {"id": example.id, "question": example.question, "origin": example.origin, "reason": reason}
    if path is not None:
        record["path"] = path
    return record


def validate_labels(
    examples: Iterable[QAExample], alias: AliasMap, snapshot: SnapshotIndex
) -> Tuple[List[QAExample], List[Dict[str, Any]]]:
    """Pass every gold path through the alias map and keep only Y-valid examples.

    Deleted labels reject the example. Renamed labels are replaced by their
    Y-side path. A label already present at Y is kept as is.
    """
    kept: List[QAExample] = []
    rejections: List[Dict[str, Any]] = []
    deleted = alias.deleted

    for example in examples:
        gold: List[str] = []
        rejection = None

        for raw in example.gold_paths:
            path = normalize_path(raw)
            if path is None:
                rejection = _rejection(example, REJECT_INVALID_PATH, raw)
                break
            if path in deleted:
                rejection = _rejection(example, REJECT_DELETED_LABEL, path)
                break
            if path not in snapshot:
                resolution = resolve(alias, path)
                if resolution.kind == Resolution.RENAMED:
                    path = resolution.path
            if path not in snapshot:
                rejection = _rejection(example, REJECT_NOT_IN_SNAPSHOT, path)
                break
            gold.append(path)

        if rejection is None and example.origin == ORIGIN_NEW and question_mentions_path(example.question, gold):
            rejection = _rejection(example, REJECT_PATH_IN_QUESTION)

        if rejection is not None:
            _LOGGER.debug("Rejected %s: %s", example.id, rejection["reason"])
            rejections.append(rejection)
            continue

        if tuple(sorted(set(gold))) != example.gold_paths:
            _LOGGER.info("Remapped labels of %s: %s -> %s", example.id, list(example.gold_paths), sorted(set(gold)))
            example = example.with_gold(gold)
        kept.append(example)

    return kept, rejections


def filter_old_pool(old_examples: Iterable[QAExample], changed: Set[str]) -> List[QAExample]:
    """Keep exactly the examples whose gold set avoids every changed path."""
    return [example for example in old_examples if not changed.intersection(example.gold_paths)]


def dedupe(examples: Iterable[QAExample]) -> List[QAExample]:
    """Drop repeated ids, keeping the first example."""
    seen: Set[str] = set()
    unique = []
    for example in examples:
        if example.id not in seen:
            seen.add(example.id)
            unique.append(example)
    return unique


def mix(new_pool: Sequence[QAExample], old_pool: Sequence[QAExample], recipe: MixRecipe) -> List[QAExample]:
    """Sample exact NEW/OLD counts without replacement, then shuffle with the same seed.

    Pools are put in id order first, so the output depends only on the pool
    contents and the recipe.
    """
    if recipe.new_count > len(new_pool):
        raise RecipeError(ORIGIN_NEW, recipe.new_count, len(new_pool))
    if recipe.old_count > len(old_pool):
        raise RecipeError(ORIGIN_OLD, recipe.old_count, len(old_pool))

    rng = np.random.default_rng(recipe.seed & _SEED_MASK)
    new_sorted = sorted(new_pool, key=lambda e: e.id)
    old_sorted = sorted(old_pool, key=lambda e: e.id)

    chosen = [new_sorted[i] for i in rng.permutation(len(new_sorted))[: recipe.new_count]]
    chosen += [old_sorted[i] for i in rng.permutation(len(old_sorted))[: recipe.old_count]]
    order = rng.permutation(len(chosen))

    _LOGGER.debug("Mixed %s from pools of %d/%d", recipe.label, len(new_pool), len(old_pool))
    return [chosen[i] for i in order]


@dataclass
class ForgeResult:
    examples: List[QAExample]
    new_pool: List[QAExample]
    old_pool: List[QAExample]
    rejections: List[Dict[str, Any]] = field(default_factory=list)
    stats: SynthStats = field(default_factory=SynthStats)

    def counts(self) -> Dict[str, int]:
        return {
            "new_pool": len(self.new_pool),
            "old_pool": len(self.old_pool),
            "new": sum(1 for e in self.examples if e.origin == ORIGIN_NEW),
            "old": sum(1 for e in self.examples if e.origin == ORIGIN_OLD),
            "rejected": len(self.rejections),
        }


def synthesize_new_pool(
    manifest: ChangeManifest,
    mode: str,
    synthesizer: QuestionSynthesizer,
    target: int = DEFAULT_SYNTH_TARGET,
    read_content: Optional[Callable[[str], Optional[str]]] = None,
    workers: int = DEFAULT_WORKERS,
) -> List[QAExample]:
    """Synthesize NEW examples from the M/A files of a window."""
    anchors = [change for change in manifest.changes if change.path in manifest.modified_or_added()]

    if mode == MODE_GIT_DIFF:
        summaries = []
        for change in anchors:
            if not change.summary:
                _LOGGER.warning("No summary for %s; run summarize first", change.path)
                synthesizer.stats.skipped_files += 1
                continue
            summaries.append(summary_from_entry(change))
        return asyncio.run(synthesizer.async_from_diffs(summaries, target, workers))

    if mode == MODE_FULL_FILE:
        if read_content is None:
            raise DatasetError("full-file mode needs file contents at Y")
        contents: Dict[str, str] = {}
        for change in anchors:
            content = read_content(change.path)
            if content is None:
                _LOGGER.warning("No content at Y for %s", change.path)
                synthesizer.stats.skipped_files += 1
                continue
            contents[change.path] = content
        return asyncio.run(synthesizer.async_from_files(contents, target, workers))

    raise DatasetError(f"unknown dataset mode {mode!r}")


def forge_dataset(
    manifest: ChangeManifest,
    snapshot: SnapshotIndex,
    old_examples: Sequence[QAExample],
    recipe: MixRecipe,
    mode: str,
    synthesizer: QuestionSynthesizer,
    target: int = DEFAULT_SYNTH_TARGET,
    read_content: Optional[Callable[[str], Optional[str]]] = None,
    workers: int = DEFAULT_WORKERS,
) -> ForgeResult:
    """Full pipeline: synthesize NEW, validate, blocklist OLD, then mix."""
    for problem in snapshot.check_against(manifest.alias_map):
        _LOGGER.warning("Snapshot/alias inconsistency: %s", problem)

    raw_new = synthesize_new_pool(manifest, mode, synthesizer, target, read_content, workers)
    new_kept, rejections = validate_labels(raw_new, manifest.alias_map, snapshot)

    changed = manifest.changed_paths()
    old_candidates = filter_old_pool(old_examples, changed)
    blocked = {e.id for e in old_examples} - {e.id for e in old_candidates}
    rejections += [_rejection(e, REJECT_BLOCKLISTED) for e in old_examples if e.id in blocked]

    old_kept, old_rejections = validate_labels(old_candidates, manifest.alias_map, snapshot)
    rejections += old_rejections
    old_kept = filter_old_pool(old_kept, changed)

    new_pool = dedupe(new_kept)
    old_pool = dedupe(old_kept)
    examples = mix(new_pool, old_pool, recipe)

    result = ForgeResult(examples, new_pool, old_pool, rejections, synthesizer.stats)
    _LOGGER.info("Forged dataset %s: %s", recipe.label, result.counts())
    return result
