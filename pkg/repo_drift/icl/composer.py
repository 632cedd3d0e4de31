"""In-context prompt assembly: delta selection under a character budget."""
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Sequence, Tuple

from ..constants import (
    DEFAULT_ICL_BUDGET_CHARS,
    DEFAULT_ICL_K,
    FORMATTING_PENALTY,
    STATUS_NAMES,
    STATUS_RENAMED,
)
from ..delta.summarizer import DeltaSummary
from ..exceptions import PromptBudgetError
from ..lexical import overlap_score, rank_by_score, tokenize
from ..llm.prompts import CHAT_TEMPLATE, ICL_SYSTEM_TEMPLATE, NO_THINK_SUFFIX, QUESTION_TEMPLATE, fill

_LOGGER = logging.getLogger(__name__)


def render_delta(summary: DeltaSummary) -> str:
    """One delta line: `- path (STATUS): text`, renames as `- old → new (RENAMED): text`."""
    label = STATUS_NAMES.get(summary.status, summary.status)
    if summary.status == STATUS_RENAMED and summary.old_path:
        head = f"- {summary.old_path} → {summary.path} ({label})"
    else:
        head = f"- {summary.path} ({label})"
    return f"{head}: {summary.text}" if summary.text else head


@dataclass(frozen=True)
class ICLPrompt:
    system_text: str
    user_text: str
    delta_entries: Tuple[DeltaSummary, ...]
    budget_chars: int
    overflow_dropped: int = 0
    chat_markup: bool = False

    def render(self) -> str:
        if self.chat_markup:
            return fill(CHAT_TEMPLATE, system=self.system_text, user=self.user_text)
        return f"{self.system_text}\n\n{self.user_text}"

    @property
    def total_chars(self) -> int:
        return len(self.render())

    @property
    def included_paths(self) -> List[str]:
        return [entry.path for entry in self.delta_entries]

    def to_record(self, prompt_id: str) -> Dict[str, Any]:
        return {
            "id": prompt_id,
            "system": self.system_text,
            "user": self.user_text,
            "included_paths": self.included_paths,
        }


def score_deltas(
    question: str, summaries: Sequence[DeltaSummary], penalty: float = FORMATTING_PENALTY
) -> List[float]:
    """TF-weighted overlap of question terms with each delta's path and text."""
    query = set(tokenize(question))
    scores = []
    for summary in summaries:
        tokens = tokenize(summary.path) + tokenize(summary.text)
        if summary.old_path:
            tokens += tokenize(summary.old_path)
        score = overlap_score(query, tokens)
        if summary.formatting_only:
            score *= penalty
        scores.append(score)
    return scores


def _select(
    question: str,
    summaries: Sequence[DeltaSummary],
    k: int,
    budget_chars: int,
    penalty: float,
) -> Tuple[List[DeltaSummary], int]:
    if k <= 0 or not summaries:
        return [], 0
    if budget_chars <= 0:
        raise ValueError("budget_chars must be positive")

    by_path = {}
    for summary in summaries:
        by_path.setdefault(summary.path, summary)
    keys = list(by_path)
    ranked = rank_by_score(keys, score_deltas(question, [by_path[key] for key in keys], penalty))

    selected: List[DeltaSummary] = []
    used = 0
    candidates = [by_path[key] for key, score in ranked if score > 0][:k]
    for summary in candidates:
        cost = len(render_delta(summary)) + (1 if selected else 0)
        if used + cost > budget_chars:
            break
        selected.append(summary)
        used += cost

    dropped = len(candidates) - len(selected)
    if dropped:
        _LOGGER.debug("Delta budget dropped %d of %d candidates", dropped, len(candidates))
    return selected, dropped


def select_deltas(
    question: str,
    summaries: Sequence[DeltaSummary],
    k: int = DEFAULT_ICL_K,
    budget_chars: int = DEFAULT_ICL_BUDGET_CHARS,
    penalty: float = FORMATTING_PENALTY,
) -> List[DeltaSummary]:
    """Top-k deltas by score (ties by path), then greedy inclusion within budget_chars.

    Deltas sharing no term with the question are never selected.
    """
    return _select(question, summaries, k, budget_chars, penalty)[0]


def compose_prompt(
    question: str,
    deltas: Sequence[DeltaSummary],
    budget_chars: int = DEFAULT_ICL_BUDGET_CHARS,
    chat_markup: bool = False,
) -> ICLPrompt:
    """Fill the ICL template, adding delta lines in order while the prompt fits the budget.

    The rules scaffold is never elided; a budget too small for it raises
    PromptBudgetError.
    """
    user_text = fill(QUESTION_TEMPLATE, question=question)
    if chat_markup:
        user_text += NO_THINK_SUFFIX

    def build(lines: List[str], included: Sequence[DeltaSummary]) -> ICLPrompt:
        system_text = fill(ICL_SYSTEM_TEMPLATE, delta_info="\n".join(lines))
        return ICLPrompt(
            system_text, user_text, tuple(included), budget_chars, len(deltas) - len(included), chat_markup
        )

    scaffold = build([], []).total_chars
    if scaffold > budget_chars:
        raise PromptBudgetError(
            f"budget of {budget_chars} chars cannot hold the {scaffold}-char prompt scaffold"
        )

    lines: List[str] = []
    included: List[DeltaSummary] = []
    used = scaffold
    for delta in deltas:
        line = render_delta(delta)
        cost = len(line) + (1 if lines else 0)
        if used + cost > budget_chars:
            break
        lines.append(line)
        included.append(delta)
        used += cost

    prompt = build(lines, included)
    if prompt.overflow_dropped:
        _LOGGER.debug("Prompt budget dropped %d deltas", prompt.overflow_dropped)
    return prompt


def compose_for_question(
    question: str,
    summaries: Sequence[DeltaSummary],
    k: int = DEFAULT_ICL_K,
    budget_chars: int = DEFAULT_ICL_BUDGET_CHARS,
    chat_markup: bool = False,
    penalty: float = FORMATTING_PENALTY,
) -> ICLPrompt:
    """select_deltas then compose_prompt, sharing one budget.

    overflow_dropped counts top-k candidates lost at either stage.
    """
    selected, select_dropped = _select(question, summaries, k, budget_chars, penalty)
    prompt = compose_prompt(question, selected, budget_chars, chat_markup)
    if select_dropped:
        prompt = replace(prompt, overflow_dropped=prompt.overflow_dropped + select_dropped)
    return prompt

