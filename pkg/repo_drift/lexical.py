"""Lexical token-overlap scoring shared by delta selection and the baseline retriever."""
import logging
import re
from collections import Counter
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from .constants import LEXICAL_MIN_SCORE, LEXICAL_TOP_K, STOPWORDS

_LOGGER = logging.getLogger(__name__)


def tokenize(text: str) -> List[str]:
    """Lower-cased word tokens; snake_case words also yield their parts."""
    tokens = []
    for token in re.findall(r"\b\w+\b", text.lower()):
        if token in STOPWORDS:
            continue
        tokens.append(token)
        if "_" in token:
            tokens.extend(part for part in token.split("_") if part and part not in STOPWORDS)
    return tokens


def term_frequencies(tokens: Sequence[str]) -> Dict[str, float]:
    """Term frequency normalized by the most frequent term."""
    if not tokens:
        return {}
    counts = Counter(tokens)
    max_count = max(counts.values())
    return {term: count / max_count for term, count in counts.items()}


def overlap_score(query_terms: Set[str], tokens: Sequence[str]) -> float:
    """Sum of document term frequencies over the query terms it contains."""
    tf = term_frequencies(tokens)
    return float(sum(tf.get(term, 0.0) for term in query_terms))


def rank_by_score(keys: Sequence[str], scores: Iterable[float]) -> List[Tuple[str, float]]:
    """Order keys by descending score, ties by key order."""
    values = np.asarray(list(scores), dtype=float)
    if values.size == 0:
        return []
    key_order = np.argsort(np.asarray(keys, dtype=object), kind="stable")
    key_rank = np.empty(len(keys), dtype=int)
    key_rank[key_order] = np.arange(len(keys))
    ranked = np.lexsort((key_rank, -values))
    return [(keys[i], float(values[i])) for i in ranked]


def rank_paths(
    question: str,
    paths: Iterable[str],
    contents: Optional[Mapping[str, str]] = None,
    top_k: int = LEXICAL_TOP_K,
    min_score: float = LEXICAL_MIN_SCORE,
) -> List[Tuple[str, float]]:
    """Score paths by question-token overlap.

    score = share of question terms found in the path segments, plus the
    TF-weighted content overlap divided by the number of question terms.
    """
    query = set(tokenize(question))
    if not query or top_k <= 0:
        return []

    keys = sorted(paths)
    if not keys:
        return []

    path_hits = np.array([len(query & set(tokenize(path))) for path in keys], dtype=float)
    content_hits = np.zeros(len(keys))
    if contents:
        content_hits = np.array(
            [overlap_score(query, tokenize(contents.get(path, ""))) for path in keys], dtype=float
        )
    scores = (path_hits + content_hits) / len(query)

    ranked = [(key, score) for key, score in rank_by_score(keys, scores) if score >= min_score]
    _LOGGER.debug("Lexical rank: %d of %d paths above %.2f", len(ranked), len(keys), min_score)
    return ranked[:top_k]
