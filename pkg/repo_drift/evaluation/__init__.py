"""Alias-aware scoring and the forgetting probe."""
from .predictions import parse_prediction
from .probe import ProbeReport, probe_classify, probe_score
from .remap import RemapResult, remap_predictions, rescue_classify
from .scoring import (
    EvalReport,
    GoldItem,
    InstanceRecord,
    Prediction,
    classify_slice,
    evaluate,
    load_gold,
    load_predictions,
    score_corpus,
    score_instance,
)

__all__ = [
    "EvalReport",
    "GoldItem",
    "InstanceRecord",
    "Prediction",
    "ProbeReport",
    "RemapResult",
    "classify_slice",
    "evaluate",
    "load_gold",
    "load_predictions",
    "parse_prediction",
    "probe_classify",
    "probe_score",
    "remap_predictions",
    "rescue_classify",
    "score_corpus",
    "score_instance",
]
