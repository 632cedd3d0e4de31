"""NEW/OLD training dataset construction."""
from .examples import MixRecipe, QAExample, example_id
from .forge import ForgeResult, dedupe, filter_old_pool, forge_dataset, mix, validate_labels
from .synth import QuestionSynthesizer, SynthStats, synth_new_from_diff, synth_new_from_file

__all__ = [
    "ForgeResult",
    "MixRecipe",
    "QAExample",
    "QuestionSynthesizer",
    "SynthStats",
    "dedupe",
    "example_id",
    "filter_old_pool",
    "forge_dataset",
    "mix",
    "synth_new_from_diff",
    "synth_new_from_file",
    "validate_labels",
]
