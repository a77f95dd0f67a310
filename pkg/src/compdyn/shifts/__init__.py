"""Shift spaces and their topological entropy."""

from .coded import (
    ZeroEntropyOutcome,
    coded_sofic_approximation,
    entropy_coded,
    entropy_upper_bounds,
    zero_entropy_semialgorithm,
)
from .io import presentation_from_json, presentation_to_json
from .perron import perron_root_interval
from .presentations import (
    BUDGET_EXHAUSTED,
    CONVERGED,
    EntropyResult,
    ForbiddenSetSFT,
    GeneratingSet,
    LabeledGraph,
    LanguageOracle,
    TransitionMatrix,
)
from .sft import (
    count_words,
    entropy_sft,
    enumerate_language,
    minimal_forbidden_set,
    recode_to_one_step,
    step_size,
    word_counter,
)
from .sofic import entropy_sofic, sofic_count_words, sofic_determinize, sofic_word_counter

__all__ = [
    "BUDGET_EXHAUSTED", "CONVERGED", "EntropyResult", "ForbiddenSetSFT", "GeneratingSet",
    "LabeledGraph", "LanguageOracle", "TransitionMatrix", "ZeroEntropyOutcome",
    "coded_sofic_approximation", "count_words", "entropy_coded", "entropy_sft",
    "entropy_sofic", "entropy_upper_bounds", "enumerate_language", "minimal_forbidden_set",
    "perron_root_interval", "presentation_from_json", "presentation_to_json",
    "recode_to_one_step", "sofic_count_words", "sofic_determinize", "sofic_word_counter",
    "step_size", "word_counter", "zero_entropy_semialgorithm",
]
