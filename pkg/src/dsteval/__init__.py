"""Evaluation toolkit for spoken dialogue state tracking.

Scores predicted belief states against gold annotations with exact-match
F1 and a pronunciation-aware PhonemeF1 that grants partial credit for
phonetically close values, plus WER/CER, transcript normalization, an
error taxonomy, and answer-type accuracy breakdowns.
"""

from .analysis import (
    ANSWER_TYPES,
    AnswerTypeReport,
    CategoryStats,
    ErrorBreakdown,
    OntologySlot,
    answer_type_of,
    classify_errors,
    load_ontology,
    near_miss_count,
    near_miss_rate,
    per_type_accuracy,
    wrong_value_pairs,
)
from .core import (
    BeliefState,
    Dialogue,
    IngestionError,
    PredictionRecord,
    ResourceError,
    SlotName,
    Turn,
    TurnBelief,
    accumulate_beliefs,
    belief_from_raw,
    canonicalize_value,
)
from .harness import (
    EvalReport,
    evaluate_corpus,
    load_dialogues,
    load_predictions,
    run_analyze,
    run_evaluate,
    run_normalize,
    run_wer,
)
from .metrics import (
    ErrorRateResult,
    F1Score,
    MatchCounts,
    aggregate_error_rates,
    char_error_rate,
    corpus_f1,
    corpus_match_counts,
    exact_match_counts,
    f1_from_counts,
    phoneme_match_counts,
    word_error_rate,
)
from .phonetics import (
    G2PError,
    PhoneticsResources,
    grapheme_to_phoneme,
    load_phonetics,
    normalized_phonetic_distance,
    phonetic_edit_distance,
    phrase_to_phonemes,
    substitution_cost,
)
from .textnorm import normalize_transcript, number_to_words

__version__ = "0.1.0"

__all__ = [
    "ANSWER_TYPES",
    "AnswerTypeReport",
    "BeliefState",
    "CategoryStats",
    "Dialogue",
    "ErrorBreakdown",
    "ErrorRateResult",
    "EvalReport",
    "F1Score",
    "G2PError",
    "IngestionError",
    "MatchCounts",
    "OntologySlot",
    "PhoneticsResources",
    "PredictionRecord",
    "ResourceError",
    "SlotName",
    "Turn",
    "TurnBelief",
    "accumulate_beliefs",
    "aggregate_error_rates",
    "answer_type_of",
    "belief_from_raw",
    "canonicalize_value",
    "char_error_rate",
    "classify_errors",
    "corpus_f1",
    "corpus_match_counts",
    "evaluate_corpus",
    "exact_match_counts",
    "f1_from_counts",
    "grapheme_to_phoneme",
    "load_dialogues",
    "load_ontology",
    "load_phonetics",
    "load_predictions",
    "near_miss_count",
    "near_miss_rate",
    "normalize_transcript",
    "normalized_phonetic_distance",
    "number_to_words",
    "per_type_accuracy",
    "phoneme_match_counts",
    "phonetic_edit_distance",
    "phrase_to_phonemes",
    "run_analyze",
    "run_evaluate",
    "run_normalize",
    "run_wer",
    "substitution_cost",
    "word_error_rate",
    "__version__",
]
