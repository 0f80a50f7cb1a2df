"""Slot F1 in exact and phoneme-credit modes, plus WER and CER.

Match counting follows the partial-credit scheme: a predicted pair whose
slot exists in gold earns 1-d true-positive credit, where d is the
normalized phonetic distance between the two values (exact mode is the
special case d in {0,1}). FP and FN always come from the exact-match
count, so both modes share denominators and PhonemeF1 >= exact F1.

Corpus scores micro-aggregate: counts are summed over the accumulated
state comparison at every turn of every dialogue, then turned into one
F1. Summation order is fixed (turn order within a dialogue, dialogue_id
order across dialogues) so parallel and sequential runs agree bitwise.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import (
    Dialogue,
    IngestionError,
    PredictionRecord,
    canonicalize_value,
)
from .phonetics import G2PError, PhoneticsResources

log = logging.getLogger(__name__)

DONTCARE = "dontcare"


@dataclass(frozen=True)
class MatchCounts:
    """TP/FP/FN bookkeeping for one or many state comparisons.

    tp is fractional under phonetic credit; common counts exact value
    matches only, and fp/fn are defined against common in both modes:
    fp = pred_total - common, fn = gold_total - common.
    """

    tp: float
    fp: int
    fn: int
    pred_total: int
    gold_total: int
    common: int

    @classmethod
    def zero(cls) -> "MatchCounts":
        return cls(0.0, 0, 0, 0, 0, 0)

    def __add__(self, other: "MatchCounts") -> "MatchCounts":
        return MatchCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            pred_total=self.pred_total + other.pred_total,
            gold_total=self.gold_total + other.gold_total,
            common=self.common + other.common,
        )


@dataclass(frozen=True)
class F1Score:
    precision: float
    recall: float
    f1: float


def exact_match_counts(gold: dict, pred: dict) -> MatchCounts:
    """Count slot-value pairs that match exactly."""
    common = sum(1 for slot, value in pred.items() if gold.get(slot) == value)
    return MatchCounts(
        tp=float(common),
        fp=len(pred) - common,
        fn=len(gold) - common,
        pred_total=len(pred),
        gold_total=len(gold),
        common=common,
    )


def phoneme_match_counts(
    gold: dict, pred: dict, resources: PhoneticsResources
) -> MatchCounts:
    """Count matches with phonetic partial credit.

    Every predicted pair whose slot exists in gold contributes 1-d to tp;
    common still counts exact equality only. "dontcare" is compared by
    exact match (its pronunciation is meaningless). A value that cannot
    be rendered as phonemes earns zero credit with a warning; a corpus
    run never aborts over one bad value.
    """
    tp = 0.0
    common = 0
    for slot, value in pred.items():
        gold_value = gold.get(slot)
        if gold_value is None:
            continue
        if value == gold_value:
            common += 1
            tp += 1.0
            continue
        if DONTCARE in (value, gold_value):
            continue
        try:
            distance = resources.distance(value, gold_value)
        except G2PError as err:
            log.warning(
                "zero phonetic credit for %r vs %r on %s: %s",
                value, gold_value, slot, err,
            )
            continue
        tp += 1.0 - distance
    return MatchCounts(
        tp=tp,
        fp=len(pred) - common,
        fn=len(gold) - common,
        pred_total=len(pred),
        gold_total=len(gold),
        common=common,
    )


def f1_from_counts(counts: MatchCounts) -> F1Score:
    """Precision, recall, and F1 with the empty-state conventions.

    Both sides empty is perfect agreement (all three 1.0); otherwise a
    ratio whose denominator is zero scores 0.0. f1 is computed as
    2*tp/(pred_total+gold_total), which equals the harmonic mean of
    precision and recall whenever that mean is defined.
    """
    pred_total, gold_total = counts.pred_total, counts.gold_total
    if pred_total == 0 and gold_total == 0:
        return F1Score(1.0, 1.0, 1.0)
    precision = counts.tp / pred_total if pred_total else 0.0
    recall = counts.tp / gold_total if gold_total else 0.0
    return F1Score(precision, recall, 2.0 * counts.tp / (pred_total + gold_total))


def index_predictions(
    dialogues: Sequence[Dialogue], predictions: Iterable[PredictionRecord]
) -> dict:
    """Group predictions as {dialogue_id: {turn_index: record}}.

    Predictions referencing a dialogue or turn absent from gold are
    collected and reported together as an ingestion error.
    """
    turn_count = {d.dialogue_id: len(d.turns) for d in dialogues}
    indexed: dict[str, dict[int, PredictionRecord]] = {
        d.dialogue_id: {} for d in dialogues
    }
    offenders = []
    for record in predictions:
        limit = turn_count.get(record.dialogue_id)
        if limit is None:
            offenders.append(
                f"prediction for unknown dialogue {record.dialogue_id!r} "
                f"(turn {record.turn_index})"
            )
        elif not 1 <= record.turn_index <= limit:
            offenders.append(
                f"prediction for unknown turn {record.turn_index} of dialogue "
                f"{record.dialogue_id!r} (it has turns 1..{limit})"
            )
        else:
            indexed[record.dialogue_id][record.turn_index] = record
    if offenders:
        raise IngestionError(offenders)
    return indexed


def dialogue_turn_states(
    dialogue: Dialogue,
    turn_records: dict,
    pre_accumulated: bool = False,
) -> Iterator[tuple]:
    """Yield (turn_index, gold B_t, predicted B_t, record) for every turn.

    Gold states accumulate turn beliefs with last-write-wins. Predicted
    states accumulate the same way from turn-level records; a turn with
    no record contributes nothing. Under pre_accumulated the record is
    taken as the full state and carried forward over gaps, which is what
    turn-level accumulation would have produced for a silent turn.
    """
    gold_state: dict = {}
    pred_state: dict = {}
    for turn in dialogue.turns:
        gold_state.update(turn.belief.pairs)
        record = turn_records.get(turn.turn_index)
        if record is not None:
            if pre_accumulated:
                pred_state = dict(record.belief)
            else:
                pred_state.update(record.belief)
        yield turn.turn_index, dict(gold_state), dict(pred_state), record


def _dialogue_counts(
    dialogue: Dialogue,
    turn_records: dict,
    mode: str,
    resources: PhoneticsResources | None,
    pre_accumulated: bool,
) -> MatchCounts:
    counts = MatchCounts.zero()
    for _, gold_state, pred_state, _ in dialogue_turn_states(
        dialogue, turn_records, pre_accumulated
    ):
        if mode == "exact":
            counts = counts + exact_match_counts(gold_state, pred_state)
        else:
            counts = counts + phoneme_match_counts(gold_state, pred_state, resources)
    return counts


def corpus_match_counts(
    dialogues: Sequence[Dialogue],
    predictions: Iterable[PredictionRecord],
    mode: str = "exact",
    resources: PhoneticsResources | None = None,
    pre_accumulated: bool = False,
    jobs: int = 1,
) -> MatchCounts:
    """Micro-aggregated counts over every turn of every dialogue.

    With jobs > 1 dialogues are evaluated concurrently; the reduction
    always runs in dialogue_id order, so results are identical to the
    sequential run.
    """
    if mode not in ("exact", "phoneme"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "phoneme" and resources is None:
        raise ValueError("phoneme mode needs phonetics resources")
    indexed = index_predictions(dialogues, predictions)
    ordered = sorted(dialogues, key=lambda d: d.dialogue_id)

    def job(dialogue: Dialogue) -> MatchCounts:
        return _dialogue_counts(
            dialogue, indexed[dialogue.dialogue_id], mode, resources, pre_accumulated
        )

    if jobs > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_dialogue = list(pool.map(job, ordered))
    else:
        per_dialogue = [job(dialogue) for dialogue in ordered]
    total = MatchCounts.zero()
    for counts in per_dialogue:
        total = total + counts
    return total


def corpus_f1(
    dialogues: Sequence[Dialogue],
    predictions: Iterable[PredictionRecord],
    mode: str = "exact",
    resources: PhoneticsResources | None = None,
    pre_accumulated: bool = False,
    jobs: int = 1,
) -> F1Score:
    """One corpus-level F1 from the micro-aggregated counts."""
    return f1_from_counts(
        corpus_match_counts(
            dialogues, predictions, mode, resources, pre_accumulated, jobs
        )
    )


# ---------------------------------------------------------------------------
# WER / CER


@dataclass(frozen=True)
class ErrorRateResult:
    substitutions: int
    insertions: int
    deletions: int
    reference_length: int
    rate: float
    empty_reference: bool = False

    @property
    def edits(self) -> int:
        return self.substitutions + self.insertions + self.deletions


def scoring_form(text: str) -> str:
    """Canonicalize a transcript for error-rate scoring.

    Mirrors the slot-value canonicalization token by token: lowercase,
    collapsed whitespace, terminal punctuation stripped per token.
    """
    tokens = (canonicalize_value(token) for token in text.split())
    return " ".join(token for token in tokens if token)


def _edit_counts(reference: Sequence, hypothesis: Sequence) -> tuple:
    """(substitutions, insertions, deletions) of one minimal edit script.

    Full DP matrix with a deterministic backtrace (diagonal, then
    deletion, then insertion) so repeated runs split ties identically.
    """
    n, m = len(reference), len(hypothesis)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        table[i][0] = i
    for j in range(m + 1):
        table[0][j] = j
    for i in range(1, n + 1):
        row = table[i]
        prev = table[i - 1]
        ref_item = reference[i - 1]
        for j in range(1, m + 1):
            row[j] = min(
                prev[j - 1] + (0 if ref_item == hypothesis[j - 1] else 1),
                prev[j] + 1,
                row[j - 1] + 1,
            )
    subs = inserts = deletes = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and table[i][j] == table[i - 1][j - 1] + (
            0 if reference[i - 1] == hypothesis[j - 1] else 1
        ):
            if reference[i - 1] != hypothesis[j - 1]:
                subs += 1
            i -= 1
            j -= 1
        elif i > 0 and table[i][j] == table[i - 1][j] + 1:
            deletes += 1
            i -= 1
        else:
            inserts += 1
            j -= 1
    return subs, inserts, deletes


def _error_rate(reference: Sequence, hypothesis: Sequence) -> ErrorRateResult:
    subs, inserts, deletes = _edit_counts(reference, hypothesis)
    edits = subs + inserts + deletes
    if reference:
        rate = edits / len(reference)
    else:
        # no reference to divide by: every hypothesis item is an insertion
        rate = float(edits)
    return ErrorRateResult(
        substitutions=subs,
        insertions=inserts,
        deletions=deletes,
        reference_length=len(reference),
        rate=rate,
        empty_reference=not reference,
    )


def word_error_rate(reference: str, hypothesis: str) -> ErrorRateResult:
    """Uniform-cost Levenshtein over whitespace tokens; rate may exceed 1."""
    return _error_rate(scoring_form(reference).split(), scoring_form(hypothesis).split())


def char_error_rate(reference: str, hypothesis: str) -> ErrorRateResult:
    """As word_error_rate over characters, spaces included."""
    return _error_rate(list(scoring_form(reference)), list(scoring_form(hypothesis)))


def aggregate_error_rates(results: Sequence[ErrorRateResult]) -> ErrorRateResult:
    """Corpus rate: total edits over total reference length."""
    subs = sum(r.substitutions for r in results)
    inserts = sum(r.insertions for r in results)
    deletes = sum(r.deletions for r in results)
    ref_len = sum(r.reference_length for r in results)
    edits = subs + inserts + deletes
    rate = edits / ref_len if ref_len else float(edits)
    return ErrorRateResult(
        substitutions=subs,
        insertions=inserts,
        deletions=deletes,
        reference_length=ref_len,
        rate=rate,
        empty_reference=ref_len == 0,
    )
