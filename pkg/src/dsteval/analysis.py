"""Error taxonomy, phonetic near-miss rate, and per-answer-type accuracy.

Three error types partition every mistake a tracker makes on a state:
type 1 is the right slot with the wrong value, type 2 a gold slot the
prediction missed, type 3 a predicted slot gold never had. By
construction type1+type2 equals the comparison's FN and type1+type3 its
FP, so the breakdown always reconciles with the match counts.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Dialogue, PredictionRecord, SlotName, canonicalize_value
from .metrics import dialogue_turn_states, index_predictions
from .phonetics import G2PError, PhoneticsResources, ResourceError
from .textnorm import CARDINAL_WORDS

ANSWER_TYPES = ("name", "categorical", "number", "time")
SLOT_KINDS = ("open_name", "closed_set", "numeric", "time")

_CLOCK_VALUE = re.compile(r"^\d{1,2}:\d{2}$")


@dataclass(frozen=True)
class ErrorBreakdown:
    type1: int  # slot right, value wrong
    type2: int  # gold slot missed
    type3: int  # spurious prediction

    @property
    def total_errors(self) -> int:
        return self.type1 + self.type2 + self.type3

    def __add__(self, other: "ErrorBreakdown") -> "ErrorBreakdown":
        return ErrorBreakdown(
            self.type1 + other.type1,
            self.type2 + other.type2,
            self.type3 + other.type3,
        )


def classify_errors(gold: dict, pred: dict) -> ErrorBreakdown:
    """Sort one state comparison's mistakes into the three types."""
    type1 = sum(1 for slot, value in pred.items() if slot in gold and gold[slot] != value)
    type2 = sum(1 for slot in gold if slot not in pred)
    type3 = sum(1 for slot in pred if slot not in gold)
    return ErrorBreakdown(type1, type2, type3)


def wrong_value_pairs(gold: dict, pred: dict) -> list:
    """The (gold value, predicted value) pairs behind each type-1 error."""
    return [
        (gold[slot], value)
        for slot, value in pred.items()
        if slot in gold and gold[slot] != value
    ]


def near_miss_count(
    pairs: Iterable[tuple],
    resources: PhoneticsResources,
    threshold: float = 0.02,
) -> int:
    """How many wrong-value pairs sound nearly identical (d < threshold).

    A pair that cannot be rendered as phonemes counts as not-near-miss.
    """
    count = 0
    for gold_value, pred_value in pairs:
        try:
            if resources.distance(gold_value, pred_value) < threshold:
                count += 1
        except G2PError:
            continue
    return count


def near_miss_rate(
    pairs: Sequence[tuple],
    resources: PhoneticsResources,
    threshold: float = 0.02,
) -> float:
    """Fraction of type-1 pairs under the distance threshold; 0 when empty."""
    if not pairs:
        return 0.0
    return near_miss_count(pairs, resources, threshold) / len(pairs)


@dataclass(frozen=True)
class OntologySlot:
    """What kind of answers a slot takes; values only set for closed_set."""

    kind: str
    values: frozenset | None = None


# SlotOntology is a plain mapping from SlotName to OntologySlot.
SlotOntology = dict


def load_ontology(path: str) -> dict:
    """Load the {"domain-slot": {"kind": ..., "values": [...]}} JSON file."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as err:
        raise ResourceError(f"cannot read ontology {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ResourceError(f"{path}: invalid JSON: {err}") from err
    if not isinstance(raw, dict):
        raise ResourceError(f"{path}: expected a JSON object at the top level")
    ontology: dict[SlotName, OntologySlot] = {}
    for key, spec in raw.items():
        try:
            slot = SlotName.parse(key)
        except ValueError as err:
            raise ResourceError(f"{path}: bad slot name {key!r}: {err}") from err
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ResourceError(f"{path}: {key!r} needs a 'kind' field")
        kind = spec["kind"]
        if kind not in SLOT_KINDS:
            raise ResourceError(
                f"{path}: {key!r} has unknown kind {kind!r}; expected one of {SLOT_KINDS}"
            )
        values = None
        if kind == "closed_set":
            listed = spec.get("values") or []
            values = frozenset(canonicalize_value(v) for v in listed)
            if not values:
                raise ResourceError(f"{path}: closed_set slot {key!r} has no values")
        ontology[slot] = OntologySlot(kind=kind, values=values)
    return ontology


def _is_cardinal_phrase(value: str) -> bool:
    tokens = value.split()
    return bool(tokens) and all(token in CARDINAL_WORDS for token in tokens)


def answer_type_of(slot: SlotName, value: str, ontology: dict) -> str:
    """Assign one of the four answer types, by precedence.

    Time (clock-shaped value or a time slot) beats Number (digits, a
    spelled-out cardinal, or a numeric slot) beats Categorical (slot with
    a closed value set) beats the open-vocabulary Name fallback. Slots
    missing from the ontology are typed from the value alone.
    """
    spec = ontology.get(slot)
    kind = spec.kind if spec else None
    if _CLOCK_VALUE.match(value) or kind == "time":
        return "time"
    if value.isdigit() or _is_cardinal_phrase(value) or kind == "numeric":
        return "number"
    if kind == "closed_set":
        return "categorical"
    return "name"


@dataclass(frozen=True)
class CategoryStats:
    correct: int
    total: int

    @property
    def accuracy(self) -> float | None:
        return self.correct / self.total if self.total else None

    def __add__(self, other: "CategoryStats") -> "CategoryStats":
        return CategoryStats(self.correct + other.correct, self.total + other.total)


@dataclass(frozen=True)
class AnswerTypeReport:
    """Per-category accuracy plus each category's share of the gold pairs."""

    categories: dict

    @property
    def gold_pairs(self) -> int:
        return sum(stats.total for stats in self.categories.values())

    def distribution(self) -> dict:
        total = self.gold_pairs
        return {
            name: (stats.total / total if total else 0.0)
            for name, stats in self.categories.items()
        }


def empty_category_stats() -> dict:
    return {name: CategoryStats(0, 0) for name in ANSWER_TYPES}


def tally_answer_types(
    gold: dict, pred: dict, ontology: dict, into: dict
) -> dict:
    """Add one state comparison's per-category counts into a tally dict."""
    for slot, value in gold.items():
        category = answer_type_of(slot, value, ontology)
        stats = into[category]
        into[category] = CategoryStats(
            stats.correct + (1 if pred.get(slot) == value else 0),
            stats.total + 1,
        )
    return into


def per_type_accuracy(
    dialogues: Sequence[Dialogue],
    predictions: Iterable[PredictionRecord],
    ontology: dict,
    pre_accumulated: bool = False,
) -> AnswerTypeReport:
    """Exact-match accuracy for each answer type over the whole corpus.

    Every gold pair at every evaluated (accumulated) turn is assigned one
    category; it counts correct when the predicted state holds the same
    slot with exactly the same value.
    """
    indexed = index_predictions(dialogues, predictions)
    tally = empty_category_stats()
    for dialogue in sorted(dialogues, key=lambda d: d.dialogue_id):
        for _, gold_state, pred_state, _ in dialogue_turn_states(
            dialogue, indexed[dialogue.dialogue_id], pre_accumulated
        ):
            tally_answer_types(gold_state, pred_state, ontology, tally)
    return AnswerTypeReport(categories=tally)
