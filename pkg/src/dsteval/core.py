"""Dialogue, turn, and belief-state model shared by the metrics and the harness.

A belief state is a plain mapping from SlotName to a canonicalized value
string. Turn-level states (what changed this turn) are accumulated into
dialogue-level states (everything known so far) with last-write-wins
semantics. All types are treated as immutable after construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

_WS_RUN = re.compile(r"\s+")
_TERMINAL_PUNCT = ".,!?;"

# MultiWOZ sentinel values meaning "slot not filled"; dropped at ingestion
# so that absence and the sentinel count identically.
NONE_VALUES = frozenset({"none", "not mentioned"})


class IngestionError(Exception):
    """One or more input records failed validation.

    Carries the full list of problems so batch runs can report everything
    at once instead of dying on the first bad record.
    """

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        summary = f"{len(self.errors)} ingestion error(s)"
        super().__init__(summary if len(self.errors) != 1 else self.errors[0])


class ResourceError(Exception):
    """A resource file (feature table, lexicon, rules, ontology) is unusable."""


def canonicalize_value(raw: str) -> str:
    """Normalize a slot value for comparison.

    Lowercases, trims, collapses internal whitespace runs, and strips
    terminal punctuation (.,!?;). Interior colons and hyphens survive so
    times ("15:30") and codes ("cb17ag") stay intact. All-whitespace input
    comes back empty; callers treat empty as "no value".
    """
    text = _WS_RUN.sub(" ", raw.strip().lower())
    return text.rstrip(_TERMINAL_PUNCT).rstrip()


@dataclass(frozen=True, order=True)
class SlotName:
    """A typed field identified as "domain-slot", e.g. hotel-area."""

    domain: str
    slot: str

    def __str__(self) -> str:
        return f"{self.domain}-{self.slot}"

    @classmethod
    def parse(cls, raw: str) -> "SlotName":
        text = _WS_RUN.sub(" ", raw.strip().lower())
        if text.count("-") != 1:
            raise ValueError(
                f"slot name {raw!r} must be 'domain-slot' with exactly one hyphen"
            )
        domain, slot = (part.strip() for part in text.split("-"))
        if not domain or not slot:
            raise ValueError(f"slot name {raw!r} has an empty domain or slot part")
        return cls(domain, slot)


# A belief state is just dict[SlotName, str]; the alias is for signatures.
BeliefState = dict


def belief_from_raw(raw: Mapping[str, str]) -> dict[SlotName, str]:
    """Canonicalize a raw {"domain-slot": value} mapping into a belief state.

    Values equal to the MultiWOZ "none" sentinels (or empty after
    canonicalization) are dropped. When a slot occurs more than once the
    last occurrence in input order wins, matching map semantics.
    """
    state: dict[SlotName, str] = {}
    for key, value in raw.items():
        slot = SlotName.parse(key)
        canon = canonicalize_value(value)
        if not canon or canon in NONE_VALUES:
            state.pop(slot, None)
            continue
        state[slot] = canon
    return state


@dataclass(frozen=True)
class TurnBelief:
    """The turn-level state b_t: only what the turn itself asserts."""

    turn_index: int
    pairs: dict


@dataclass(frozen=True)
class Turn:
    turn_index: int
    system_utterance: str
    user_utterance: str
    belief: TurnBelief


@dataclass(frozen=True)
class Dialogue:
    dialogue_id: str
    turns: tuple


@dataclass(frozen=True)
class PredictionRecord:
    """One tracker output: the predicted belief for a single turn.

    belief is turn-level (b_t) unless the run is flagged pre-accumulated,
    in which case it is the full accumulated state B_t. asr_hypothesis is
    the recognizer transcript of the user utterance when the upstream
    system had one.
    """

    dialogue_id: str
    turn_index: int
    belief: dict
    asr_hypothesis: str | None = None


def accumulate_beliefs(
    turn_beliefs: Sequence[TurnBelief],
    up_to_turn: int,
    dialogue_id: str | None = None,
) -> dict[SlotName, str]:
    """Union of b_1..b_{up_to_turn}; later turns override earlier ones.

    This is the accumulated state B_t a tracker is scored on: every slot
    mentioned so far, carrying the value from the latest turn that set it.
    up_to_turn 0 is the state before anything was said: empty. The input
    sequence is not modified.
    """
    if up_to_turn < 0 or up_to_turn > len(turn_beliefs):
        where = f" of dialogue {dialogue_id!r}" if dialogue_id else ""
        raise IndexError(
            f"turn {up_to_turn} outside range 0..{len(turn_beliefs)}{where}"
        )
    state: dict[SlotName, str] = {}
    for belief in turn_beliefs[:up_to_turn]:
        state.update(belief.pairs)
    return state
