"""Batch ingestion, corpus evaluation, and report emission.

Gold corpora are JSON: {"dialogues": [{"dialogue_id", "turns": [{"turn",
"system", "user", "state"}]}]} where "state" is the turn-level belief.
Predictions are JSON lines, one object per turn: {"dialogue_id", "turn",
"state", "asr_hypothesis"?}; unknown fields are ignored. Ingestion
collects every validation problem before aborting so a batch run reports
all of them at once.

Reports are deterministic: keys are sorted, no timestamps, and resource
digests are embedded, so byte-identical inputs and flags always produce
byte-identical JSON, parallel or not.
"""

from __future__ import annotations

import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .analysis import (
    ANSWER_TYPES,
    AnswerTypeReport,
    ErrorBreakdown,
    classify_errors,
    empty_category_stats,
    near_miss_count,
    tally_answer_types,
    wrong_value_pairs,
)
from .core import (
    Dialogue,
    IngestionError,
    PredictionRecord,
    SlotName,
    Turn,
    TurnBelief,
    canonicalize_value,
    NONE_VALUES,
)
from .metrics import (
    ErrorRateResult,
    MatchCounts,
    aggregate_error_rates,
    char_error_rate,
    dialogue_turn_states,
    exact_match_counts,
    f1_from_counts,
    index_predictions,
    phoneme_match_counts,
    word_error_rate,
)
from .phonetics import PhoneticsResources

MODES = ("exact", "phoneme", "both")


def file_digest(path: str) -> str:
    with open(path, "rb") as handle:
        return "sha256:" + hashlib.sha256(handle.read()).hexdigest()


# ---------------------------------------------------------------------------
# ingestion


def _parse_state(raw: object, where: str, errors: list) -> dict:
    state: dict[SlotName, str] = {}
    if not isinstance(raw, dict):
        errors.append(f"{where}: state must be an object, got {type(raw).__name__}")
        return state
    for key, value in raw.items():
        if not isinstance(value, str):
            errors.append(f"{where}.{key}: value must be a string")
            continue
        try:
            slot = SlotName.parse(key)
        except ValueError as err:
            errors.append(f"{where}.{key}: {err}")
            continue
        canon = canonicalize_value(value)
        if not canon or canon in NONE_VALUES:
            state.pop(slot, None)
            continue
        state[slot] = canon
    return state


def load_dialogues(path: str) -> list:
    """Load and validate a gold corpus file.

    Every schema violation is collected with its JSON path; if any exist
    the whole load fails with the consolidated list.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as err:
        raise IngestionError([f"cannot read gold file {path}: {err}"]) from err
    except json.JSONDecodeError as err:
        raise IngestionError([f"{path}: invalid JSON: {err}"]) from err

    errors: list[str] = []
    if not isinstance(raw, dict) or not isinstance(raw.get("dialogues"), list):
        raise IngestionError([f"{path}: expected an object with a 'dialogues' list"])

    dialogues: list[Dialogue] = []
    seen_ids: dict[str, int] = {}
    for d_index, entry in enumerate(raw["dialogues"]):
        where = f"{path}: dialogues[{d_index}]"
        if not isinstance(entry, dict):
            errors.append(f"{where}: expected an object")
            continue
        dialogue_id = entry.get("dialogue_id")
        if not isinstance(dialogue_id, str) or not dialogue_id.strip():
            errors.append(f"{where}: missing or empty dialogue_id")
            continue
        if dialogue_id in seen_ids:
            errors.append(
                f"{where}: duplicate dialogue_id {dialogue_id!r} "
                f"(first seen at dialogues[{seen_ids[dialogue_id]}])"
            )
            continue
        seen_ids[dialogue_id] = d_index
        raw_turns = entry.get("turns")
        if not isinstance(raw_turns, list) or not raw_turns:
            errors.append(f"{where} ({dialogue_id}): turns must be a non-empty list")
            continue
        turns: list[Turn] = []
        for t_index, raw_turn in enumerate(raw_turns):
            turn_where = f"{where}.turns[{t_index}]"
            if not isinstance(raw_turn, dict):
                errors.append(f"{turn_where}: expected an object")
                continue
            number = raw_turn.get("turn")
            if number != t_index + 1:
                errors.append(
                    f"{turn_where}: dialogue {dialogue_id!r} turn indices must be "
                    f"contiguous from 1; expected {t_index + 1}, got {number!r}"
                )
                continue
            system = raw_turn.get("system")
            user = raw_turn.get("user")
            if not isinstance(system, str):
                errors.append(f"{turn_where}.system: must be a string")
                continue
            if not isinstance(user, str) or not user.strip():
                errors.append(f"{turn_where}.user: must be a non-empty string")
                continue
            pairs = _parse_state(raw_turn.get("state"), f"{turn_where}.state", errors)
            turns.append(
                Turn(
                    turn_index=number,
                    system_utterance=system,
                    user_utterance=user,
                    belief=TurnBelief(turn_index=number, pairs=pairs),
                )
            )
        if len(turns) == len(raw_turns):
            dialogues.append(Dialogue(dialogue_id=dialogue_id, turns=tuple(turns)))
    if errors:
        raise IngestionError(errors)
    return dialogues


def load_predictions(path: str) -> list:
    """Load a predictions JSONL file, consolidating all line errors."""
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as err:
        raise IngestionError([f"cannot read predictions file {path}: {err}"]) from err

    errors: list[str] = []
    records: list[PredictionRecord] = []
    first_line: dict[tuple, int] = {}
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        where = f"{path}:{lineno}"
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as err:
            errors.append(f"{where}: invalid JSON: {err}")
            continue
        if not isinstance(raw, dict):
            errors.append(f"{where}: expected a JSON object")
            continue
        dialogue_id = raw.get("dialogue_id")
        if not isinstance(dialogue_id, str) or not dialogue_id.strip():
            errors.append(f"{where}: missing or empty dialogue_id")
            continue
        turn = raw.get("turn")
        if not isinstance(turn, int) or isinstance(turn, bool) or turn < 1:
            errors.append(f"{where}: 'turn' must be an integer >= 1, got {turn!r}")
            continue
        key = (dialogue_id, turn)
        if key in first_line:
            errors.append(
                f"{where}: duplicates line {first_line[key]} for "
                f"dialogue {dialogue_id!r} turn {turn}"
            )
            continue
        first_line[key] = lineno
        hypothesis = raw.get("asr_hypothesis")
        if hypothesis is not None and not isinstance(hypothesis, str):
            errors.append(f"{where}: asr_hypothesis must be a string when present")
            continue
        state = _parse_state(raw.get("state"), f"{where}.state", errors)
        records.append(
            PredictionRecord(
                dialogue_id=dialogue_id,
                turn_index=turn,
                belief=state,
                asr_hypothesis=hypothesis,
            )
        )
    if errors:
        raise IngestionError(errors)
    return records


# ---------------------------------------------------------------------------
# corpus evaluation


@dataclass(frozen=True)
class _DialogueEval:
    """Everything one dialogue contributes to the corpus report."""

    dialogue_id: str
    turns: int
    exact: MatchCounts | None
    phoneme: MatchCounts | None
    errors: ErrorBreakdown
    type1_pairs: tuple
    tally: dict
    wer: tuple
    cer: tuple


@dataclass(frozen=True)
class EvalReport:
    """Corpus scores, analyses, and the metadata to reproduce them."""

    mode: str
    near_miss_threshold: float
    pre_accumulated: bool
    exact: object | None
    exact_counts: MatchCounts | None
    phoneme: object | None
    phoneme_counts: MatchCounts | None
    errors: ErrorBreakdown
    near_misses: int
    type1_pairs: int
    answer_types: AnswerTypeReport
    wer: ErrorRateResult | None
    cer: ErrorRateResult | None
    asr_turns: int
    per_dialogue: tuple
    metadata: dict

    @property
    def near_miss_rate(self) -> float:
        return self.near_misses / self.type1_pairs if self.type1_pairs else 0.0

    def json_dict(self) -> dict:
        errors = self.errors
        total_errors = errors.total_errors
        payload = {
            "exact": _score_dict(self.exact, self.exact_counts),
            "phoneme": _score_dict(self.phoneme, self.phoneme_counts),
            "errors": {
                "type1": errors.type1,
                "type2": errors.type2,
                "type3": errors.type3,
                "total": total_errors,
                "shares": {
                    "type1": errors.type1 / total_errors if total_errors else 0.0,
                    "type2": errors.type2 / total_errors if total_errors else 0.0,
                    "type3": errors.type3 / total_errors if total_errors else 0.0,
                },
            },
            "near_miss": {
                "threshold": self.near_miss_threshold,
                "wrong_value_pairs": self.type1_pairs,
                "near_misses": self.near_misses,
                "rate": self.near_miss_rate,
            },
            "answer_types": _answer_type_dict(self.answer_types),
            "asr": None,
            "per_dialogue": list(self.per_dialogue),
            "metadata": self.metadata,
        }
        if self.wer is not None and self.cer is not None:
            payload["asr"] = {
                "turns_scored": self.asr_turns,
                "wer": _rate_dict(self.wer),
                "cer": _rate_dict(self.cer),
            }
        return payload

    def json_bytes(self) -> bytes:
        text = json.dumps(self.json_dict(), sort_keys=True, indent=2, ensure_ascii=False)
        return (text + "\n").encode("utf-8")

    def table(self) -> str:
        return render_table(self)


def _score_dict(score, counts) -> dict | None:
    if score is None or counts is None:
        return None
    return {
        "precision": score.precision,
        "recall": score.recall,
        "f1": score.f1,
        "counts": _counts_dict(counts),
    }


def _counts_dict(counts: MatchCounts) -> dict:
    return {
        "tp": counts.tp,
        "fp": counts.fp,
        "fn": counts.fn,
        "pred_total": counts.pred_total,
        "gold_total": counts.gold_total,
        "common": counts.common,
    }


def _rate_dict(rate: ErrorRateResult) -> dict:
    return {
        "substitutions": rate.substitutions,
        "insertions": rate.insertions,
        "deletions": rate.deletions,
        "reference_length": rate.reference_length,
        "rate": rate.rate,
        "empty_reference": rate.empty_reference,
    }


def _answer_type_dict(report: AnswerTypeReport) -> dict:
    shares = report.distribution()
    return {
        name: {
            "correct": stats.correct,
            "total": stats.total,
            "accuracy": stats.accuracy,
            "share": shares[name],
        }
        for name, stats in report.categories.items()
    }


def _evaluate_dialogue(
    dialogue: Dialogue,
    turn_records: dict,
    mode: str,
    resources: PhoneticsResources,
    ontology: dict,
    pre_accumulated: bool,
) -> _DialogueEval:
    exact = MatchCounts.zero() if mode in ("exact", "both") else None
    phoneme = MatchCounts.zero() if mode in ("phoneme", "both") else None
    errors = ErrorBreakdown(0, 0, 0)
    pairs: list = []
    tally = empty_category_stats()
    wer: list[ErrorRateResult] = []
    cer: list[ErrorRateResult] = []
    turn_by_index = {turn.turn_index: turn for turn in dialogue.turns}
    for turn_index, gold_state, pred_state, record in dialogue_turn_states(
        dialogue, turn_records, pre_accumulated
    ):
        if exact is not None:
            exact = exact + exact_match_counts(gold_state, pred_state)
        if phoneme is not None:
            phoneme = phoneme + phoneme_match_counts(gold_state, pred_state, resources)
        errors = errors + classify_errors(gold_state, pred_state)
        pairs.extend(wrong_value_pairs(gold_state, pred_state))
        tally_answer_types(gold_state, pred_state, ontology, tally)
        if record is not None and record.asr_hypothesis is not None:
            reference = turn_by_index[turn_index].user_utterance
            wer.append(word_error_rate(reference, record.asr_hypothesis))
            cer.append(char_error_rate(reference, record.asr_hypothesis))
    return _DialogueEval(
        dialogue_id=dialogue.dialogue_id,
        turns=len(dialogue.turns),
        exact=exact,
        phoneme=phoneme,
        errors=errors,
        type1_pairs=tuple(pairs),
        tally=tally,
        wer=tuple(wer),
        cer=tuple(cer),
    )


def evaluate_corpus(
    dialogues: Sequence[Dialogue],
    predictions: Iterable[PredictionRecord],
    resources: PhoneticsResources,
    ontology: dict,
    mode: str = "both",
    near_miss_threshold: float = 0.02,
    pre_accumulated: bool = False,
    jobs: int = 1,
    metadata: dict | None = None,
) -> EvalReport:
    """Score a whole corpus and assemble the report.

    Dialogues may be evaluated in parallel (jobs > 1); reduction order is
    dialogue_id-sorted either way, so the report is identical bitwise.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    indexed = index_predictions(dialogues, predictions)
    ordered = sorted(dialogues, key=lambda d: d.dialogue_id)

    def job(dialogue: Dialogue) -> _DialogueEval:
        return _evaluate_dialogue(
            dialogue,
            indexed[dialogue.dialogue_id],
            mode,
            resources,
            ontology,
            pre_accumulated,
        )

    if jobs > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            evaluated = list(pool.map(job, ordered))
    else:
        evaluated = [job(dialogue) for dialogue in ordered]

    exact_counts = MatchCounts.zero() if mode in ("exact", "both") else None
    phoneme_counts = MatchCounts.zero() if mode in ("phoneme", "both") else None
    errors = ErrorBreakdown(0, 0, 0)
    all_pairs: list = []
    tally = empty_category_stats()
    wer_parts: list[ErrorRateResult] = []
    cer_parts: list[ErrorRateResult] = []
    rows = []
    for result in evaluated:
        if exact_counts is not None:
            exact_counts = exact_counts + result.exact
        if phoneme_counts is not None:
            phoneme_counts = phoneme_counts + result.phoneme
        errors = errors + result.errors
        all_pairs.extend(result.type1_pairs)
        for name in ANSWER_TYPES:
            tally[name] = tally[name] + result.tally[name]
        wer_parts.extend(result.wer)
        cer_parts.extend(result.cer)
        rows.append(
            {
                "dialogue_id": result.dialogue_id,
                "turns": result.turns,
                "exact": _counts_dict(result.exact) if result.exact else None,
                "phoneme": _counts_dict(result.phoneme) if result.phoneme else None,
                "errors": {
                    "type1": result.errors.type1,
                    "type2": result.errors.type2,
                    "type3": result.errors.type3,
                },
            }
        )

    near = near_miss_count(all_pairs, resources, near_miss_threshold)
    return EvalReport(
        mode=mode,
        near_miss_threshold=near_miss_threshold,
        pre_accumulated=pre_accumulated,
        exact=f1_from_counts(exact_counts) if exact_counts is not None else None,
        exact_counts=exact_counts,
        phoneme=f1_from_counts(phoneme_counts) if phoneme_counts is not None else None,
        phoneme_counts=phoneme_counts,
        errors=errors,
        near_misses=near,
        type1_pairs=len(all_pairs),
        answer_types=AnswerTypeReport(categories=tally),
        wer=aggregate_error_rates(wer_parts) if wer_parts else None,
        cer=aggregate_error_rates(cer_parts) if cer_parts else None,
        asr_turns=len(wer_parts),
        per_dialogue=tuple(rows),
        metadata=dict(metadata or {}),
    )


# ---------------------------------------------------------------------------
# rendering


def pct(value: float) -> str:
    return f"{100.0 * value:.2f}"


def render_table(report: EvalReport) -> str:
    lines = []
    meta = report.metadata
    turns = meta.get("turns")
    scope = f" over {turns} turns" if turns is not None else ""
    lines.append(f"Corpus scores (micro-aggregated{scope})")
    lines.append(f"  {'metric':<12} {'precision':>9} {'recall':>9} {'f1':>9}")
    for label, score in (("exact F1", report.exact), ("PhonemeF1", report.phoneme)):
        if score is not None:
            lines.append(
                f"  {label:<12} {pct(score.precision):>9} "
                f"{pct(score.recall):>9} {pct(score.f1):>9}"
            )
    lines.append("")
    lines.append("Match counts")
    lines.append(
        f"  {'mode':<9} {'tp':>10} {'fp':>6} {'fn':>6} "
        f"{'pred':>6} {'gold':>6} {'common':>7}"
    )
    for label, counts in (
        ("exact", report.exact_counts),
        ("phoneme", report.phoneme_counts),
    ):
        if counts is not None:
            lines.append(
                f"  {label:<9} {counts.tp:>10.4f} {counts.fp:>6} {counts.fn:>6} "
                f"{counts.pred_total:>6} {counts.gold_total:>6} {counts.common:>7}"
            )
    lines.extend(render_analysis_sections(report))
    return "\n".join(lines) + "\n"


def render_analysis_sections(report: EvalReport) -> list:
    lines = [""]
    errors = report.errors
    total = errors.total_errors
    lines.append("Error taxonomy")
    for label, count in (
        ("type 1 (wrong value)", errors.type1),
        ("type 2 (missed slot)", errors.type2),
        ("type 3 (spurious slot)", errors.type3),
    ):
        share = pct(count / total) if total else pct(0.0)
        lines.append(f"  {label:<24} {count:>6}  {share:>6}%")
    lines.append(
        f"  near misses: {report.near_misses}/{report.type1_pairs} wrong-value "
        f"pairs under d<{report.near_miss_threshold:g} "
        f"({pct(report.near_miss_rate)}%)"
    )
    lines.append("")
    lines.append("Answer types (exact-match accuracy)")
    shares = report.answer_types.distribution()
    lines.append(f"  {'type':<13} {'correct':>8} {'total':>6} {'accuracy':>9} {'share':>7}")
    for name in ANSWER_TYPES:
        stats = report.answer_types.categories[name]
        accuracy = pct(stats.accuracy) if stats.accuracy is not None else "-"
        lines.append(
            f"  {name:<13} {stats.correct:>8} {stats.total:>6} "
            f"{accuracy:>9} {pct(shares[name]):>6}%"
        )
    if report.wer is not None and report.cer is not None:
        lines.append("")
        lines.append(
            f"ASR quality over {report.asr_turns} turns: "
            f"WER {pct(report.wer.rate)}  CER {pct(report.cer.rate)}"
        )
    return lines


# ---------------------------------------------------------------------------
# run entry points (the CLI calls these)


def _resource_metadata(paths: dict) -> dict:
    return {
        name: {"path": str(path), "digest": file_digest(str(path))}
        for name, path in paths.items()
    }


def run_evaluate(
    gold_path: str,
    pred_path: str,
    resources: PhoneticsResources,
    ontology: dict,
    resource_paths: dict,
    mode: str = "both",
    near_miss_threshold: float = 0.02,
    pre_accumulated: bool = False,
    jobs: int = 1,
    report_path: str | None = None,
    quiet: bool = False,
    out=None,
) -> EvalReport:
    """Evaluate a prediction dump against a gold corpus and emit reports."""
    out = out if out is not None else sys.stdout
    dialogues = load_dialogues(gold_path)
    predictions = load_predictions(pred_path)
    metadata = {
        "mode": mode,
        "near_miss_threshold": near_miss_threshold,
        "pre_accumulated": pre_accumulated,
        "dialogues": len(dialogues),
        "turns": sum(len(d.turns) for d in dialogues),
        "predictions": len(predictions),
        "inputs": _resource_metadata({"gold": gold_path, "predictions": pred_path}),
        "resources": _resource_metadata(resource_paths),
    }
    report = evaluate_corpus(
        dialogues,
        predictions,
        resources,
        ontology,
        mode=mode,
        near_miss_threshold=near_miss_threshold,
        pre_accumulated=pre_accumulated,
        jobs=jobs,
        metadata=metadata,
    )
    if report_path:
        with open(report_path, "wb") as handle:
            handle.write(report.json_bytes())
    if not quiet:
        out.write(report.table())
    return report


def run_analyze(
    gold_path: str,
    pred_path: str,
    resources: PhoneticsResources,
    ontology: dict,
    resource_paths: dict,
    near_miss_threshold: float = 0.02,
    pre_accumulated: bool = False,
    jobs: int = 1,
    report_path: str | None = None,
    quiet: bool = False,
    out=None,
) -> dict:
    """Error and answer-type breakdown without the corpus scores."""
    out = out if out is not None else sys.stdout
    report = run_evaluate(
        gold_path,
        pred_path,
        resources,
        ontology,
        resource_paths,
        mode="exact",
        near_miss_threshold=near_miss_threshold,
        pre_accumulated=pre_accumulated,
        jobs=jobs,
        report_path=None,
        quiet=True,
        out=out,
    )
    full = report.json_dict()
    payload = {
        "errors": full["errors"],
        "near_miss": full["near_miss"],
        "answer_types": full["answer_types"],
        "metadata": {
            key: value
            for key, value in full["metadata"].items()
            if key != "mode"
        },
    }
    if report_path:
        text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
        with open(report_path, "wb") as handle:
            handle.write((text + "\n").encode("utf-8"))
    if not quiet:
        out.write("\n".join(render_analysis_sections(report)[1:]) + "\n")
    return payload


def run_normalize(
    in_path: str,
    out_path: str | None,
    misspellings: dict,
    reorder_rules: list,
    out=None,
) -> str:
    """Normalize a transcript file, preserving its format.

    Plain text is treated line by line; a gold-corpus JSON file gets its
    system and user utterances normalized in place. Returns the output
    text (and writes it to out_path when given, else to `out`).
    """
    from .textnorm import normalize_transcript

    try:
        with open(in_path, encoding="utf-8") as handle:
            content = handle.read()
    except OSError as err:
        raise IngestionError([f"cannot read input file {in_path}: {err}"]) from err

    document = None
    try:
        document = json.loads(content)
    except json.JSONDecodeError:
        pass

    if isinstance(document, dict) and isinstance(document.get("dialogues"), list):
        for dialogue in document["dialogues"]:
            for turn in dialogue.get("turns", []):
                for field in ("system", "user"):
                    if isinstance(turn.get(field), str):
                        turn[field] = normalize_transcript(
                            turn[field], misspellings, reorder_rules
                        )
        rendered = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    else:
        lines = content.splitlines()
        normalized = [
            normalize_transcript(line, misspellings, reorder_rules) for line in lines
        ]
        rendered = "\n".join(normalized) + ("\n" if normalized else "")

    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    elif out is not None:
        out.write(rendered)
    else:
        sys.stdout.write(rendered)
    return rendered


def _read_keyed_or_lines(path: str, errors: list):
    """Returns ("keyed", [(id, text)]) or ("lines", [text]) for a WER input."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw_lines = handle.read().splitlines()
    except OSError as err:
        raise IngestionError([f"cannot read file {path}: {err}"]) from err
    probe = next((line for line in raw_lines if line.strip()), None)
    keyed = False
    if probe is not None:
        try:
            parsed = json.loads(probe)
            keyed = isinstance(parsed, dict) and "id" in parsed and "text" in parsed
        except json.JSONDecodeError:
            keyed = False
    if not keyed:
        return "lines", raw_lines
    entries = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(raw_lines, 1):
        if not line.strip():
            continue
        where = f"{path}:{lineno}"
        try:
            parsed = json.loads(line)
        except json.JSONDecodeError as err:
            errors.append(f"{where}: invalid JSON: {err}")
            continue
        if not isinstance(parsed, dict) or "id" not in parsed or "text" not in parsed:
            errors.append(f"{where}: expected an object with 'id' and 'text'")
            continue
        key = str(parsed["id"])
        if key in seen:
            errors.append(f"{where}: duplicate id {key!r} (first at line {seen[key]})")
            continue
        seen[key] = lineno
        if not isinstance(parsed["text"], str):
            errors.append(f"{where}: 'text' must be a string")
            continue
        entries.append((key, parsed["text"]))
    return "keyed", entries


def run_wer(
    ref_path: str,
    hyp_path: str,
    level: str = "word",
    report_path: str | None = None,
    quiet: bool = False,
    out=None,
) -> dict:
    """Per-line and corpus error rates for two transcript files.

    Files are either line-aligned plain text or keyed JSON lines
    ({"id": ..., "text": ...}); both files must use the same convention.
    """
    if level not in ("word", "char"):
        raise ValueError(f"unknown level {level!r}; expected 'word' or 'char'")
    out = out if out is not None else sys.stdout
    errors: list[str] = []
    ref_kind, ref_entries = _read_keyed_or_lines(ref_path, errors)
    hyp_kind, hyp_entries = _read_keyed_or_lines(hyp_path, errors)
    if errors:
        raise IngestionError(errors)
    if ref_kind != hyp_kind:
        raise IngestionError(
            [
                f"mixed formats: {ref_path} is {ref_kind} but {hyp_path} is "
                f"{hyp_kind}; use line-aligned text or keyed JSON lines for both"
            ]
        )
    if ref_kind == "lines":
        if len(ref_entries) != len(hyp_entries):
            raise IngestionError(
                [
                    f"line count mismatch: {ref_path} has {len(ref_entries)} lines, "
                    f"{hyp_path} has {len(hyp_entries)}"
                ]
            )
        pairs = [
            (str(index + 1), ref, hyp)
            for index, (ref, hyp) in enumerate(zip(ref_entries, hyp_entries))
        ]
    else:
        hyp_by_id = dict(hyp_entries)
        ref_ids = {key for key, _ in ref_entries}
        missing = [key for key, _ in ref_entries if key not in hyp_by_id]
        extra = [key for key in hyp_by_id if key not in ref_ids]
        problems = [f"id {key!r} missing from {hyp_path}" for key in missing]
        problems += [f"id {key!r} missing from {ref_path}" for key in extra]
        if problems:
            raise IngestionError(problems)
        pairs = [(key, ref, hyp_by_id[key]) for key, ref in ref_entries]

    score = word_error_rate if level == "word" else char_error_rate
    per_line = [(key, score(ref, hyp)) for key, ref, hyp in pairs]
    aggregate = aggregate_error_rates([result for _, result in per_line])
    payload = {
        "level": level,
        "lines": [
            {"id": key, **_rate_dict(result)} for key, result in per_line
        ],
        "aggregate": _rate_dict(aggregate),
        "inputs": _resource_metadata({"reference": ref_path, "hypothesis": hyp_path}),
    }
    if report_path:
        text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
        with open(report_path, "wb") as handle:
            handle.write((text + "\n").encode("utf-8"))
    if not quiet:
        label = "WER" if level == "word" else "CER"
        lines = [f"{label} per line"]
        for key, result in per_line:
            lines.append(f"  {key:<12} {pct(result.rate):>8}")
        lines.append(
            f"  {'corpus':<12} {pct(aggregate.rate):>8}  "
            f"({aggregate.edits} edits / {aggregate.reference_length} reference "
            f"{'tokens' if level == 'word' else 'chars'})"
        )
        out.write("\n".join(lines) + "\n")
    return payload
