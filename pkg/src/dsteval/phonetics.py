"""Pronunciations and the feature-weighted phonetic edit distance.

Words become ARPAbet phoneme sequences by lexicon lookup with a
deterministic letter-to-sound fallback; sequences are compared with a
Levenshtein alignment whose substitution cost counts disagreeing
articulatory features. The normalized distance d is in [0,1] so 1-d can
serve directly as partial credit for a slot value.

All resources are immutable after load and every operation here is a
pure function, so everything is safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources as importlib_resources

from .core import ResourceError

TERNARY = ("+", "-", "0")
UNSPECIFIED = "0"


class G2PError(ValueError):
    """A word cannot be rendered as phonemes."""


def default_resource_path(name: str) -> str:
    """Path of a data file shipped inside the package."""
    return str(importlib_resources.files("dsteval").joinpath("data", name))


@dataclass(frozen=True)
class FeatureTable:
    """Articulatory feature rows keyed by phoneme symbol, plus pair costs.

    costs holds the precomputed substitution cost for every ordered symbol
    pair; building it once at load keeps the DP inner loop cheap.
    """

    feature_names: tuple[str, ...]
    rows: dict
    costs: dict

    @property
    def width(self) -> int:
        return len(self.feature_names)


def _pair_cost(row_a: tuple, row_b: tuple, width: int) -> float:
    # counted in half-points: 2 per specified disagreement, 1 when exactly
    # one side is unspecified
    halves = 0
    for a, b in zip(row_a, row_b):
        if a == b:
            continue
        if a == UNSPECIFIED or b == UNSPECIFIED:
            halves += 1
        else:
            halves += 2
    return halves / (2.0 * width)


def load_feature_table(path: str) -> FeatureTable:
    """Load the phoneme feature TSV and precompute all pairwise costs.

    Validates the invariants the distance relies on: constant row width,
    ternary cells, and no two symbols sharing a feature vector (otherwise
    distinct segments could sit at distance zero).
    """
    names: tuple[str, ...] | None = None
    rows: dict[str, tuple[str, ...]] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cells = line.split("\t")
                if names is None:
                    if len(cells) < 2:
                        raise ResourceError(f"{path}:{lineno}: header needs features")
                    names = tuple(cells[1:])
                    if len(set(names)) != len(names):
                        raise ResourceError(f"{path}:{lineno}: duplicate feature names")
                    continue
                symbol = cells[0]
                if not symbol:
                    raise ResourceError(f"{path}:{lineno}: empty phoneme symbol")
                if symbol in rows:
                    raise ResourceError(f"{path}:{lineno}: duplicate symbol {symbol!r}")
                vector = tuple(cells[1:])
                if len(vector) != len(names):
                    raise ResourceError(
                        f"{path}:{lineno}: {symbol!r} has {len(vector)} cells, "
                        f"expected {len(names)}"
                    )
                bad = [cell for cell in vector if cell not in TERNARY]
                if bad:
                    raise ResourceError(
                        f"{path}:{lineno}: {symbol!r} has non-ternary cells {bad}"
                    )
                rows[symbol] = vector
    except OSError as err:
        raise ResourceError(f"cannot read feature table {path}: {err}") from err
    if names is None or not rows:
        raise ResourceError(f"{path}: no feature rows found")

    seen_vectors: dict[tuple, str] = {}
    for symbol, vector in rows.items():
        clash = seen_vectors.get(vector)
        if clash is not None:
            raise ResourceError(
                f"{path}: {symbol!r} and {clash!r} share a feature vector; "
                "rows must be unique"
            )
        seen_vectors[vector] = symbol

    width = len(names)
    costs: dict[tuple[str, str], float] = {}
    for a, row_a in rows.items():
        for b, row_b in rows.items():
            costs[(a, b)] = 0.0 if a == b else _pair_cost(row_a, row_b, width)
    return FeatureTable(feature_names=names, rows=rows, costs=costs)


def substitution_cost(a: str, b: str, table: FeatureTable) -> float:
    """Fraction of the feature inventory on which two segments disagree.

    Identical symbols cost 0; a specified-vs-unspecified position counts
    half. Symmetric by construction and bounded by 1.
    """
    try:
        return table.costs[(a, b)]
    except KeyError:
        missing = a if a not in table.rows else b
        raise ResourceError(f"phoneme {missing!r} is not in the feature table")


def load_ipa_map(path: str, table: FeatureTable) -> dict[str, str]:
    """Load the ARPAbet->IPA display map and check it matches the table 1:1."""
    mapping: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cells = line.split("\t")
                if len(cells) != 2 or not cells[0] or not cells[1]:
                    raise ResourceError(f"{path}:{lineno}: expected symbol<TAB>ipa")
                if cells[0] in mapping:
                    raise ResourceError(f"{path}:{lineno}: duplicate {cells[0]!r}")
                mapping[cells[0]] = cells[1]
    except OSError as err:
        raise ResourceError(f"cannot read IPA map {path}: {err}") from err
    if set(mapping) != set(table.rows):
        raise ResourceError(f"{path}: IPA map does not cover the feature table 1:1")
    if len(set(mapping.values())) != len(mapping):
        raise ResourceError(f"{path}: IPA labels are not unique")
    return mapping


_STRESS_DIGITS = re.compile(r"[0-9]+$")


def load_lexicon(path: str, table: FeatureTable) -> dict[str, tuple]:
    """Read a CMU-format pronunciation dictionary.

    Headwords are lowercased, stress digits are stripped from phonemes,
    ';;;' comment lines are skipped, and parenthesized alternates like
    WORD(2) are ignored so the first pronunciation wins. Every phoneme
    must exist in the feature table.
    """
    entries: dict[str, tuple] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.strip()
                if not line or line.startswith(";;;"):
                    continue
                parts = line.split()
                word = parts[0].lower()
                if "(" in word:
                    continue
                phonemes = tuple(_STRESS_DIGITS.sub("", p) for p in parts[1:])
                if not phonemes:
                    raise ResourceError(f"{path}:{lineno}: {word!r} has no phonemes")
                for symbol in phonemes:
                    if symbol not in table.rows:
                        raise ResourceError(
                            f"{path}:{lineno}: {word!r} uses unknown phoneme {symbol!r}"
                        )
                entries[word] = phonemes
    except OSError as err:
        raise ResourceError(f"cannot read lexicon {path}: {err}") from err
    return entries


@dataclass(frozen=True)
class LtsRule:
    """One letter-to-sound rule: chunk -> phonemes, guarded by contexts.

    left matches the end of the letters already consumed, right matches
    the start of the letters still ahead; either may be None (no guard).
    """

    chunk: str
    phonemes: tuple
    left: re.Pattern | None
    right: re.Pattern | None


def load_g2p_rules(path: str, table: FeatureTable) -> tuple:
    """Load fallback rules, ordered longest chunk first then file order."""
    rules: list[LtsRule] = []
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cells = line.split("\t")
                chunk = cells[0]
                if not chunk:
                    raise ResourceError(f"{path}:{lineno}: empty grapheme chunk")
                phonemes = tuple(cells[1].split()) if len(cells) > 1 else ()
                for symbol in phonemes:
                    if symbol not in table.rows:
                        raise ResourceError(
                            f"{path}:{lineno}: unknown phoneme {symbol!r}"
                        )
                try:
                    left = (
                        re.compile(f"(?:{cells[2]})$")
                        if len(cells) > 2 and cells[2]
                        else None
                    )
                    right = (
                        re.compile(f"^(?:{cells[3]})")
                        if len(cells) > 3 and cells[3]
                        else None
                    )
                except re.error as err:
                    raise ResourceError(f"{path}:{lineno}: bad context regex: {err}")
                rules.append(LtsRule(chunk, phonemes, left, right))
    except OSError as err:
        raise ResourceError(f"cannot read letter-to-sound rules {path}: {err}") from err
    if not rules:
        raise ResourceError(f"{path}: no rules found")
    # stable sort keeps file order within each chunk length
    rules.sort(key=lambda rule: -len(rule.chunk))
    return tuple(rules)


def grapheme_to_phoneme(word: str, lexicon: dict, rules: tuple) -> tuple:
    """Render one word as a phoneme sequence, ignoring case.

    Lexicon hits are returned verbatim; anything else goes through the
    letter-to-sound rules, scanning left to right and taking the first
    applicable rule (longest chunk, then file order) at each position.
    """
    if not word:
        return ()
    word = word.lower()
    for ch in word:
        if ch.isdigit():
            raise G2PError(
                f"digit {ch!r} in {word!r}: verbalize numbers before G2P"
            )
    entry = lexicon.get(word)
    if entry is not None:
        return entry
    phonemes: list[str] = []
    i = 0
    while i < len(word):
        for rule in rules:
            if not word.startswith(rule.chunk, i):
                continue
            if rule.left and not rule.left.search(word[:i]):
                continue
            if rule.right and not rule.right.search(word[i + len(rule.chunk):]):
                continue
            phonemes.extend(rule.phonemes)
            i += len(rule.chunk)
            break
        else:
            raise G2PError(f"no letter-to-sound rule covers {word[i]!r} in {word!r}")
    if not phonemes:
        raise G2PError(f"word {word!r} produced an empty phoneme sequence")
    return tuple(phonemes)


def phrase_to_phonemes(text: str, lexicon: dict, rules: tuple) -> tuple:
    """Phonemes of a whole phrase: per-word G2P, concatenated, no boundary."""
    sequence: list[str] = []
    for word in text.split():
        sequence.extend(grapheme_to_phoneme(word, lexicon, rules))
    return tuple(sequence)


def phonetic_edit_distance(s1: tuple, s2: tuple, table: FeatureTable) -> float:
    """Minimum alignment cost: indels cost 1, substitutions cost features.

    Plain two-row dynamic program; the result is the exact optimum and,
    because substitution costs are a metric bounded by the indel cost,
    the distance itself satisfies the triangle inequality.
    """
    for symbol in s1 + s2:
        if symbol not in table.rows:
            raise ResourceError(f"phoneme {symbol!r} is not in the feature table")
    if not s1:
        return float(len(s2))
    if not s2:
        return float(len(s1))
    costs = table.costs
    previous = [float(j) for j in range(len(s2) + 1)]
    for i, a in enumerate(s1, 1):
        current = [float(i)]
        for j, b in enumerate(s2, 1):
            substituted = previous[j - 1] + costs[(a, b)]
            deleted = previous[j] + 1.0
            inserted = current[j - 1] + 1.0
            current.append(min(substituted, deleted, inserted))
        previous = current
    return previous[-1]


def normalized_phonetic_distance(
    v1: str,
    v2: str,
    lexicon: dict,
    rules: tuple,
    table: FeatureTable,
) -> float:
    """Phonetic distance between two values, scaled into [0,1].

    Raw alignment cost divided by the longer sequence length; two empty
    renderings are distance 0, exactly one empty is distance 1.
    """
    p1 = phrase_to_phonemes(v1, lexicon, rules)
    p2 = phrase_to_phonemes(v2, lexicon, rules)
    if not p1 and not p2:
        return 0.0
    if not p1 or not p2:
        return 1.0
    raw = phonetic_edit_distance(p1, p2, table)
    return min(1.0, max(0.0, raw / max(len(p1), len(p2))))


@dataclass(frozen=True)
class PhoneticsResources:
    """Everything the phonetic metric needs, loaded once and shared."""

    table: FeatureTable
    lexicon: dict
    rules: tuple
    ipa: dict

    def phonemes(self, text: str) -> tuple:
        return phrase_to_phonemes(text, self.lexicon, self.rules)

    def distance(self, v1: str, v2: str) -> float:
        return normalized_phonetic_distance(
            v1, v2, self.lexicon, self.rules, self.table
        )

    def ipa_string(self, sequence: tuple) -> str:
        return "".join(self.ipa[symbol] for symbol in sequence)


def load_phonetics(
    features_path: str | None = None,
    lexicon_path: str | None = None,
    rules_path: str | None = None,
    ipa_path: str | None = None,
) -> PhoneticsResources:
    """Load the feature table, lexicon, rules, and IPA map as one bundle.

    Any path left as None falls back to the packaged default data file.
    """
    table = load_feature_table(features_path or default_resource_path("phoneme_features.tsv"))
    lexicon = load_lexicon(lexicon_path or default_resource_path("lexicon.dict"), table)
    rules = load_g2p_rules(rules_path or default_resource_path("g2p_rules.tsv"), table)
    ipa = load_ipa_map(ipa_path or default_resource_path("arpabet_ipa.tsv"), table)
    return PhoneticsResources(table=table, lexicon=lexicon, rules=rules, ipa=ipa)
