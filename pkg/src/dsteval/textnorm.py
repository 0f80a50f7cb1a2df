"""Transcript normalization: five composable rewriters and a fixed pipeline.

Order matters and is fixed in normalize_transcript: special characters,
identifier masking, number verbalization, misspelling correction, word
reordering. Identifiers are masked before verbalization so their digits
are never spelled out. The pipeline is a fixed point after one pass.

Every rewriter is total: text it has no opinion about passes through
unchanged, and no rewriter ever raises on ordinary input.
"""

from __future__ import annotations

import re

from .core import ResourceError

_UNITS = (
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
)
_TENS = (
    None, None, "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety",
)

MAX_VERBALIZABLE = 999_999

# Every token that can appear in a number_to_words rendering. Used by the
# analysis module to recognize spelled-out counts ("twenty three").
CARDINAL_WORDS = frozenset(_UNITS) | frozenset(t for t in _TENS if t) | {
    "hundred", "thousand",
}


def number_to_words(n: int) -> str:
    """Render a non-negative integer as spoken English.

    No "and", no hyphens: 23 -> "twenty three", 105 -> "one hundred five".
    """
    if n < 0 or n > MAX_VERBALIZABLE:
        raise ValueError(f"{n} outside the verbalizable range 0..{MAX_VERBALIZABLE}")
    if n < 20:
        return _UNITS[n]
    if n < 100:
        tens, unit = divmod(n, 10)
        return f"{_TENS[tens]} {_UNITS[unit]}" if unit else _TENS[tens]
    if n < 1000:
        hundreds, rest = divmod(n, 100)
        head = f"{_UNITS[hundreds]} hundred"
        return f"{head} {number_to_words(rest)}" if rest else head
    thousands, rest = divmod(n, 1000)
    head = f"{number_to_words(thousands)} thousand"
    return f"{head} {number_to_words(rest)}" if rest else head


_CURRENCY = re.compile(r"([$£])\s*(\d+)")
_PERCENT = re.compile(r"\s*%")
_AMPERSAND = re.compile(r"\s*&\s*")
_AT_SIGN = re.compile(r"\s*@\s*")
_HASH_NUMBER = re.compile(r"#\s*(?=\d)")

_CURRENCY_UNIT = {"$": "dollars", "£": "pounds"}


def _spell_currency(match: re.Match) -> str:
    amount = int(match.group(2))
    if amount > MAX_VERBALIZABLE:
        return match.group(0)
    return f"{number_to_words(amount)} {_CURRENCY_UNIT[match.group(1)]}"


def normalize_special_chars(text: str) -> str:
    """Spell out $, £, %, &, @ and the numeric '#' prefix.

    "$5" -> "five dollars", "fish & chips" -> "fish and chips",
    "#3" -> "number 3" (digits are verbalized by a later stage).
    Characters without a rule pass through untouched.
    """
    text = _CURRENCY.sub(_spell_currency, text)
    text = _PERCENT.sub(" percent", text)
    text = _AMPERSAND.sub(" and ", text)
    text = _AT_SIGN.sub(" at ", text)
    text = _HASH_NUMBER.sub("number ", text)
    return text


_SPLIT_WS = re.compile(r"(\s+)")
_TIME_TOKEN = re.compile(r"^([^\w\s]*)(\d{1,2}):(\d{2})([^\w\s]*)$")
_DIGIT_RUN = re.compile(r"\d+")
_ALPHA = re.compile(r"[A-Za-z]")


def _spell_digit_run(match: re.Match) -> str:
    value = int(match.group(0))
    if value > MAX_VERBALIZABLE:
        return match.group(0)
    return number_to_words(value)


def _verbalize_token(token: str) -> str:
    clock = _TIME_TOKEN.match(token)
    if clock:
        hour, minute = int(clock.group(2)), int(clock.group(3))
        spoken = number_to_words(hour)
        if minute:
            spoken = f"{spoken} {number_to_words(minute)}"
        return f"{clock.group(1)}{spoken}{clock.group(4)}"
    if _ALPHA.search(token) and _DIGIT_RUN.search(token):
        # identifier-shaped; mask_identifiers owns these
        return token
    return _DIGIT_RUN.sub(_spell_digit_run, token)


def verbalize_numbers_in_text(text: str) -> str:
    """Replace digit runs with words, reading HH:MM clock times as spoken.

    "a table for 2" -> "a table for two"; "arrive by 15:30" -> "arrive by
    fifteen thirty"; ":00" minutes are dropped ("15:00" -> "fifteen").
    Tokens mixing letters and digits are left alone for mask_identifiers.
    """
    parts = _SPLIT_WS.split(text)
    return "".join(
        part if not part or part.isspace() else _verbalize_token(part)
        for part in parts
    )


_AFFIXED_TOKEN = re.compile(r"^([^\sA-Za-z0-9]*)([A-Za-z0-9]{4,})([^\sA-Za-z0-9]*)$")


def _mask_token(token: str) -> str:
    match = _AFFIXED_TOKEN.match(token)
    if not match:
        return token
    core = match.group(2)
    if _ALPHA.search(core) and _DIGIT_RUN.search(core):
        return f"{match.group(1)}[number]{match.group(3)}"
    return token


def mask_identifiers(text: str) -> str:
    """Collapse reference-code tokens (postcodes, booking ids) to "[number]".

    A token is masked when its alphanumeric core is 4+ characters long and
    mixes letters with digits ("cb17ag", "a1b2c3"). Pure words and pure
    numbers are never touched.
    """
    parts = _SPLIT_WS.split(text)
    return "".join(
        part if not part or part.isspace() else _mask_token(part)
        for part in parts
    )


def correct_misspellings(text: str, lexicon: dict[str, str]) -> str:
    """Swap each whitespace-delimited token found in the correction lexicon."""
    parts = _SPLIT_WS.split(text)
    return "".join(
        part if not part or part.isspace() else lexicon.get(part.lower(), part)
        for part in parts
    )


_TOKEN = re.compile(r"\S+")


def reorder_words(text: str, rules: list[tuple[str, str]]) -> str:
    """Rewrite scrambled token sequences using exact-match rules.

    Rules are applied in order; each scans left to right and rewrites
    every non-overlapping occurrence of its pattern. Text between matches
    is preserved byte for byte.
    """
    for pattern, replacement in rules:
        wanted = pattern.split()
        if not wanted:
            continue
        tokens = [(m.group(0), m.start(), m.end()) for m in _TOKEN.finditer(text)]
        if len(tokens) < len(wanted):
            continue
        out: list[str] = []
        cut = 0
        i = 0
        while i <= len(tokens) - len(wanted):
            window = [tok for tok, _, _ in tokens[i : i + len(wanted)]]
            if window == wanted:
                out.append(text[cut : tokens[i][1]])
                out.append(" ".join(replacement.split()))
                cut = tokens[i + len(wanted) - 1][2]
                i += len(wanted)
            else:
                i += 1
        if out:
            text = "".join(out) + text[cut:]
    return text


def normalize_transcript(
    text: str,
    misspellings: dict[str, str],
    reorder_rules: list[tuple[str, str]],
) -> str:
    """Run the full five-stage pipeline in its fixed order."""
    text = normalize_special_chars(text)
    text = mask_identifiers(text)
    text = verbalize_numbers_in_text(text)
    text = correct_misspellings(text, misspellings)
    return reorder_words(text, reorder_rules)


def load_misspellings(path: str) -> dict[str, str]:
    """Read a wrong<TAB>right correction table; '#' lines are comments."""
    entries: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cells = line.split("\t")
                if len(cells) != 2 or not cells[0].strip() or not cells[1].strip():
                    raise ResourceError(f"{path}:{lineno}: expected wrong<TAB>right")
                wrong, right = cells[0].strip(), cells[1].strip()
                if wrong != wrong.lower():
                    raise ResourceError(
                        f"{path}:{lineno}: key {wrong!r} must be lowercase"
                    )
                if wrong == right:
                    raise ResourceError(f"{path}:{lineno}: {wrong!r} maps to itself")
                entries[wrong] = right
    except OSError as err:
        raise ResourceError(f"cannot read misspelling table {path}: {err}") from err
    return entries


def load_reorder_rules(path: str) -> list[tuple[str, str]]:
    """Read pattern<TAB>replacement reorder rules, preserving file order."""
    rules: list[tuple[str, str]] = []
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cells = line.split("\t")
                if len(cells) != 2 or not cells[0].split() or not cells[1].split():
                    raise ResourceError(
                        f"{path}:{lineno}: expected pattern<TAB>replacement"
                    )
                rules.append((cells[0], cells[1]))
    except OSError as err:
        raise ResourceError(f"cannot read reorder rules {path}: {err}") from err
    return rules
