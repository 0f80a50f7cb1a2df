import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsteval.core import ResourceError
from dsteval.textnorm import (
    CARDINAL_WORDS,
    MAX_VERBALIZABLE,
    correct_misspellings,
    load_misspellings,
    load_reorder_rules,
    mask_identifiers,
    normalize_special_chars,
    normalize_transcript,
    number_to_words,
    reorder_words,
    verbalize_numbers_in_text,
)

from conftest import data_path
from oracles import words_to_number


class TestNumberToWords:
    def test_small_numbers(self):
        assert number_to_words(0) == "zero"
        assert number_to_words(7) == "seven"
        assert number_to_words(14) == "fourteen"
        assert number_to_words(40) == "forty"
        assert number_to_words(99) == "ninety nine"

    def test_hundreds_have_no_and(self):
        assert number_to_words(105) == "one hundred five"
        assert number_to_words(230) == "two hundred thirty"

    def test_thousands(self):
        assert number_to_words(1000) == "one thousand"
        assert number_to_words(45230) == "forty five thousand two hundred thirty"
        assert (
            number_to_words(999999)
            == "nine hundred ninety nine thousand nine hundred ninety nine"
        )

    def test_no_hyphens_anywhere(self):
        for n in (21, 99, 121, 999, 45230):
            assert "-" not in number_to_words(n)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            number_to_words(-1)
        with pytest.raises(ValueError):
            number_to_words(MAX_VERBALIZABLE + 1)

    def test_every_word_is_a_known_cardinal(self):
        for n in (0, 19, 20, 99, 100, 847, 1000, 999999):
            for word in number_to_words(n).split():
                assert word in CARDINAL_WORDS

    @given(st.integers(min_value=0, max_value=MAX_VERBALIZABLE))
    def test_round_trips_through_independent_parser(self, n):
        assert words_to_number(number_to_words(n)) == n


class TestSpecialChars:
    def test_currency_amounts_come_out_as_words(self):
        assert normalize_special_chars("it costs $25") == "it costs twenty five dollars"
        assert normalize_special_chars("fare is £3") == "fare is three pounds"

    def test_percent(self):
        assert normalize_special_chars("100% sure") == "100 percent sure"

    def test_ampersand_and_at(self):
        assert normalize_special_chars("fish & chips") == "fish and chips"
        assert normalize_special_chars("see you @ noon") == "see you at noon"

    def test_hash_before_digit(self):
        assert normalize_special_chars("booking #3") == "booking number 3"

    def test_hash_without_digit_is_untouched(self):
        assert normalize_special_chars("the # key") == "the # key"


class TestMaskIdentifiers:
    def test_masks_mixed_alphanumeric(self):
        assert mask_identifiers("code AB12CD here") == "code [number] here"
        assert mask_identifiers("train TR1234") == "train [number]"

    def test_preserves_punctuation_affixes(self):
        assert mask_identifiers("code AB12CD, thanks") == "code [number], thanks"
        assert mask_identifiers("(TR1234)") == "([number])"

    def test_short_tokens_unchanged(self):
        assert mask_identifiers("a1b is short") == "a1b is short"

    def test_pure_alpha_or_digit_tokens_unchanged(self):
        assert mask_identifiers("ABCD 12345") == "ABCD 12345"

    def test_mask_token_is_stable(self):
        assert mask_identifiers("[number]") == "[number]"


class TestVerbalizeNumbers:
    def test_plain_runs(self):
        assert verbalize_numbers_in_text("table for 2") == "table for two"
        assert verbalize_numbers_in_text("room 230") == "room two hundred thirty"

    def test_clock_times(self):
        assert verbalize_numbers_in_text("at 18:30") == "at eighteen thirty"
        assert verbalize_numbers_in_text("at 9:00") == "at nine"
        assert verbalize_numbers_in_text("at 05:45") == "at five forty five"

    def test_time_keeps_surrounding_punctuation(self):
        assert verbalize_numbers_in_text("(18:30,") == "(eighteen thirty,"

    def test_mixed_alnum_tokens_skipped(self):
        assert verbalize_numbers_in_text("a1b stays") == "a1b stays"
        assert verbalize_numbers_in_text("TR1234 stays") == "TR1234 stays"

    def test_huge_runs_left_alone(self):
        assert verbalize_numbers_in_text("serial 1234567") == "serial 1234567"

    def test_boundary_run_is_verbalized(self):
        out = verbalize_numbers_in_text("999999")
        assert out == "nine hundred ninety nine thousand nine hundred ninety nine"


class TestCorrectMisspellings:
    def test_token_local_lookup(self, misspellings):
        assert correct_misspellings("teh museum", misspellings) == "the museum"

    def test_lookup_is_case_insensitive(self, misspellings):
        assert correct_misspellings("Teh museum", misspellings) == "the museum"

    def test_substrings_not_touched(self, misspellings):
        assert correct_misspellings("tehran", misspellings) == "tehran"

    def test_spacing_preserved(self, misspellings):
        assert correct_misspellings("teh  musuem", misspellings) == "the  museum"


class TestReorderWords:
    def test_basic_swap(self, reorder_rules):
        assert reorder_words("i the am hungry", reorder_rules) == "i am the hungry"

    def test_matching_is_case_sensitive(self, reorder_rules):
        assert reorder_words("I THE AM hungry", reorder_rules) == "I THE AM hungry"

    def test_text_between_matches_is_byte_preserved(self, reorder_rules):
        assert (
            reorder_words("well,  you thank  so much", reorder_rules)
            == "well,  thank you  so much"
        )

    def test_non_overlapping_left_to_right(self):
        rules = [("a b", "b a")]
        assert reorder_words("a b a b a", rules) == "b a b a a"

    def test_rules_apply_in_file_order(self):
        rules = [("x y", "y x"), ("y x", "q")]
        assert reorder_words("x y", rules) == "q"


class TestPipeline:
    def test_fixed_order_end_to_end(self, misspellings, reorder_rules):
        text = "me let book #3 at teh resturant for 2 @ 18:30, $25 deposit"
        out = normalize_transcript(text, misspellings, reorder_rules)
        assert out == (
            "let me book number three at the restaurant for two at "
            "eighteen thirty, twenty five dollars deposit"
        )

    def test_identifiers_masked_before_verbalization(self, misspellings, reorder_rules):
        out = normalize_transcript("ref CB17AG for 2", misspellings, reorder_rules)
        assert out == "ref [number] for two"

    def test_fixture_is_a_fixed_point_after_one_pass(
        self, misspellings, reorder_rules
    ):
        with open(data_path("transcripts_200.txt"), encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        assert len(lines) == 200
        once = [normalize_transcript(l, misspellings, reorder_rules) for l in lines]
        twice = [normalize_transcript(l, misspellings, reorder_rules) for l in once]
        assert once == twice

    @settings(max_examples=200)
    @given(
        st.lists(
            st.sampled_from(
                list("abct 0123456789$%&@#:,.") + ["teh", "18:30", "AB12CD", " "]
            ),
            max_size=12,
        ).map("".join)
    )
    def test_idempotent_on_arbitrary_text(self, misspellings, reorder_rules, text):
        once = normalize_transcript(text, misspellings, reorder_rules)
        assert normalize_transcript(once, misspellings, reorder_rules) == once


class TestLoaders:
    def test_misspellings_rejects_uppercase_keys(self, tmp_path):
        bad = tmp_path / "mis.tsv"
        bad.write_text("Teh\tthe\n")
        with pytest.raises(ResourceError):
            load_misspellings(str(bad))

    def test_misspellings_rejects_self_mapping(self, tmp_path):
        bad = tmp_path / "mis.tsv"
        bad.write_text("the\tthe\n")
        with pytest.raises(ResourceError):
            load_misspellings(str(bad))

    def test_misspellings_missing_file(self, tmp_path):
        with pytest.raises(ResourceError):
            load_misspellings(str(tmp_path / "absent.tsv"))

    def test_reorder_rules_keep_file_order(self, tmp_path):
        rules_file = tmp_path / "rules.tsv"
        rules_file.write_text("b a\ta b\nme let\tlet me\n")
        assert load_reorder_rules(str(rules_file)) == [
            ("b a", "a b"),
            ("me let", "let me"),
        ]

    def test_reorder_rules_reject_missing_column(self, tmp_path):
        bad = tmp_path / "rules.tsv"
        bad.write_text("just one column\n")
        with pytest.raises(ResourceError):
            load_reorder_rules(str(bad))

    def test_packaged_tables_satisfy_their_own_constraints(
        self, misspellings, reorder_rules
    ):
        for wrong, right in misspellings.items():
            assert wrong == wrong.lower()
            assert right not in misspellings  # corrections must be final
        assert reorder_rules, "packaged reorder rules should not be empty"
