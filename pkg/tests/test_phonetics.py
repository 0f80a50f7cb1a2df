import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsteval.core import ResourceError
from dsteval.phonetics import (
    G2PError,
    default_resource_path,
    grapheme_to_phoneme,
    load_feature_table,
    load_g2p_rules,
    load_ipa_map,
    load_lexicon,
    normalized_phonetic_distance,
    phonetic_edit_distance,
    phrase_to_phonemes,
    substitution_cost,
)

from oracles import brute_alignment_cost, hand_substitution_cost, reparse_feature_table

FEATURES_PATH = default_resource_path("phoneme_features.tsv")


class TestFeatureTable:
    def test_shape(self, resources):
        table = resources.table
        assert table.width >= 14
        assert len(table.rows) == 39

    def test_all_cells_ternary(self, resources):
        for cells in resources.table.rows.values():
            assert set(cells) <= {"+", "-", "0"}

    def test_no_two_segments_share_a_row(self, resources):
        rows = resources.table.rows
        for a, b in itertools.combinations(rows, 2):
            assert rows[a] != rows[b], f"{a} and {b} are indistinguishable"

    def test_rejects_non_ternary_cell(self, tmp_path):
        bad = tmp_path / "features.tsv"
        bad.write_text("symbol\tvoice\nAA\t9\n")
        with pytest.raises(ResourceError):
            load_feature_table(str(bad))

    def test_rejects_duplicate_symbol(self, tmp_path):
        bad = tmp_path / "features.tsv"
        bad.write_text("symbol\tvoice\nAA\t+\nAA\t-\n")
        with pytest.raises(ResourceError):
            load_feature_table(str(bad))

    def test_rejects_duplicate_feature_vector(self, tmp_path):
        bad = tmp_path / "features.tsv"
        bad.write_text("symbol\tvoice\tnasal\nP\t-\t-\nT\t-\t-\n")
        with pytest.raises(ResourceError):
            load_feature_table(str(bad))

    def test_rejects_ragged_rows(self, tmp_path):
        bad = tmp_path / "features.tsv"
        bad.write_text("symbol\tvoice\tnasal\nP\t-\n")
        with pytest.raises(ResourceError):
            load_feature_table(str(bad))


class TestSubstitutionCost:
    def test_voicing_pair_costs_one_feature(self, resources):
        assert substitution_cost("P", "B", resources.table) == 1 / 17

    def test_half_weight_for_one_sided_specification(self, resources):
        # JH/S: continuant and voice and anterior fully disagree,
        # delayed_release is specified only on one side.
        assert substitution_cost("JH", "S", resources.table) == 3.5 / 17

    def test_identical_symbols_are_free(self, resources):
        for symbol in resources.table.rows:
            assert substitution_cost(symbol, symbol, resources.table) == 0.0

    def test_symmetric(self, resources):
        rows = list(resources.table.rows)
        rng = random.Random(11)
        for _ in range(200):
            a, b = rng.choice(rows), rng.choice(rows)
            assert substitution_cost(a, b, resources.table) == substitution_cost(
                b, a, resources.table
            )

    def test_zero_only_on_identity(self, resources):
        rows = resources.table.rows
        for a, b in itertools.combinations(rows, 2):
            assert substitution_cost(a, b, resources.table) > 0.0

    def test_within_unit_interval(self, resources):
        rows = resources.table.rows
        for a, b in itertools.combinations(rows, 2):
            assert 0.0 < substitution_cost(a, b, resources.table) <= 1.0

    def test_matches_hand_computation_on_every_pair(self, resources):
        names, raw_rows = reparse_feature_table(FEATURES_PATH)
        assert len(names) == resources.table.width
        for a in raw_rows:
            for b in raw_rows:
                expected = float(hand_substitution_cost(raw_rows[a], raw_rows[b]))
                assert substitution_cost(a, b, resources.table) == pytest.approx(
                    expected, abs=1e-12
                )

    def test_unknown_symbol_is_a_resource_error(self, resources):
        with pytest.raises(ResourceError):
            substitution_cost("QQ", "P", resources.table)


class TestIpaMap:
    def test_covers_feature_table_one_to_one(self, resources):
        assert set(resources.ipa) == set(resources.table.rows)
        assert len(set(resources.ipa.values())) == len(resources.ipa)

    def test_ipa_string(self, resources):
        assert resources.ipa_string(("K", "AE", "T")) == "kæt"

    def test_rejects_incomplete_map(self, resources, tmp_path):
        bad = tmp_path / "ipa.tsv"
        bad.write_text("AA\tɑ\n")
        with pytest.raises(ResourceError):
            load_ipa_map(str(bad), resources.table)


class TestLexicon:
    def test_lookup_is_lowercased_and_stress_free(self, resources):
        assert resources.lexicon["museum"] == ("M", "Y", "UW", "Z", "IY", "AH", "M")

    def test_alternate_pronunciations_skipped(self, resources, tmp_path):
        lex = tmp_path / "lex.dict"
        lex.write_text(";;; comment\nTHE  DH AH0\nTHE(2)  DH IY0\n")
        loaded = load_lexicon(str(lex), resources.table)
        assert loaded == {"the": ("DH", "AH")}

    def test_rejects_unknown_symbol(self, resources, tmp_path):
        lex = tmp_path / "lex.dict"
        lex.write_text("WORD  ZZ9\n")
        with pytest.raises(ResourceError):
            load_lexicon(str(lex), resources.table)

    def test_packaged_lexicon_has_planted_homophones(self, resources):
        lexicon = resources.lexicon
        for a, b in (
            ("centre", "center"),
            ("theatre", "theater"),
            ("two", "too"),
            ("ate", "eight"),
            ("one", "won"),
            ("sea", "see"),
        ):
            assert lexicon[a] == lexicon[b], f"{a}/{b} should be homophones"


class TestG2P:
    def test_lexicon_hit_wins(self, resources):
        assert grapheme_to_phoneme("cat", resources.lexicon, resources.rules) == (
            "K", "AE", "T",
        )
        assert grapheme_to_phoneme("CAT", resources.lexicon, resources.rules) == (
            "K", "AE", "T",
        )

    def test_out_of_vocabulary_goes_through_rules(self, resources):
        assert grapheme_to_phoneme(
            "stevanage", resources.lexicon, resources.rules
        ) == ("S", "T", "EH", "V", "AE", "N", "EY", "JH")
        assert grapheme_to_phoneme(
            "stevanase", resources.lexicon, resources.rules
        ) == ("S", "T", "EH", "V", "AE", "N", "EY", "S")

    def test_empty_word_is_empty_sequence(self, resources):
        assert grapheme_to_phoneme("", resources.lexicon, resources.rules) == ()

    def test_digits_raise_naming_the_character(self, resources):
        with pytest.raises(G2PError, match="'3'"):
            grapheme_to_phoneme("3pm", resources.lexicon, resources.rules)

    def test_unmapped_character_raises(self, resources):
        with pytest.raises(G2PError):
            grapheme_to_phoneme("café", resources.lexicon, resources.rules)

    def test_longest_chunk_wins_over_file_order(self, resources, tmp_path):
        rules_file = tmp_path / "rules.tsv"
        rules_file.write_text("a\tAA\t\t\nab\tAE B\t\t\nb\tB\t\t\n")
        rules = load_g2p_rules(str(rules_file), resources.table)
        assert grapheme_to_phoneme("ab", {}, rules) == ("AE", "B")

    def test_contexts_constrain_application(self, resources, tmp_path):
        rules_file = tmp_path / "rules.tsv"
        rules_file.write_text(
            "c\tS\t\te\nc\tK\t\t\ne\tIY\t\t\n"
        )
        rules = load_g2p_rules(str(rules_file), resources.table)
        assert grapheme_to_phoneme("ce", {}, rules) == ("S", "IY")
        assert grapheme_to_phoneme("c", {}, rules) == ("K",)

    def test_phrase_concatenates_without_boundary(self, resources):
        phrase = phrase_to_phonemes("golden wok", resources.lexicon, resources.rules)
        golden = grapheme_to_phoneme("golden", resources.lexicon, resources.rules)
        wok = grapheme_to_phoneme("wok", resources.lexicon, resources.rules)
        assert phrase == golden + wok


class TestEditDistance:
    def test_single_substitution(self, resources):
        d = phonetic_edit_distance(("K", "AE", "T"), ("B", "AE", "T"), resources.table)
        assert d == pytest.approx(5.5 / 17, abs=1e-15)

    def test_indel_costs_one(self, resources):
        assert phonetic_edit_distance(("K",), (), resources.table) == 1.0
        assert phonetic_edit_distance((), ("K", "AE"), resources.table) == 2.0

    def test_substitution_never_beats_two_indels(self, resources):
        rows = list(resources.table.rows)
        rng = random.Random(5)
        for _ in range(100):
            a, b = rng.choice(rows), rng.choice(rows)
            assert substitution_cost(a, b, resources.table) <= 2.0

    def test_agrees_with_exhaustive_recursion(self, resources):
        rows = list(resources.table.rows)
        rng = random.Random(23)

        def cost(a, b):
            return substitution_cost(a, b, resources.table)

        for _ in range(150):
            s1 = tuple(rng.choice(rows) for _ in range(rng.randint(0, 5)))
            s2 = tuple(rng.choice(rows) for _ in range(rng.randint(0, 5)))
            assert phonetic_edit_distance(s1, s2, resources.table) == pytest.approx(
                brute_alignment_cost(s1, s2, cost), abs=1e-9
            )

    def test_unknown_symbol_rejected(self, resources):
        with pytest.raises(ResourceError):
            phonetic_edit_distance(("QQ",), ("K",), resources.table)


class TestNormalizedDistance:
    def test_both_empty_is_zero(self, resources):
        assert (
            normalized_phonetic_distance(
                "", "", resources.lexicon, resources.rules, resources.table
            )
            == 0.0
        )

    def test_one_empty_is_one(self, resources):
        assert (
            normalized_phonetic_distance(
                "cat", "", resources.lexicon, resources.rules, resources.table
            )
            == 1.0
        )

    def test_homophones_are_at_distance_zero(self, resources):
        assert (
            normalized_phonetic_distance(
                "centre", "center", resources.lexicon, resources.rules, resources.table
            )
            == 0.0
        )

    def test_near_name_pair(self, resources):
        d = normalized_phonetic_distance(
            "golden wok", "gordon wok", resources.lexicon, resources.rules,
            resources.table,
        )
        assert d == pytest.approx(4 / 153, abs=1e-15)

    def test_rule_generated_near_pair(self, resources):
        d = normalized_phonetic_distance(
            "stevanage", "stevanase", resources.lexicon, resources.rules,
            resources.table,
        )
        assert d == pytest.approx(7 / 272, abs=1e-15)

    def test_identity_and_symmetry_on_lexicon_words(self, resources):
        words = sorted(resources.lexicon)
        rng = random.Random(31)
        for _ in range(200):
            a, b = rng.choice(words), rng.choice(words)
            dab = resources.distance(a, b)
            assert 0.0 <= dab <= 1.0
            assert dab == resources.distance(b, a)
            assert resources.distance(a, a) == 0.0

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_unit_interval_for_random_phrases(self, resources, data):
        words = sorted(resources.lexicon)
        phrase = st.lists(st.sampled_from(words), min_size=0, max_size=3).map(" ".join)
        v1, v2 = data.draw(phrase), data.draw(phrase)
        d = resources.distance(v1, v2)
        assert 0.0 <= d <= 1.0
