from __future__ import annotations

import pytest

from csforge.languages import Language
from csforge.tagging import (
    AllUnknownError,
    cs_ratio,
    matrix_language,
    tag_sentence,
    tag_token_language,
)
from csforge.tokenization import sentence_from_surfaces, tokenize


def tagged(surfaces_langs):
    surfaces = [s for s, _ in surfaces_langs]
    langs = [l for _, l in surfaces_langs]
    return sentence_from_surfaces(surfaces, langs)


def test_hangul_token_ignores_context():
    assert tag_token_language("안녕", Language.ENGLISH) is Language.KOREAN


def test_script_unique_tags():
    assert tag_token_language("مرحبا", Language.ENGLISH) is Language.ARABIC
    assert tag_token_language("नमस्ते", Language.ENGLISH) is Language.HINDI
    assert tag_token_language("привет", Language.ENGLISH) is Language.RUSSIAN
    assert tag_token_language("さしみ", Language.ENGLISH) is Language.JAPANESE


def test_han_disambiguates_by_context():
    assert tag_token_language("好", Language.CANTONESE) is Language.CANTONESE
    assert tag_token_language("好", Language.JAPANESE) is Language.JAPANESE
    assert tag_token_language("好", Language.ENGLISH) is Language.MANDARIN


def test_han_disambiguates_by_pair():
    lang = tag_token_language("好", Language.ENGLISH, pair=(Language.ENGLISH, Language.CANTONESE))
    assert lang is Language.CANTONESE


def test_lexicon_hit_beats_context():
    assert tag_token_language("the", Language.MANDARIN) is Language.ENGLISH


def test_lexicon_fallback_rule():
    # Not in the English list; a Spanish-majority context resolves it.
    assert tag_token_language("ligero", Language.SPANISH) is Language.SPANISH


def test_unlisted_latin_word_falls_back_to_context():
    assert tag_token_language("zzyzx", Language.FRENCH) is Language.FRENCH


def test_digits_inherit_context():
    assert tag_token_language("42", Language.HINDI) is Language.HINDI
    assert tag_token_language(".", Language.SPANISH) is Language.SPANISH


def test_ambiguous_latin_word_prefers_context():
    # "que" is in both the Spanish and French lists.
    assert tag_token_language("que", Language.FRENCH) is Language.FRENCH
    assert tag_token_language("que", Language.SPANISH) is Language.SPANISH


def test_empty_token_rejected():
    with pytest.raises(ValueError):
        tag_token_language("", Language.ENGLISH)


def test_tag_sentence_mixed():
    s = tag_sentence(tokenize("I told him that pa' que la trajera ligero"),
                     pair=(Language.ENGLISH, Language.SPANISH))
    langs = [t.language for t in s.tokens]
    assert langs[:4] == [Language.ENGLISH] * 4
    assert langs[4:] == [Language.SPANISH] * 5


def test_matrix_majority():
    s = tagged([("我", Language.MANDARIN), ("们", Language.MANDARIN),
                ("ok", Language.ENGLISH), ("走", Language.MANDARIN)])
    assert matrix_language(s) is Language.MANDARIN


def test_matrix_tie_breaks_to_earliest():
    s = tagged([("ok", Language.ENGLISH), ("走", Language.MANDARIN)])
    assert matrix_language(s) is Language.ENGLISH
    s2 = tagged([("走", Language.MANDARIN), ("ok", Language.ENGLISH)])
    assert matrix_language(s2) is Language.MANDARIN


def test_matrix_all_unknown():
    s = tagged([("??", Language.UNKNOWN), ("!!", Language.UNKNOWN)])
    with pytest.raises(AllUnknownError):
        matrix_language(s)


def test_matrix_invariant_under_duplication():
    s = tagged([("a", Language.ENGLISH), ("b", Language.ENGLISH), ("c", Language.SPANISH)])
    doubled = tagged([("a", Language.ENGLISH), ("b", Language.ENGLISH), ("c", Language.SPANISH),
                      ("a", Language.ENGLISH), ("b", Language.ENGLISH), ("c", Language.SPANISH)])
    assert matrix_language(s) is matrix_language(doubled)


def test_cs_ratio_counts():
    s = tagged([("我", Language.MANDARIN), ("们", Language.MANDARIN),
                ("ok", Language.ENGLISH), ("走", Language.MANDARIN)])
    assert cs_ratio(s) == {Language.MANDARIN: 0.75, Language.ENGLISH: 0.25}


def test_cs_ratio_monolingual():
    s = tagged([("hello", Language.ENGLISH), ("there", Language.ENGLISH)])
    assert cs_ratio(s) == {Language.ENGLISH: 1.0}


def test_cs_ratio_ignores_unknown_and_sums_to_one():
    s = tagged([("hello", Language.ENGLISH), ("??", Language.UNKNOWN),
                ("hola", Language.SPANISH), ("mundo", Language.SPANISH)])
    ratios = cs_ratio(s)
    assert abs(sum(ratios.values()) - 1.0) < 1e-9
    assert ratios[Language.SPANISH] == pytest.approx(2 / 3)


def test_arabic_english_ratio_fixture():
    # 63 Arabic-script tokens and 37 English words in a 100-token utterance.
    arabic = ["كلمة"] * 63
    english = ["word"] * 37
    s = tag_sentence(
        sentence_from_surfaces(arabic + english),
        pair=(Language.ARABIC, Language.ENGLISH),
    )
    ratios = cs_ratio(s)
    assert ratios[Language.ARABIC] == pytest.approx(0.63)
    assert ratios[Language.ENGLISH] == pytest.approx(0.37)
