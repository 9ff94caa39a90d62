from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from loopsift.textprep import (
    FULL_STEPS,
    MINIMAL_STEPS,
    Profile,
    TokenStream,
    emoji_to_words,
    full_tokens,
    preprocess,
    strip_mentions,
)
from loopsift.textprep.resources import load_lemmas, load_stopwords


# --- pinned profiles -----------------------------------------------------------


def test_profile_step_sequences_are_pinned():
    assert FULL_STEPS == (
        "normalize_ws",
        "case_fold",
        "strip_html",
        "strip_mentions",
        "emoji_to_words",
        "strip_punct_num_special",
        "tokenize",
        "remove_stopwords",
        "lemmatize",
    )
    assert MINIMAL_STEPS == FULL_STEPS[:5]


def test_full_profile_walkthrough():
    stream = preprocess("Hallo   <b>Welt</b>!! 123 @user", Profile.FULL, "DE")
    assert isinstance(stream, TokenStream)
    assert stream.tokens == ("hallo", "welt")


def test_empty_input_is_empty_output():
    assert preprocess("", Profile.FULL, "DE").tokens == ()
    assert preprocess("", Profile.MINIMAL, "DE") == ""


def test_mention_removed_before_tokenization():
    tokens = full_tokens("@schwurbler ist dumm", "DE")
    assert "schwurbler" not in tokens
    assert tokens == ("dumm",)


def test_emoji_shortcode_survives_punctuation_stripping():
    assert full_tokens("😀!", "DE") == ("grinning_face",)


def test_case_fold_equates_sharp_s():
    assert full_tokens("STRASSE", "DE") == full_tokens("strasse", "DE")
    assert full_tokens("Straße", "DE") == full_tokens("STRASSE", "DE")


def test_stopwords_removed_under_full():
    tokens = full_tokens("der Mann und die Frauen", "DE")
    assert tokens == ("mann", "frau")  # "frauen" also lemmatized


def test_lemmatization_applies_bundled_table():
    assert full_tokens("Die Politikern ging", "DE") == ("politiker", "gehen")


def test_language_scoped_stopwords():
    # "les" is a French stopword, not a German one
    assert "les" not in full_tokens("les femmes", "FR")
    assert "les" in full_tokens("les femmes", "DE")


# --- individual steps -----------------------------------------------------------


def test_emoji_to_words_table_hit():
    assert emoji_to_words("ok 😀") == "ok :grinning_face:"


def test_emoji_to_words_plain_text_untouched():
    assert emoji_to_words("abc") == "abc"


def test_emoji_to_words_unknown_fallback():
    # U+1F996 (a dinosaur) is not in the bundled table
    assert emoji_to_words("ok \U0001F996") == "ok :unknown_emoji:"


def test_emoji_modifiers_dropped():
    # thumbs up + skin tone modifier + variation selector
    assert emoji_to_words("\U0001F44D\U0001F3FD️") == ":thumbs_up:"


def test_strip_mentions_cases():
    assert strip_mentions("@alice hi") == "hi"
    assert strip_mentions("a@b.com") == "a@b.com"
    assert strip_mentions("@x @y z") == "z"


def test_html_tags_removed_entities_decoded():
    assert preprocess("Tom &amp; Jerry", Profile.MINIMAL, "DE") == "tom & jerry"
    assert preprocess('<a href="x">link</a>', Profile.MINIMAL, "DE") == "link"
    assert preprocess("3 < 5 > 1", Profile.MINIMAL, "DE") == "3 < 5 > 1"


def test_minimal_keeps_digits_and_symbols():
    assert preprocess("Preis: 99 $!", Profile.MINIMAL, "DE") == "preis: 99 $!"


# --- invariants -------------------------------------------------------------------

_messy_pieces = (
    list("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
    + list("äöüÄÖÜßéèê")
    + list("0123456789")
    + list("  \t\n")
    + list(".,!?;()[]#+-*'\"/%$")
    + ["@user", "<b>", "</b>", "&amp;", "😀", "🤬", "\U0001F996", "a@b.de", "der "]
)
_messy_text = st.lists(st.sampled_from(_messy_pieces), max_size=40).map("".join)


@given(text=_messy_text)
def test_full_profile_idempotent(text):
    tokens = full_tokens(text, "DE")
    assert full_tokens(" ".join(tokens), "DE") == tokens


@given(text=_messy_text)
def test_minimal_profile_idempotent(text):
    once = preprocess(text, Profile.MINIMAL, "DE")
    assert preprocess(once, Profile.MINIMAL, "DE") == once


@given(text=_messy_text)
def test_full_tokens_have_no_whitespace_or_stopwords(text):
    stopwords = load_stopwords("DE")
    for token in full_tokens(text, "DE"):
        assert token == token.strip()
        assert " " not in token
        assert token not in stopwords


# Alphabet without mention/tag/entity triggers: every letter and digit
# of the input must survive MINIMAL.
_plain_text = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyzXYZäöü0123456789 .,!?;()[]#+-*'\"/%$",
    max_size=60,
)


@given(text=_plain_text)
def test_minimal_preserves_letters_and_digits(text):
    out = preprocess(text, Profile.MINIMAL, "DE")
    wanted = sorted(ch for ch in text.casefold() if ch.isalnum())
    got = sorted(ch for ch in out if ch.isalnum())
    assert wanted == got


def test_escaped_markup_reaches_a_fixed_point():
    once = preprocess("&lt;b&gt;fett&lt;/b&gt;", Profile.MINIMAL, "DE")
    assert preprocess(once, Profile.MINIMAL, "DE") == once
    assert "fett" in once


# --- resources -----------------------------------------------------------------


def test_lemma_tables_are_closed_and_stopword_free():
    for language in ("DE", "FR"):
        table = load_lemmas(language)
        stopwords = load_stopwords(language)
        assert table, language
        for form, lemma in table.items():
            assert lemma == form or lemma not in table
            assert lemma not in stopwords


def test_unknown_language_has_empty_resources():
    assert load_stopwords("IT") == frozenset()
    assert load_lemmas("IT") == {}
