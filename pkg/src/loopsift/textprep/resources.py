"""Bundled stopword, lemma and emoji tables.

All tables are plain-text resource files shipped with the package:
``stopwords_<lang>.txt`` (one word per line), ``lemmas_<lang>.tsv``
("form<TAB>lemma") and ``emoji.tsv`` ("emoji<TAB>shortcode").

Lemma tables are validated on load: a lemma value may not itself map to a
different lemma (the table must be closed so lemmatization is idempotent)
and may not be a stopword of the same language (stopword removal runs
before lemmatization, so such a value would break profile idempotence).
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources


def _data_text(name: str) -> str | None:
    ref = resources.files(__package__) / "data" / name
    if not ref.is_file():
        return None
    return ref.read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_stopwords(language: str) -> frozenset[str]:
    """Stopword set for a language tag; empty for languages without a list."""

    text = _data_text(f"stopwords_{language.lower()}.txt")
    if text is None:
        return frozenset()
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip()
    )


@lru_cache(maxsize=None)
def load_lemmas(language: str) -> dict[str, str]:
    """Form-to-lemma table for a language tag; empty when not bundled."""

    text = _data_text(f"lemmas_{language.lower()}.txt")
    if text is None:
        text = _data_text(f"lemmas_{language.lower()}.tsv")
    if text is None:
        return {}
    table: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        form, _, lemma = line.partition("\t")
        form, lemma = form.strip(), lemma.strip()
        if not form or not lemma:
            raise ValueError(f"malformed lemma line: {line!r}")
        table[form] = lemma

    stopwords = load_stopwords(language)
    for form, lemma in table.items():
        if lemma != form and lemma in table:
            raise ValueError(
                f"lemma table not closed: {form!r} -> {lemma!r} -> {table[lemma]!r}"
            )
        if lemma in stopwords:
            raise ValueError(f"lemma value {lemma!r} is a stopword")
    return table


@lru_cache(maxsize=None)
def load_emoji_table() -> dict[str, str]:
    """Emoji code point to lowercase ASCII shortcode."""

    text = _data_text("emoji.tsv")
    if text is None:
        return {}
    table: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        emoji, _, shortcode = line.partition("\t")
        emoji, shortcode = emoji.strip(), shortcode.strip()
        if not emoji or not shortcode:
            raise ValueError(f"malformed emoji line: {line!r}")
        table[emoji] = shortcode
    return table
