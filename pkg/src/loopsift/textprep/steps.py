"""The individual preprocessing steps.

Every string step returns text whose whitespace is already collapsed, so
applying a step to its own output changes nothing.  That local property
is what makes whole profiles idempotent even though ``normalize_ws`` is
the first step in the pinned order, not the last.
"""

from __future__ import annotations

import html
import re
import unicodedata

from .resources import load_emoji_table, load_lemmas, load_stopwords

_WS = re.compile(r"\s+")
# A tag starts with a letter or a slash-letter; "3 < 5 > 1" is left alone.
_TAG = re.compile(r"<\s*/?\s*[A-Za-z][^<>]*>|<!--.*?-->", re.DOTALL)
# Consumes fediverse-style runs (@user@host) whole: dropping only the
# leading handle would expose the rest as a fresh mention on a second
# pass, and this step must be idempotent.
_MENTION = re.compile(r"(?<!\w)@\w+(?:@\w+)*")

# Zero-width joiners, variation selectors and skin-tone modifiers vanish
# silently; they modify a neighbouring emoji rather than carrying meaning.
_EMOJI_MODIFIERS = frozenset(
    {0x200D, *range(0xFE00, 0xFE10), *range(0x1F3FB, 0x1F400)}
)
_PICTOGRAPHIC_RANGES = (
    (0x1F000, 0x1FAFF),
    (0x1F1E6, 0x1F1FF),
    (0x2600, 0x27BF),
)


def _collapse(text: str) -> str:
    return _WS.sub(" ", text).strip()


def normalize_ws(text: str) -> str:
    """Unicode NFC normalization plus whitespace collapse."""

    return _collapse(unicodedata.normalize("NFC", text))


def case_fold(text: str) -> str:
    return text.casefold()


def _unescape_fixpoint(text: str) -> str:
    while True:
        decoded = html.unescape(text)
        if decoded == text:
            return text
        text = decoded


def strip_html(text: str) -> str:
    """Remove tag markup and decode entities, to a joint fixed point.

    Inner text always survives; only the markup goes.  Decoding runs
    before each removal round so entities become characters instead of
    being deleted, and the loop ensures a second application is a no-op.
    """

    current = text
    while True:
        step = _TAG.sub(" ", _unescape_fixpoint(current))
        if step == current:
            return _collapse(step)
        current = step


def strip_mentions(text: str) -> str:
    """Drop @-mention tokens; emails keep the word char before the @."""

    return _collapse(_MENTION.sub(" ", text))


def _is_pictographic(code_point: int) -> bool:
    return any(lo <= code_point <= hi for lo, hi in _PICTOGRAPHIC_RANGES)


def emoji_to_words(text: str) -> str:
    """Replace emoji with space-delimited ":shortcode:" words.

    Table hits use the bundled shortcode; other pictographic code points
    become ":unknown_emoji:".
    """

    table = load_emoji_table()
    pieces: list[str] = []
    for ch in text:
        code_point = ord(ch)
        if ch in table:
            pieces.append(f" :{table[ch]}: ")
        elif code_point in _EMOJI_MODIFIERS:
            continue
        elif _is_pictographic(code_point):
            pieces.append(" :unknown_emoji: ")
        else:
            pieces.append(ch)
    return _collapse("".join(pieces))


def strip_punct_num_special(text: str) -> str:
    """Replace punctuation, numbers, symbols and control chars with spaces.

    The underscore survives: emoji shortcodes must come out of the full
    profile as single tokens like ``grinning_face``.
    """

    pieces: list[str] = []
    for ch in text:
        if ch == "_" or ch == " ":
            pieces.append(ch)
        elif unicodedata.category(ch)[0] in "PNSC":
            pieces.append(" ")
        else:
            pieces.append(ch)
    return _collapse("".join(pieces))


def tokenize(text: str) -> list[str]:
    return text.split()


def remove_stopwords(tokens: list[str], language: str) -> list[str]:
    stopwords = load_stopwords(language)
    return [t for t in tokens if t not in stopwords]


def lemmatize(
    tokens: list[str], language: str, table: dict[str, str] | None = None
) -> list[str]:
    """Dictionary lemmatization with pass-through for unknown tokens.

    ``table`` overrides the bundled list, which is the hook for richer
    lemma back-ends.
    """

    lemmas = load_lemmas(language) if table is None else table
    return [lemmas.get(t, t) for t in tokens]
