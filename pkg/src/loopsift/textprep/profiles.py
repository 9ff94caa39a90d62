"""Preprocessing profiles.

FULL feeds the classifier: it ends in tokenization, stopword removal and
lemmatization and returns a :class:`TokenStream`.  MINIMAL is the light
clean-up used for external scorers and stops after emoji transcription,
returning a string.  Both step sequences are pinned; changing them
changes what every trained model sees.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import steps

FULL_STEPS: tuple[str, ...] = (
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

MINIMAL_STEPS: tuple[str, ...] = (
    "normalize_ws",
    "case_fold",
    "strip_html",
    "strip_mentions",
    "emoji_to_words",
)


class Profile(str, enum.Enum):
    FULL = "FULL"
    MINIMAL = "MINIMAL"

    @property
    def steps(self) -> tuple[str, ...]:
        return FULL_STEPS if self is Profile.FULL else MINIMAL_STEPS


@dataclass(frozen=True, slots=True)
class TokenStream:
    tokens: tuple[str, ...]
    source_profile: str = Profile.FULL.value


_STRING_STEPS = {
    "normalize_ws": steps.normalize_ws,
    "case_fold": steps.case_fold,
    "strip_html": steps.strip_html,
    "strip_mentions": steps.strip_mentions,
    "emoji_to_words": steps.emoji_to_words,
    "strip_punct_num_special": steps.strip_punct_num_special,
}

_TOKEN_STEPS = {
    "remove_stopwords": steps.remove_stopwords,
    "lemmatize": steps.lemmatize,
}


def preprocess(
    text: str, profile: Profile | str = Profile.FULL, language: str = "DE"
) -> TokenStream | str:
    """Run one profile over one text.

    Returns a :class:`TokenStream` for FULL and a plain string for
    MINIMAL.  Idempotent for both profiles: re-running the profile over
    its own output (tokens joined by single spaces for FULL) is a no-op.
    """

    profile = Profile(profile)
    value: str | list[str] = text
    for step in profile.steps:
        if step == "tokenize":
            value = steps.tokenize(value)
        elif step in _TOKEN_STEPS:
            value = _TOKEN_STEPS[step](value, language)
        else:
            value = _STRING_STEPS[step](value)
    if profile is Profile.FULL:
        return TokenStream(tokens=tuple(value), source_profile=profile.value)
    return value


def full_tokens(text: str, language: str = "DE") -> tuple[str, ...]:
    """Shorthand for the FULL profile's token tuple."""

    stream = preprocess(text, Profile.FULL, language)
    assert isinstance(stream, TokenStream)
    return stream.tokens
