from .profiles import (
    FULL_STEPS,
    MINIMAL_STEPS,
    Profile,
    TokenStream,
    full_tokens,
    preprocess,
)
from .steps import (
    case_fold,
    emoji_to_words,
    lemmatize,
    normalize_ws,
    remove_stopwords,
    strip_html,
    strip_mentions,
    strip_punct_num_special,
    tokenize,
)

__all__ = [
    "FULL_STEPS",
    "MINIMAL_STEPS",
    "Profile",
    "TokenStream",
    "case_fold",
    "emoji_to_words",
    "full_tokens",
    "lemmatize",
    "normalize_ws",
    "preprocess",
    "remove_stopwords",
    "strip_html",
    "strip_mentions",
    "strip_punct_num_special",
    "tokenize",
]
