"""Word n-gram extraction and tfidf vectorization.

The vocabulary keeps the ``max_features`` n-grams with the highest
document frequency, ties broken lexicographically ascending.  Because
selection order depends only on (df, term), growing ``max_features``
extends the feature list without reordering it (prefix property).

idf uses the smoothed variant ln((1+N)/(1+df)) + 1, which is strictly
positive even for terms present in every document.  tfidf vectors are
L2-normalized; count vectors are left raw.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import EmptyCorpusError


class Weighting(str, enum.Enum):
    TFIDF = "TFIDF"
    COUNT = "COUNT"


@dataclass(frozen=True, slots=True)
class FeatureConfig:
    max_features: int = 3000
    ngram_min: int = 1
    ngram_max: int = 4
    weighting: Weighting = Weighting.TFIDF

    def __post_init__(self):
        if self.max_features < 1:
            raise ValueError(f"max_features must be >= 1, got {self.max_features}")
        if not 1 <= self.ngram_min <= self.ngram_max:
            raise ValueError(
                f"need 1 <= ngram_min <= ngram_max, got "
                f"({self.ngram_min}, {self.ngram_max})"
            )
        if not isinstance(self.weighting, Weighting):
            object.__setattr__(self, "weighting", Weighting(self.weighting))

    def to_record(self) -> dict:
        return {
            "max_features": self.max_features,
            "ngram_min": self.ngram_min,
            "ngram_max": self.ngram_max,
            "weighting": self.weighting.value,
        }

    @classmethod
    def from_record(cls, record: dict) -> "FeatureConfig":
        return cls(
            max_features=int(record["max_features"]),
            ngram_min=int(record["ngram_min"]),
            ngram_max=int(record["ngram_max"]),
            weighting=Weighting(record["weighting"]),
        )


@dataclass(frozen=True)
class Vocabulary:
    entries: dict[str, int]
    idf: np.ndarray
    doc_count: int

    def __len__(self) -> int:
        return len(self.entries)


def _tokens_of(doc) -> Sequence[str]:
    return doc.tokens if hasattr(doc, "tokens") else doc


def extract_ngrams(tokens: Sequence[str], cfg: FeatureConfig) -> Counter[str]:
    """Multiset of contiguous n-grams, n in [ngram_min, ngram_max]."""

    tokens = _tokens_of(tokens)
    grams: Counter[str] = Counter()
    for n in range(cfg.ngram_min, cfg.ngram_max + 1):
        for start in range(len(tokens) - n + 1):
            grams[" ".join(tokens[start : start + n])] += 1
    return grams


def fit_vocabulary(corpus: Iterable[Sequence[str]], cfg: FeatureConfig) -> Vocabulary:
    docs = list(corpus)
    if not docs:
        raise EmptyCorpusError("cannot fit a vocabulary on zero documents")
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(extract_ngrams(doc, cfg)))
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))
    selected = ranked[: cfg.max_features]
    entries = {term: index for index, (term, _) in enumerate(selected)}
    n_docs = len(docs)
    idf = np.array(
        [np.log((1.0 + n_docs) / (1.0 + df[term])) + 1.0 for term, _ in selected],
        dtype=np.float64,
    )
    return Vocabulary(entries=entries, idf=idf, doc_count=n_docs)


def vectorize(
    tokens: Sequence[str], vocab: Vocabulary, cfg: FeatureConfig
) -> np.ndarray:
    """One dense float64 vector; OOV n-grams are ignored."""

    x = np.zeros(len(vocab.entries), dtype=np.float64)
    for term, count in extract_ngrams(tokens, cfg).items():
        index = vocab.entries.get(term)
        if index is not None:
            x[index] = float(count)
    if cfg.weighting is Weighting.TFIDF:
        x *= vocab.idf
        norm = np.linalg.norm(x)
        if norm > 0.0:
            x /= norm
    return x


def vectorize_corpus(
    corpus: Iterable[Sequence[str]], vocab: Vocabulary, cfg: FeatureConfig
) -> np.ndarray:
    rows = [vectorize(doc, vocab, cfg) for doc in corpus]
    if not rows:
        return np.zeros((0, len(vocab.entries)), dtype=np.float64)
    return np.vstack(rows)
