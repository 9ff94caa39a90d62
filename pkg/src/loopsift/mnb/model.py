"""Multinomial Naive Bayes over tfidf vectors.

Training follows the closed form

    class_log_prior[c]          = ln(count_c / N)
    feature_log_likelihood[c,t] = ln((S_ct + alpha) / (S_c + alpha * |V|))

with S_ct the summed feature weight of term t over class-c documents and
S_c its total.  Prediction runs in log space with log-sum-exp
normalization; a document with no in-vocabulary features falls back to
the softmax of the priors alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import SingleClassError
from .features import (
    FeatureConfig,
    Vocabulary,
    fit_vocabulary,
    vectorize,
    vectorize_corpus,
)


@dataclass(frozen=True, slots=True)
class Prediction:
    example_id: str
    probability: float
    label: int


@dataclass(frozen=True)
class MnbModel:
    config: FeatureConfig
    vocabulary: Vocabulary
    class_log_prior: np.ndarray
    feature_log_likelihood: np.ndarray
    smoothing_alpha: float = 1.0
    version: str = "v1"


def train_mnb(
    X: np.ndarray,
    y: Sequence[int],
    alpha: float = 1.0,
    *,
    config: FeatureConfig,
    vocabulary: Vocabulary,
    version: str = "v1",
) -> MnbModel:
    y_arr = np.asarray(y, dtype=np.int64)
    if X.shape[0] != y_arr.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y_arr.shape[0]}")
    if X.shape[0] < 2:
        raise SingleClassError("training needs at least 2 documents")
    counts = np.bincount(y_arr, minlength=2)
    if counts[0] == 0 or counts[1] == 0:
        raise SingleClassError(
            f"both classes required, got counts {counts.tolist()}"
        )
    if alpha <= 0:
        raise ValueError(f"smoothing alpha must be > 0, got {alpha}")

    n_features = X.shape[1]
    class_log_prior = np.log(counts / y_arr.shape[0])
    fll = np.zeros((2, n_features), dtype=np.float64)
    for cls in (0, 1):
        summed = X[y_arr == cls].sum(axis=0)
        fll[cls] = np.log(summed + alpha) - np.log(
            summed.sum() + alpha * n_features
        )
    return MnbModel(
        config=config,
        vocabulary=vocabulary,
        class_log_prior=class_log_prior,
        feature_log_likelihood=fll,
        smoothing_alpha=float(alpha),
        version=version,
    )


def posterior_from_vector(model: MnbModel, x: np.ndarray) -> float:
    """Positive-class posterior for one feature vector, via log-sum-exp."""

    jll = model.class_log_prior + model.feature_log_likelihood @ x
    peak = float(np.max(jll))
    log_norm = peak + np.log(np.exp(jll - peak).sum())
    return float(np.exp(jll[1] - log_norm))


def predict_proba(
    model: MnbModel, tokens: Sequence[str], example_id: str = ""
) -> Prediction:
    x = vectorize(tokens, model.vocabulary, model.config)
    probability = posterior_from_vector(model, x)
    return Prediction(
        example_id=example_id,
        probability=probability,
        label=1 if probability >= 0.5 else 0,
    )


def fit_text_model(
    docs: Sequence[Sequence[str]],
    labels: Sequence[int],
    cfg: FeatureConfig | None = None,
    alpha: float = 1.0,
    version: str = "v1",
) -> MnbModel:
    """Fit vocabulary and model in one step from token documents."""

    cfg = cfg or FeatureConfig()
    vocabulary = fit_vocabulary(docs, cfg)
    X = vectorize_corpus(docs, vocabulary, cfg)
    return train_mnb(
        X, labels, alpha, config=cfg, vocabulary=vocabulary, version=version
    )


# --- serialization ------------------------------------------------------------
#
# One JSON document holds everything needed to score text again.  Floats
# go through repr-based JSON encoding, which round-trips IEEE doubles
# exactly.


def model_to_record(model: MnbModel) -> dict:
    config = model.config.to_record()
    config["smoothing_alpha"] = model.smoothing_alpha
    return {
        "config": config,
        "vocabulary": {
            "entries": dict(model.vocabulary.entries),
            "doc_count": model.vocabulary.doc_count,
        },
        "idf": model.vocabulary.idf.tolist(),
        "priors": model.class_log_prior.tolist(),
        "likelihoods": model.feature_log_likelihood.tolist(),
        "version": model.version,
    }


def model_from_record(record: dict) -> MnbModel:
    config = FeatureConfig.from_record(record["config"])
    vocabulary = Vocabulary(
        entries={str(k): int(v) for k, v in record["vocabulary"]["entries"].items()},
        idf=np.array(record["idf"], dtype=np.float64),
        doc_count=int(record["vocabulary"]["doc_count"]),
    )
    return MnbModel(
        config=config,
        vocabulary=vocabulary,
        class_log_prior=np.array(record["priors"], dtype=np.float64),
        feature_log_likelihood=np.array(record["likelihoods"], dtype=np.float64),
        smoothing_alpha=float(record["config"]["smoothing_alpha"]),
        version=str(record["version"]),
    )


def save_model(model: MnbModel, path: Path | str) -> None:
    Path(path).write_text(
        json.dumps(model_to_record(model), ensure_ascii=False), encoding="utf-8"
    )


def load_model(path: Path | str) -> MnbModel:
    return model_from_record(json.loads(Path(path).read_text(encoding="utf-8")))
