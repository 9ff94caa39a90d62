from .crossval import CvReport, cross_validate, stratified_folds
from .features import (
    FeatureConfig,
    Vocabulary,
    Weighting,
    extract_ngrams,
    fit_vocabulary,
    vectorize,
    vectorize_corpus,
)
from .model import (
    MnbModel,
    Prediction,
    fit_text_model,
    load_model,
    model_from_record,
    model_to_record,
    posterior_from_vector,
    predict_proba,
    save_model,
    train_mnb,
)
from .search import SearchResult, Trial, hyperparam_search

__all__ = [
    "CvReport",
    "FeatureConfig",
    "MnbModel",
    "Prediction",
    "SearchResult",
    "Trial",
    "Vocabulary",
    "Weighting",
    "cross_validate",
    "extract_ngrams",
    "fit_text_model",
    "fit_vocabulary",
    "hyperparam_search",
    "load_model",
    "model_from_record",
    "model_to_record",
    "posterior_from_vector",
    "predict_proba",
    "save_model",
    "stratified_folds",
    "train_mnb",
    "vectorize",
    "vectorize_corpus",
]
