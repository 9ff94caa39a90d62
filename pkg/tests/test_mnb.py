from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loopsift.errors import (
    EmptyCorpusError,
    EmptySpaceError,
    SingleClassError,
    TooFewPerClassError,
)
from loopsift.mnb import (
    FeatureConfig,
    Weighting,
    cross_validate,
    extract_ngrams,
    fit_text_model,
    fit_vocabulary,
    hyperparam_search,
    load_model,
    model_from_record,
    model_to_record,
    predict_proba,
    save_model,
    train_mnb,
    vectorize,
    vectorize_corpus,
)

from oracles import nb_posterior_oracle


# --- n-grams ------------------------------------------------------------------


def test_extract_ngrams_range_1_2():
    grams = extract_ngrams(["a", "b", "c"], FeatureConfig(ngram_min=1, ngram_max=2))
    assert dict(grams) == {"a": 1, "b": 1, "c": 1, "a b": 1, "b c": 1}


def test_extract_ngrams_short_input():
    grams = extract_ngrams(["a"], FeatureConfig(ngram_min=1, ngram_max=4))
    assert dict(grams) == {"a": 1}


def test_extract_ngrams_exact_4():
    grams = extract_ngrams(
        ["a", "b", "c", "d"], FeatureConfig(ngram_min=4, ngram_max=4)
    )
    assert dict(grams) == {"a b c d": 1}


def test_feature_config_rejects_bad_ranges():
    with pytest.raises(ValueError):
        FeatureConfig(ngram_min=0)
    with pytest.raises(ValueError):
        FeatureConfig(ngram_min=3, ngram_max=2)
    with pytest.raises(ValueError):
        FeatureConfig(max_features=0)


# --- vocabulary ----------------------------------------------------------------

_UNIGRAMS = FeatureConfig(ngram_min=1, ngram_max=1)


def test_idf_of_term_shared_by_two_docs_is_one():
    vocab = fit_vocabulary([["geteilt"], ["geteilt"]], _UNIGRAMS)
    assert vocab.idf[vocab.entries["geteilt"]] == pytest.approx(1.0, abs=1e-12)


def test_vocabulary_tie_break_lexicographic():
    cfg = FeatureConfig(max_features=1, ngram_min=1, ngram_max=1)
    vocab = fit_vocabulary([["zeta", "beta"], ["beta", "zeta"]], cfg)
    assert list(vocab.entries) == ["beta"]


def test_empty_corpus_rejected():
    with pytest.raises(EmptyCorpusError):
        fit_vocabulary([], _UNIGRAMS)


_docs_strategy = st.lists(
    st.lists(st.sampled_from("abcdefgh"), min_size=1, max_size=6),
    min_size=1,
    max_size=8,
)


@given(docs=_docs_strategy, small=st.integers(1, 4), extra=st.integers(1, 6))
def test_vocabulary_growth_is_a_prefix(docs, small, extra):
    cfg_small = FeatureConfig(max_features=small, ngram_min=1, ngram_max=2)
    cfg_large = FeatureConfig(max_features=small + extra, ngram_min=1, ngram_max=2)
    small_entries = list(fit_vocabulary(docs, cfg_small).entries)
    large_entries = list(fit_vocabulary(docs, cfg_large).entries)
    assert large_entries[: len(small_entries)] == small_entries


# --- vectorize -------------------------------------------------------------------


def test_single_invocab_term_gives_unit_vector():
    vocab = fit_vocabulary([["x"], ["y"]], _UNIGRAMS)
    vec = vectorize(["x", "x"], vocab, _UNIGRAMS)
    assert np.linalg.norm(vec) == pytest.approx(1.0)
    assert vec[vocab.entries["x"]] == pytest.approx(1.0)


def test_oov_gives_zero_vector():
    vocab = fit_vocabulary([["x"]], _UNIGRAMS)
    assert np.all(vectorize(["unseen"], vocab, _UNIGRAMS) == 0.0)


def test_two_equal_terms_idf_one_gives_diagonal():
    # both terms in both docs: df=2, N=2, idf = ln(3/3)+1 = 1
    vocab = fit_vocabulary([["p", "q"], ["q", "p"]], _UNIGRAMS)
    vec = vectorize(["p", "q"], vocab, _UNIGRAMS)
    assert vec == pytest.approx([1 / math.sqrt(2)] * 2)


# --- training -----------------------------------------------------------------


def test_balanced_priors():
    model = fit_text_model([["a"], ["b"]], [0, 1], _UNIGRAMS)
    assert model.class_log_prior == pytest.approx([math.log(0.5)] * 2)


def test_single_class_rejected():
    with pytest.raises(SingleClassError):
        fit_text_model([["a"], ["b"]], [1, 1], _UNIGRAMS)


def test_four_doc_count_model_matches_hand_computation():
    # docs [a], [a b] with labels 1, 0 under COUNT weighting, alpha=1:
    # class 1 sums (1,0) total 1; class 0 sums (1,1) total 2
    # theta1 = (2/3, 1/3), theta0 = (2/4, 2/4); predict ["a"]:
    # p1 = (2/3)/(2/3 + 1/2) = 4/7
    cfg = FeatureConfig(ngram_min=1, ngram_max=1, weighting=Weighting.COUNT)
    model = fit_text_model([["a"], ["a", "b"]], [1, 0], cfg)
    prediction = predict_proba(model, ["a"])
    assert prediction.probability == pytest.approx(4 / 7, abs=1e-12)
    assert prediction.label == 1


def test_likelihood_rows_sum_to_one():
    model = fit_text_model(
        [["a", "b"], ["b", "c"], ["c", "d"], ["a"]], [1, 1, 0, 0], _UNIGRAMS
    )
    row_sums = np.exp(model.feature_log_likelihood).sum(axis=1)
    assert row_sums == pytest.approx([1.0, 1.0], abs=1e-9)


def test_zero_vector_returns_prior_softmax():
    model = fit_text_model([["a"], ["a"], ["b"]], [0, 0, 1], _UNIGRAMS)
    prediction = predict_proba(model, ["entirely", "unseen"])
    assert prediction.probability == pytest.approx(1 / 3, abs=1e-12)


def test_positive_only_term_dominates():
    model = fit_text_model([["schlecht"], ["gut"]], [1, 0], _UNIGRAMS)
    assert predict_proba(model, ["schlecht"]).probability > 0.5


def test_prediction_label_threshold_couples():
    model = fit_text_model([["a"], ["b"]], [1, 0], _UNIGRAMS)
    for tokens in (["a"], ["b"], ["a", "b"], ["zz"]):
        prediction = predict_proba(model, tokens)
        assert prediction.label == (1 if prediction.probability >= 0.5 else 0)


# --- oracle equivalence (unit-scale; the acceptance suite runs 200 corpora) ----


def _random_corpus(rng: random.Random):
    vocabulary = ["w%d" % i for i in range(10)]
    n_docs = rng.randint(2, 20)
    docs, labels = [], []
    for _ in range(n_docs):
        docs.append([rng.choice(vocabulary) for _ in range(rng.randint(1, 8))])
        labels.append(rng.randint(0, 1))
    # force both classes
    labels[0], labels[1] = 0, 1
    return docs, labels


def test_log_space_posterior_matches_direct_oracle():
    rng = random.Random(2024)
    for _ in range(25):
        docs, labels = _random_corpus(rng)
        ngram_max = rng.randint(1, 3)
        max_features = rng.randint(3, 40)
        alpha = rng.choice([0.5, 1.0, 2.0])
        weighting = rng.choice([Weighting.TFIDF, Weighting.COUNT])
        cfg = FeatureConfig(
            max_features=max_features,
            ngram_min=1,
            ngram_max=ngram_max,
            weighting=weighting,
        )
        model = fit_text_model(docs, labels, cfg, alpha=alpha)
        test_doc = [rng.choice(["w0", "w3", "w7", "oov"]) for _ in range(5)]
        expected = nb_posterior_oracle(
            docs,
            labels,
            test_doc,
            max_features=max_features,
            ngram_min=1,
            ngram_max=ngram_max,
            alpha=alpha,
            weighting=weighting.value,
        )
        got = predict_proba(model, test_doc).probability
        assert got == pytest.approx(expected, abs=1e-9)


# --- serialization ---------------------------------------------------------------


def test_model_round_trip_is_loss_free(tmp_path):
    docs = [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]]
    model = fit_text_model(docs, [1, 1, 0, 0], FeatureConfig(ngram_max=2), alpha=0.7)
    path = tmp_path / "model.json"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.config == model.config
    assert loaded.vocabulary.entries == model.vocabulary.entries
    assert loaded.vocabulary.doc_count == model.vocabulary.doc_count
    assert np.array_equal(loaded.vocabulary.idf, model.vocabulary.idf)
    assert np.array_equal(loaded.class_log_prior, model.class_log_prior)
    assert np.array_equal(
        loaded.feature_log_likelihood, model.feature_log_likelihood
    )
    assert loaded.smoothing_alpha == model.smoothing_alpha
    assert loaded.version == model.version
    # and the round-tripped model scores identically, bit for bit
    probe = ["a", "c", "zz"]
    assert (
        predict_proba(loaded, probe).probability
        == predict_proba(model, probe).probability
    )


def test_model_record_has_the_documented_keys():
    model = fit_text_model([["a"], ["b"]], [1, 0], _UNIGRAMS)
    record = model_to_record(model)
    assert list(record) == [
        "config",
        "vocabulary",
        "idf",
        "priors",
        "likelihoods",
        "version",
    ]
    assert model_from_record(record).version == model.version


# --- cross-validation -------------------------------------------------------------


def _separable_corpus(n_per_class: int, seed: int = 7):
    rng = random.Random(seed)
    pos_vocab = ["hass%d" % i for i in range(6)]
    neg_vocab = ["nett%d" % i for i in range(6)]
    docs, labels = [], []
    for _ in range(n_per_class):
        docs.append([rng.choice(pos_vocab) for _ in range(4)])
        labels.append(1)
        docs.append([rng.choice(neg_vocab) for _ in range(4)])
        labels.append(0)
    return docs, labels


def test_cv_perfect_on_separable_corpus():
    docs, labels = _separable_corpus(30)
    report = cross_validate(docs, labels, _UNIGRAMS, k=10, seed=3)
    assert report.k == 10
    assert len(report.per_fold) == 10
    assert report.mean.weighted_f1 == pytest.approx(1.0)


def test_cv_random_labels_near_half():
    rng = random.Random(11)
    docs = [
        [rng.choice(["a", "b", "c", "d", "e"]) for _ in range(6)] for _ in range(200)
    ]
    labels = [rng.randint(0, 1) for _ in range(200)]
    while sum(labels) < 10 or sum(labels) > 190:
        labels = [rng.randint(0, 1) for _ in range(200)]
    report = cross_validate(docs, labels, _UNIGRAMS, k=10, seed=5)
    assert abs(report.mean.weighted_f1 - 0.5) <= 0.1


def test_cv_too_few_per_class():
    docs, labels = _separable_corpus(30)
    labels = [0] * 55 + [1] * 5
    with pytest.raises(TooFewPerClassError):
        cross_validate(docs, labels, _UNIGRAMS, k=10, seed=0)


def test_cv_deterministic():
    docs, labels = _separable_corpus(20)
    a = cross_validate(docs, labels, _UNIGRAMS, k=5, seed=42)
    b = cross_validate(docs, labels, _UNIGRAMS, k=5, seed=42)
    assert a == b


# --- hyperparameter search ---------------------------------------------------------


def test_search_budget_one_returns_single_trial():
    docs, labels = _separable_corpus(15)
    result = hyperparam_search(
        docs, labels, {"max_features": [20], "alpha": [1.0]}, budget=1, seed=0, k=5
    )
    assert len(result.trace) == 1
    assert result.trace[0].status == "completed"
    assert result.config.max_features == 20


def test_search_empty_space_rejected():
    docs, labels = _separable_corpus(15)
    with pytest.raises(EmptySpaceError):
        hyperparam_search(docs, labels, {"max_features": []}, budget=3, seed=0, k=5)


def test_search_finds_known_best_config():
    # max_features=1 cripples the model on this corpus; 40 is plenty
    docs, labels = _separable_corpus(15, seed=9)
    space = {"max_features": [1, 40], "alpha": [1.0]}
    result = hyperparam_search(docs, labels, space, budget=8, seed=1, k=5)

    # exhaustive oracle over the two candidates
    scores = {
        m: cross_validate(
            docs, labels, FeatureConfig(max_features=m), k=5, seed=1
        ).mean.weighted_f1
        for m in space["max_features"]
    }
    assert result.config.max_features == max(scores, key=scores.get)
    assert result.best_f1 == pytest.approx(max(scores.values()))


def test_search_prunes_dominated_trial():
    docs, labels = _separable_corpus(15, seed=9)
    space = {"max_features": [1, 40], "alpha": [1.0]}
    result = hyperparam_search(docs, labels, space, budget=10, seed=3, k=5)
    statuses = {t.config.max_features: set() for t in result.trace}
    for trial in result.trace:
        statuses[trial.config.max_features].add(trial.status)
    # the crippled config must get pruned at least once after a good
    # trial has completed
    assert "pruned" in statuses.get(1, set())
    for trial in result.trace:
        if trial.status == "pruned":
            assert len(trial.fold_f1) < 5


def test_search_first_trial_never_pruned_and_deterministic():
    docs, labels = _separable_corpus(12)
    space = {"max_features": [1, 30], "alpha": [0.5, 1.0]}
    a = hyperparam_search(docs, labels, space, budget=6, seed=7, k=4)
    b = hyperparam_search(docs, labels, space, budget=6, seed=7, k=4)
    assert a == b
    assert a.trace[0].status == "completed"
