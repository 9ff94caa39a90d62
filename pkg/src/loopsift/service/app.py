"""HTTP service around the corpus store, queue, and retraining loop.

Moderation endpoints live under /api/v1 behind static bearer auth.  The
service also hosts the plain scoring wire contract (POST /score and
GET /health, unauthenticated) so one deployment can act as another's
external scorer.  The active model is swapped by a single reference
assignment, so every request scores against exactly one model version.
"""

from __future__ import annotations

import json
import logging
import threading
import time

from fastapi import Body, Depends, FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse

from ..clock import Clock, SystemClock, format_utc
from ..errors import (
    DuplicateIdError,
    EmptyClassError,
    EmptyCorpusError,
    LoopsiftError,
    NoCheckedItemsError,
    NoModelError,
    RetrainInProgressError,
    SingleClassError,
    TooFewPerClassError,
)
from ..evalharness.metrics import compute_metrics
from ..evalharness.splits import stratified_split_8020
from ..evalharness.threshold import compute_threshold_report
from ..hitl.balance import balance_5050
from ..hitl.policy import check_retrain_trigger
from ..hitl.queue import order_candidates
from ..hitl.weak import generate_weak_labels
from ..mnb.model import fit_text_model, load_model, predict_proba, save_model
from ..scorer import MnbScorer
from ..store.models import Annotation, AnnotationKind, TargetGroup
from ..store.store import CorpusStore
from ..textprep import full_tokens
from .config import ServiceConfig
from .registry import ModelRegistry, ModelRegistryEntry

logger = logging.getLogger("loopsift.service")

_STATUS_BY_CODE = {
    "UNKNOWN_EXAMPLE": 404,
    "SCHEME_VIOLATION": 422,
    "EMPTY_TEXT": 422,
    "MALFORMED_TIMESTAMP": 422,
    "QC_LARGER_THAN_POOL": 422,
    "DUPLICATE_ID": 409,
    "RETRAIN_IN_PROGRESS": 409,
    "NO_MODEL": 409,
    "NO_CHECKED_ITEMS": 409,
    "UNRESOLVED_TIE": 409,
    "SCORER_UNAVAILABLE": 503,
}


def create_app(
    config: ServiceConfig,
    *,
    store: CorpusStore | None = None,
    clock: Clock | None = None,
    trainer=None,
) -> FastAPI:
    """Build the application; `trainer(corpus, labels, version)` is injectable."""

    clock = clock or SystemClock()
    store = store or CorpusStore(config.store_root, clock)
    config.state_dir.mkdir(parents=True, exist_ok=True)
    registry = ModelRegistry(config.state_dir / "registry.json")

    app = FastAPI(title="loopsift", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.store = store
    app.state.clock = clock
    app.state.registry = registry
    app.state.active_scorer = None
    app.state.trainer = trainer
    app.state.retrain_lock = threading.Lock()
    app.state.retrain_thread = None
    app.state.retrain_last = None

    active = registry.active()
    if active is not None and active.path:
        app.state.active_scorer = MnbScorer(
            load_model(active.path), config.default_language
        )

    def require_auth(request: Request) -> None:
        if not config.auth_token:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {config.auth_token}":
            raise HTTPException(
                status_code=401,
                detail={"code": "UNAUTHORIZED", "message": "bad bearer token"},
            )

    @app.exception_handler(LoopsiftError)
    async def domain_error_handler(request: Request, exc: LoopsiftError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={
                "code": exc.code,
                "message": str(exc),
                "details": _jsonable(exc.details),
            },
        )

    @app.middleware("http")
    async def access_log(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        logger.info(
            json.dumps(
                {
                    "event": "request",
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "duration_ms": round(
                        (time.perf_counter() - started) * 1000, 3
                    ),
                },
                sort_keys=True,
            )
        )
        return response

    # --- scoring wire contract (unauthenticated) -----------------------------

    @app.get("/health")
    async def health():
        scorer = app.state.active_scorer
        return {
            "status": "ok",
            "model_version": scorer.version if scorer else None,
        }

    @app.post("/score")
    async def score(payload: dict = Body(...)):
        texts = payload.get("texts")
        if not isinstance(texts, list) or not all(
            isinstance(t, str) for t in texts
        ):
            raise HTTPException(
                status_code=400,
                detail={"code": "BAD_REQUEST", "message": "texts must be a "
                        "list of strings"},
            )
        languages = payload.get("languages")
        if languages is not None and (
            not isinstance(languages, list) or len(languages) != len(texts)
        ):
            raise HTTPException(
                status_code=400,
                detail={"code": "BAD_REQUEST", "message": "languages must "
                        "parallel texts"},
            )
        scorer = app.state.active_scorer  # one consistent reference
        if scorer is None:
            raise NoModelError("no active model")
        return {
            "probabilities": scorer.score_batch(texts, languages),
            "model_version": scorer.version,
        }

    # --- moderation API ------------------------------------------------------

    @app.post("/api/v1/ingest", dependencies=[Depends(require_auth)])
    async def ingest(payload: dict = Body(...)):
        examples = payload.get("examples")
        if not isinstance(examples, list) or not examples:
            raise HTTPException(
                status_code=400,
                detail={"code": "BAD_REQUEST", "message": "examples must be "
                        "a non-empty list"},
            )
        report = app.state.store.ingest_examples(examples)
        body = {
            "accepted": report.accepted,
            "rejected": [[example_id, code] for example_id, code
                         in report.rejected],
        }
        if report.accepted == 0 and report.rejected and all(
            code == "DUPLICATE_ID" for _, code in report.rejected
        ):
            return JSONResponse(status_code=409, content={
                "code": "DUPLICATE_ID",
                "message": "every submitted example already exists",
                **body,
            })
        return body

    @app.get("/api/v1/queue", dependencies=[Depends(require_auth)])
    async def queue(
        limit: int = Query(default=50, ge=1, le=5000),
        min_prob: float = Query(default=0.0, ge=0.0, le=1.0),
    ):
        store: CorpusStore = app.state.store
        candidates = []
        examples = {}
        for example, state in store.query_examples():
            if state.strong_label is not None:
                continue
            probability = (
                state.weak_probability
                if state.weak_probability is not None
                else 0.5
            )
            if probability < min_prob:
                continue
            candidates.append((example.id, probability))
            examples[example.id] = example
        ordered = order_candidates(candidates)
        items = [
            {
                "id": example_id,
                "probability": probability,
                "weak_label": store.label_state(example_id).weak_label,
                "text": examples[example_id].text,
                "source": examples[example_id].source,
                "language": examples[example_id].language,
                "created_at": format_utc(examples[example_id].created_at),
                "metadata": dict(examples[example_id].metadata or {}),
            }
            for example_id, probability in ordered[:limit]
        ]
        return {"items": items, "total_unreviewed": len(ordered)}

    @app.post(
        "/api/v1/items/{example_id}/review",
        dependencies=[Depends(require_auth)],
    )
    async def review(example_id: str, payload: dict = Body(...)):
        store: CorpusStore = app.state.store
        example = store.get_example(example_id)  # 404 when unknown
        state = store.label_state(example.id)
        if state.strong_label is not None:
            raise DuplicateIdError(
                f"{example_id} already has a strong label",
                id=example_id,
            )
        label = payload.get("label")
        if label not in (0, 1):
            raise HTTPException(
                status_code=422,
                detail={"code": "SCHEME_VIOLATION", "message": "label must "
                        "be 0 or 1"},
            )
        toxic = bool(payload.get("toxic", False))
        raw_targets = payload.get("targets", [])
        try:
            targets = frozenset(TargetGroup(t) for t in raw_targets)
        except ValueError as exc:
            raise HTTPException(
                status_code=422,
                detail={"code": "SCHEME_VIOLATION", "message": str(exc)},
            ) from exc
        annotation = Annotation(
            example_id=example.id,
            annotator_id=str(payload.get("annotator_id", "moderator")),
            label=label,
            toxic=toxic,
            targets=targets,
            kind=AnnotationKind.STRONG,
            created_at=app.state.clock.now(),
        )
        store.append_annotation(annotation)  # scheme violations -> 422
        new_state = store.resolve_strong_label(example.id)
        app.state.registry.note_review(example.id)
        return {
            "example_id": example.id,
            "strong_label": new_state.strong_label,
            "resolution": new_state.resolution.value,
        }

    @app.post("/api/v1/retrain", dependencies=[Depends(require_auth)])
    async def retrain(payload: dict = Body(default={})):
        force = bool(payload.get("force", False))
        registry: ModelRegistry = app.state.registry
        if app.state.retrain_lock.locked():
            raise RetrainInProgressError("a retrain is already running")
        due, reason = check_retrain_trigger(
            config.retrain_policy,
            app.state.clock.now(),
            registry.last_retrain_at(),
            registry.reviewed_since(),
        )
        if force:
            due, reason = True, reason or "FORCED"
        if not due:
            return {"status": "not_due", "reason": None}
        if not app.state.retrain_lock.acquire(blocking=False):
            raise RetrainInProgressError("a retrain is already running")
        thread = threading.Thread(
            target=_retrain_job, args=(app, reason), daemon=True
        )
        app.state.retrain_thread = thread
        thread.start()
        return JSONResponse(
            status_code=202, content={"status": "started", "reason": reason}
        )

    @app.get("/api/v1/retrain", dependencies=[Depends(require_auth)])
    async def retrain_status():
        registry: ModelRegistry = app.state.registry
        due, reason = check_retrain_trigger(
            config.retrain_policy,
            app.state.clock.now(),
            registry.last_retrain_at(),
            registry.reviewed_since(),
        )
        last_retrain_at = registry.last_retrain_at()
        return {
            "running": app.state.retrain_lock.locked(),
            "last": app.state.retrain_last,
            "due": due,
            "reason": reason,
            "reviewed_since": len(set(registry.reviewed_since())),
            "last_retrain_at": (
                format_utc(last_retrain_at) if last_retrain_at else None
            ),
            "policy": {
                "period_days": config.retrain_period_days,
                "volume": config.retrain_volume,
                "mode": config.trigger_mode,
            },
        }

    @app.get("/api/v1/reports/threshold", dependencies=[Depends(require_auth)])
    async def threshold_report():
        if app.state.active_scorer is None:
            raise NoModelError("no active model")
        store: CorpusStore = app.state.store
        probabilities = []
        labels = []
        for _, state in store.query_examples(label_status="strong"):
            if state.weak_probability is None:
                continue
            probabilities.append(state.weak_probability)
            labels.append(state.strong_label)
        if not probabilities:
            raise NoCheckedItemsError("no reviewed items carry a model score")
        return compute_threshold_report(probabilities, labels).to_record()

    @app.get("/api/v1/reports/metrics", dependencies=[Depends(require_auth)])
    async def metrics_report():
        registry: ModelRegistry = app.state.registry
        entry = registry.active()
        if entry is None:
            raise NoModelError("no active model")
        return {
            "model_version": entry.version,
            "trained_on_snapshot": entry.trained_on_snapshot,
            "metrics": entry.metrics_at_train,
            "activated_at": format_utc(entry.activated_at)
            if entry.activated_at
            else None,
        }

    @app.get("/api/v1/models", dependencies=[Depends(require_auth)])
    async def models():
        registry: ModelRegistry = app.state.registry
        active = registry.active()
        return {
            "models": [entry.to_record() for entry in registry.entries()],
            "active_version": active.version if active else None,
        }

    @app.post(
        "/api/v1/models/{version}/activate",
        dependencies=[Depends(require_auth)],
    )
    async def activate_model(version: str):
        registry: ModelRegistry = app.state.registry
        if registry.get(version) is None:
            raise HTTPException(
                status_code=404,
                detail={"code": "NO_MODEL",
                        "message": f"unknown model version: {version}"},
            )
        entry = _activate(app, version)
        return entry.to_record()

    if config.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/ui",
            StaticFiles(directory=config.ui_dir, html=True),
            name="ui",
        )

    return app


def _jsonable(details: dict) -> dict:
    try:
        json.dumps(details)
        return details
    except TypeError:
        return {key: repr(value) for key, value in details.items()}


def _activate(app: FastAPI, version: str) -> ModelRegistryEntry:
    registry: ModelRegistry = app.state.registry
    entry = registry.get(version)
    scorer = None
    if entry.path:
        scorer = MnbScorer(
            load_model(entry.path), app.state.config.default_language
        )
    stamped = registry.activate(version, app.state.clock.now())
    app.state.active_scorer = scorer  # the atomic swap
    return stamped


def _retrain_job(app: FastAPI, reason: str | None) -> None:
    store: CorpusStore = app.state.store
    config: ServiceConfig = app.state.config
    registry: ModelRegistry = app.state.registry
    clock: Clock = app.state.clock
    trainer = getattr(app.state, "trainer", None)
    try:
        snapshot = _grow_snapshot(store, config.seed)
        ids = list(snapshot.example_ids)
        strong = store.strong_label_map()
        labels = [strong[i] for i in ids]
        corpus = []
        for example_id in ids:
            example = store.get_example(example_id)
            corpus.append(full_tokens(example.text, example.language))
        version = f"v{snapshot.version}"
        train_idx, eval_idx = stratified_split_8020(labels, config.seed)
        train_corpus = [corpus[i] for i in train_idx]
        train_labels = [labels[i] for i in train_idx]
        if trainer is not None:
            model = trainer(train_corpus, train_labels, version)
        else:
            model = fit_text_model(train_corpus, train_labels, version=version)
        y_true = [labels[i] for i in eval_idx]
        y_pred = [predict_proba(model, corpus[i]).label for i in eval_idx]
        metrics = compute_metrics(y_true, y_pred)
        model_path = config.state_dir / f"model-{version}.json"
        save_model(model, model_path)
        entry = ModelRegistryEntry(
            version=version,
            kind="MNB",
            path=str(model_path),
            trained_on_snapshot=snapshot.version,
            metrics_at_train=metrics.to_record(),
            registered_at=clock.now(),
        )
        active_before = registry.active()
        registry.register(entry)
        activated = (
            active_before is None or metrics.weighted_f1 >= active_before.f1
        )
        if activated:
            _activate(app, version)
            generate_weak_labels(store, app.state.active_scorer)
        registry.mark_retrained(clock.now())
        app.state.retrain_last = {
            "status": "ok",
            "reason": reason,
            "model_version": version,
            "activated": activated,
            "metrics": metrics.to_record(),
            "finished_at": format_utc(clock.now()),
        }
    except LoopsiftError as exc:
        app.state.retrain_last = {
            "status": "failed",
            "reason": reason,
            "code": exc.code,
            "message": str(exc),
            "finished_at": format_utc(clock.now()),
        }
    finally:
        app.state.retrain_lock.release()


def _grow_snapshot(store: CorpusStore, seed: int):
    """Extend the latest snapshot with newly reviewed, balanced examples."""

    previous = store.latest_snapshot()
    previous_ids = set(previous.example_ids) if previous else set()
    strong = store.strong_label_map()
    new_pos = [i for i in sorted(strong)
               if strong[i] == 1 and i not in previous_ids]
    new_neg = [i for i in sorted(strong)
               if strong[i] == 0 and i not in previous_ids]
    try:
        additions = balance_5050(new_pos, new_neg, seed=seed)
    except EmptyClassError:
        if previous is None:
            raise
        return previous
    ids = (list(previous.example_ids) if previous else []) + list(additions)
    return store.snapshot_training_set(ids)
