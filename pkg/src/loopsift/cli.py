"""Command-line interface.

Each subcommand is a thin adapter over the library: it parses arguments,
calls the corresponding function, and prints the result.  Domain errors
exit with status 1 and print the stable error code; argparse usage
errors keep their conventional exit status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

from .clock import SystemClock, parse_utc
from .errors import LoopsiftError
from .evalharness.experiments import ExperimentDoc, temporal_drift_experiment
from .evalharness.reports import ReportFormat, emit_report
from .evalharness.synth import SyntheticCorpusSpec, generate_synthetic_corpus
from .evalharness.threshold import compute_threshold_report
from .evalharness.metrics import compute_metrics
from .hitl.annotator import SimulatedAnnotator
from .hitl.balance import balance_5050
from .hitl.cycle import CycleConfig, run_cycle
from .mnb.model import fit_text_model, load_model, predict_proba, save_model
from .quality.alpha import krippendorff_alpha
from .store.models import TargetGroup
from .store.store import CorpusStore
from .textprep import full_tokens


def _read_lines(path: str | None) -> list[str]:
    if path in (None, "-"):
        return [line.rstrip("\n") for line in sys.stdin]
    return Path(path).read_text(encoding="utf-8").splitlines()


def _read_jsonl(path: str) -> list[dict]:
    lines = _read_lines(path)
    return [json.loads(line) for line in lines if line.strip()]


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _store(args) -> CorpusStore:
    return CorpusStore(args.store, clock=SystemClock())


def _docs_from_store(store: CorpusStore) -> list[ExperimentDoc]:
    docs = []
    for example, state in store.query_examples(label_status="strong"):
        docs.append(
            ExperimentDoc(
                id=example.id,
                tokens=tuple(full_tokens(example.text, example.language)),
                label=state.strong_label,
                toxic=False,
                source=example.source,
                language=example.language,
                created_at=example.created_at,
                week=example.created_at.isocalendar()[1],
            )
        )
    return docs


# --- subcommand handlers --------------------------------------------------------


def cmd_synth(args) -> int:
    spec = SyntheticCorpusSpec(
        n_examples=args.n,
        n_weeks=args.weeks,
        positive_rate=args.positive_rate,
        toxic_rate=args.toxic_rate,
        drift_fraction=args.drift_fraction,
        drift_week=args.drift_week,
        slice_vocab_fraction=args.slice_vocab_fraction,
    )
    corpus = generate_synthetic_corpus(spec, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "examples.jsonl").open("w", encoding="utf-8") as fh:
        for example in corpus.examples:
            fh.write(json.dumps(example.to_record(), sort_keys=True) + "\n")
    with (out / "truth.jsonl").open("w", encoding="utf-8") as fh:
        for example in corpus.examples:
            truth = corpus.truth[example.id]
            fh.write(
                json.dumps(
                    {
                        "id": example.id,
                        "label": truth.label,
                        "toxic": truth.toxic,
                        "targets": [t.value for t in truth.targets],
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    _print_json(
        {
            "examples": len(corpus.examples),
            "weeks": spec.n_weeks,
            "out": str(out),
        }
    )
    return 0


def cmd_ingest(args) -> int:
    store = _store(args)
    records = []
    for path in args.files or [None]:
        records.extend(
            json.loads(line) for line in _read_lines(path) if line.strip()
        )
    report = store.ingest_examples(records)
    _print_json(
        {
            "accepted": report.accepted,
            "rejected": [[example_id, code] for example_id, code
                         in report.rejected],
        }
    )
    return 0


def _tokenize_one(text: str, language: str) -> list[str]:
    return list(full_tokens(text, language))


def cmd_preprocess(args) -> int:
    lines = _read_lines(args.file)
    worker = partial(_tokenize_one, language=args.language)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(worker, lines, chunksize=64))
    else:
        results = [worker(line) for line in lines]
    for tokens in results:
        print(json.dumps(tokens))
    return 0


def cmd_train(args) -> int:
    store = _store(args)
    strong = store.strong_label_map()
    ids = sorted(strong)
    if args.balance:
        positives = [i for i in ids if strong[i] == 1]
        negatives = [i for i in ids if strong[i] == 0]
        ids = list(balance_5050(positives, negatives, seed=args.seed))
    corpus = []
    labels = []
    for example_id in ids:
        example = store.get_example(example_id)
        corpus.append(full_tokens(example.text, example.language))
        labels.append(strong[example_id])
    model = fit_text_model(
        corpus, labels, alpha=args.alpha, version=args.version
    )
    save_model(model, args.out)
    _print_json(
        {
            "version": model.version,
            "examples": len(ids),
            "vocabulary": len(model.vocabulary),
            "out": str(args.out),
        }
    )
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    for line in _read_lines(args.file):
        tokens = full_tokens(line, args.language)
        prediction = predict_proba(model, tokens)
        print(
            json.dumps(
                {
                    "probability": prediction.probability,
                    "label": prediction.label,
                }
            )
        )
    return 0


def cmd_evaluate(args) -> int:
    store = _store(args)
    model = load_model(args.model)
    y_true = []
    y_pred = []
    for example, state in store.query_examples(label_status="strong"):
        tokens = full_tokens(example.text, example.language)
        y_true.append(state.strong_label)
        y_pred.append(predict_proba(model, tokens).label)
    metrics = compute_metrics(y_true, y_pred)
    _print_json(metrics.to_record())
    return 0


def cmd_threshold(args) -> int:
    store = _store(args)
    probabilities = []
    labels = []
    for _, state in store.query_examples(label_status="strong"):
        if state.weak_probability is None:
            continue
        probabilities.append(state.weak_probability)
        labels.append(state.strong_label)
    report = compute_threshold_report(probabilities, labels)
    print(emit_report(report, args.format), end="")
    return 0


def cmd_drift(args) -> int:
    store = _store(args)
    docs = _docs_from_store(store)
    cutoffs = [parse_utc(value) for value in args.cutoff]
    report = temporal_drift_experiment(docs, cutoffs, seed=args.seed)
    print(emit_report(report, args.format), end="")
    return 0


def cmd_alpha(args) -> int:
    raw = "\n".join(_read_lines(args.file))
    table = json.loads(raw)
    report = krippendorff_alpha(table)
    _print_json(report.to_record())
    return 0


def cmd_cycle(args) -> int:
    store = _store(args)
    truth = {}
    for record in _read_jsonl(args.truth):
        truth[record["id"]] = SimpleTruth(
            label=record["label"],
            toxic=record["toxic"],
            targets=tuple(TargetGroup(t) for t in record.get("targets", [])),
        )

    def make_annotator(annotator_id: str):
        sim = SimulatedAnnotator(
            seed=args.seed, q=args.q, annotator_id=annotator_id
        )

        def annotate(example):
            return sim.decide(example.id, truth[example.id])

        return annotate

    annotators = {
        f"sim-{i + 1}": make_annotator(f"sim-{i + 1}")
        for i in range(args.annotators)
    }
    config = CycleConfig(
        slice_size=args.slice_size,
        qc_count=args.qc_count,
        seed=args.seed,
    )
    reviewer = (lambda report: []) if args.on_qc == "accept" else None
    for _ in range(args.waves):
        result = run_cycle(
            store,
            args.state,
            annotators,
            config=config,
            clock=SystemClock(),
            qc_reviewer=reviewer,
        )
        _print_json(result.to_record())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.config import load_config

    config = load_config(args.config)
    overrides = {}
    if args.store is not None:
        overrides["store_root"] = args.store
    if args.state_dir is not None:
        overrides["state_dir"] = args.state_dir
    if args.retrain_period is not None:
        overrides["retrain_period_days"] = args.retrain_period
    if args.retrain_volume is not None:
        overrides["retrain_volume"] = args.retrain_volume
    if args.slice_size is not None:
        overrides["slice_size"] = args.slice_size
    if args.qc_count is not None:
        overrides["qc_count"] = args.qc_count
    if args.ui_dir is not None:
        overrides["ui_dir"] = args.ui_dir
    if overrides:
        merged = {**config.to_record(), **{
            key: str(value) if key in ("store_root", "state_dir") else value
            for key, value in overrides.items()
        }}
        from .service.config import ServiceConfig

        config = ServiceConfig(**merged)
    host = args.host or config.host
    port = args.port or config.port
    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")
    return 0


class SimpleTruth:
    """Minimal truth record for the simulated annotators."""

    __slots__ = ("label", "toxic", "targets")

    def __init__(self, label: int, toxic: bool, targets: tuple):
        self.label = label
        self.toxic = toxic
        self.targets = targets


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopsift",
        description="Human-in-the-loop hate speech classification pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--weeks", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--positive-rate", type=float, default=0.5)
    p.add_argument("--toxic-rate", type=float, default=0.24)
    p.add_argument("--drift-fraction", type=float, default=0.0)
    p.add_argument("--drift-week", type=int, default=None)
    p.add_argument("--slice-vocab-fraction", type=float, default=0.0)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("ingest", help="add example records to a corpus store")
    p.add_argument("--store", required=True)
    p.add_argument("files", nargs="*", help="JSONL files (stdin when empty)")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("preprocess", help="tokenize text, one line per input")
    p.add_argument("file", nargs="?", help="text file (stdin when omitted)")
    p.add_argument("--language", default="DE")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_preprocess)

    p = sub.add_parser("train", help="fit a model on reviewed examples")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--version", default="v1")
    p.add_argument(
        "--no-balance", dest="balance", action="store_false",
        help="train on all reviewed examples without 50/50 balancing",
    )
    p.set_defaults(handler=cmd_train, balance=True)

    p = sub.add_parser("predict", help="score text lines with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--language", default="DE")
    p.add_argument("file", nargs="?", help="text file (stdin when omitted)")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("evaluate", help="score a model against reviewed labels")
    p.add_argument("--store", required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("threshold", help="probability band report")
    p.add_argument("--store", required=True)
    p.add_argument(
        "--format", default="JSON", type=str.upper,
        choices=[f.value for f in ReportFormat],
    )
    p.set_defaults(handler=cmd_threshold)

    p = sub.add_parser("drift", help="before/after-cutoff performance report")
    p.add_argument("--store", required=True)
    p.add_argument(
        "--cutoff", action="append", required=True,
        help="UTC instant like 2019-03-01T00:00:00Z (repeatable)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--format", default="JSON", type=str.upper,
        choices=[f.value for f in ReportFormat],
    )
    p.set_defaults(handler=cmd_drift)

    p = sub.add_parser(
        "alpha", help="inter-annotator reliability from a JSON label table"
    )
    p.add_argument(
        "file", nargs="?",
        help="JSON file: rows are items, columns annotators, null missing",
    )
    p.set_defaults(handler=cmd_alpha)

    p = sub.add_parser(
        "cycle", help="run one annotate-QC-merge-retrain wave with "
        "simulated annotators",
    )
    p.add_argument("--store", required=True)
    p.add_argument("--state", required=True, help="cycle state JSON path")
    p.add_argument("--truth", required=True, help="truth JSONL from `synth`")
    p.add_argument("--annotators", type=int, default=3)
    p.add_argument("--q", type=float, default=0.1, help="label flip rate")
    p.add_argument("--waves", type=int, default=1)
    p.add_argument("--slice-size", type=int, default=500)
    p.add_argument("--qc-count", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--on-qc", choices=["accept", "block"], default="accept",
        help="accept flagged reviewers automatically or stop the wave",
    )
    p.set_defaults(handler=cmd_cycle)

    p = sub.add_parser("serve", help="run the HTTP review service")
    p.add_argument("--config", default=None, help="config JSON path")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--store", default=None)
    p.add_argument("--state-dir", default=None)
    p.add_argument("--retrain-period", type=float, default=None,
                   help="days between scheduled retrains")
    p.add_argument("--retrain-volume", type=int, default=None,
                   help="reviews that trigger a retrain")
    p.add_argument("--slice-size", type=int, default=None)
    p.add_argument("--qc-count", type=int, default=None)
    p.add_argument("--ui-dir", default=None,
                   help="serve the built moderator UI from this directory at /ui")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except LoopsiftError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
