from __future__ import annotations

import io
import json

import pytest

from conftest import EPOCH, make_annotation, ts
from loopsift.clock import LogicalClock
from loopsift.cli import main
from loopsift.mnb.model import load_model, predict_proba
from loopsift.quality.alpha import krippendorff_alpha
from loopsift.store.models import TargetGroup
from loopsift.store.store import CorpusStore
from loopsift.textprep import full_tokens

SUBCOMMANDS = (
    "synth", "ingest", "preprocess", "train", "predict", "evaluate",
    "threshold", "drift", "alpha", "cycle", "serve",
)


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def make_labeled_store(tmp_path, n=120, seed=3, capsys=None):
    """synth + ingest via the CLI, then strong-label everything from truth."""

    data = tmp_path / "data"
    store_dir = tmp_path / "store"
    code, _, _ = run_cli(
        capsys, "synth", "--out", str(data), "--n", str(n),
        "--weeks", "2", "--seed", str(seed),
    )
    assert code == 0
    code, _, _ = run_cli(
        capsys, "ingest", "--store", str(store_dir),
        str(data / "examples.jsonl"),
    )
    assert code == 0

    truth = {}
    for line in (data / "truth.jsonl").read_text().splitlines():
        record = json.loads(line)
        truth[record["id"]] = record

    store = CorpusStore(store_dir, clock=LogicalClock(ts(days=40)))
    for i, (example_id, record) in enumerate(sorted(truth.items())):
        store.append_annotation(
            make_annotation(
                example_id,
                "ann-a",
                record["label"],
                toxic=record["toxic"],
                targets=frozenset(TargetGroup(t) for t in record["targets"]),
                at=ts(days=40, seconds=i),
            )
        )
        store.resolve_strong_label(example_id)
    return store_dir, data, truth


# --- parser surface ---------------------------------------------------------------


def test_help_lists_every_subcommand(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--help"])
    assert excinfo.value.code == 0
    out = capsys.readouterr().out
    for name in SUBCOMMANDS:
        assert name in out


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["does-not-exist"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["train"])  # missing required --store/--out
    assert excinfo.value.code == 2


def test_domain_errors_exit_1_with_code(tmp_path, capsys):
    data = tmp_path / "data"
    store_dir = tmp_path / "store"
    run_cli(capsys, "synth", "--out", str(data), "--n", "20", "--weeks", "2")
    run_cli(capsys, "ingest", "--store", str(store_dir),
            str(data / "examples.jsonl"))
    # nothing is reviewed yet, so balancing the training set must fail
    code, _, err = run_cli(
        capsys, "train", "--store", str(store_dir),
        "--out", str(tmp_path / "model.json"),
    )
    assert code == 1
    assert err.startswith("error[EMPTY_CLASS]")


# --- synth / ingest ----------------------------------------------------------------


def test_synth_writes_examples_and_truth(tmp_path, capsys):
    data = tmp_path / "data"
    code, out, _ = run_cli(
        capsys, "synth", "--out", str(data), "--n", "30", "--weeks", "2",
        "--seed", "5",
    )
    assert code == 0
    assert json.loads(out) == {"examples": 30, "weeks": 2, "out": str(data)}
    examples = (data / "examples.jsonl").read_text().splitlines()
    truth = (data / "truth.jsonl").read_text().splitlines()
    assert len(examples) == 30
    assert len(truth) == 30
    first = json.loads(examples[0])
    assert first["id"] == "syn-00000"


def test_ingest_reports_duplicates_on_second_run(tmp_path, capsys):
    data = tmp_path / "data"
    store_dir = tmp_path / "store"
    run_cli(capsys, "synth", "--out", str(data), "--n", "10", "--weeks", "2")
    code, out, _ = run_cli(
        capsys, "ingest", "--store", str(store_dir),
        str(data / "examples.jsonl"),
    )
    assert code == 0
    assert json.loads(out)["accepted"] == 10
    code, out, _ = run_cli(
        capsys, "ingest", "--store", str(store_dir),
        str(data / "examples.jsonl"),
    )
    assert code == 0
    body = json.loads(out)
    assert body["accepted"] == 0
    assert len(body["rejected"]) == 10
    assert body["rejected"][0][1] == "DUPLICATE_ID"


# --- preprocess ----------------------------------------------------------------


def test_preprocess_matches_library(tmp_path, capsys):
    lines = [
        "Die Würde des Menschen ist UNANTASTBAR!!",
        "http://example.com/x ein Link und @user dazu",
        "wiederholte wiederholte Wörter",
    ]
    source = tmp_path / "texts.txt"
    source.write_text("\n".join(lines), encoding="utf-8")
    code, out, _ = run_cli(capsys, "preprocess", str(source))
    assert code == 0
    got = [json.loads(line) for line in out.splitlines()]
    assert got == [list(full_tokens(line, "DE")) for line in lines]


def test_preprocess_parallel_merge_is_deterministic(tmp_path, capsys):
    lines = [f"zeile nummer {i} mit ein paar Wörtern" for i in range(12)]
    source = tmp_path / "texts.txt"
    source.write_text("\n".join(lines), encoding="utf-8")
    _, serial, _ = run_cli(capsys, "preprocess", str(source), "--jobs", "1")
    _, parallel, _ = run_cli(capsys, "preprocess", str(source), "--jobs", "3")
    assert parallel == serial


def test_preprocess_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("Hallo schöne Welt\n"))
    code, out, _ = run_cli(capsys, "preprocess")
    assert code == 0
    assert json.loads(out.splitlines()[0]) == list(
        full_tokens("Hallo schöne Welt", "DE")
    )


# --- train / predict / evaluate ------------------------------------------------------


def test_train_predict_evaluate_roundtrip(tmp_path, capsys):
    store_dir, data, truth = make_labeled_store(tmp_path, capsys=capsys)
    model_path = tmp_path / "model.json"
    code, out, _ = run_cli(
        capsys, "train", "--store", str(store_dir),
        "--out", str(model_path), "--version", "v7",
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["version"] == "v7"
    assert summary["examples"] % 2 == 0  # balanced
    assert model_path.exists()

    # predict is a thin adapter: its output equals the library call
    examples = [
        json.loads(line)
        for line in (data / "examples.jsonl").read_text().splitlines()
    ]
    texts = [examples[0]["text"], examples[1]["text"]]
    probe = tmp_path / "probe.txt"
    probe.write_text("\n".join(texts), encoding="utf-8")
    code, out, _ = run_cli(
        capsys, "predict", "--model", str(model_path), str(probe)
    )
    assert code == 0
    model = load_model(model_path)
    for line, text in zip(out.splitlines(), texts):
        body = json.loads(line)
        expected = predict_proba(model, full_tokens(text, "DE"))
        assert body["probability"] == expected.probability
        assert body["label"] == expected.label

    code, out, _ = run_cli(
        capsys, "evaluate", "--store", str(store_dir),
        "--model", str(model_path),
    )
    assert code == 0
    metrics = json.loads(out)
    assert metrics["weighted_f1"] > 0.9  # clean labels, separable vocabulary


def test_predict_reads_stdin(tmp_path, monkeypatch, capsys):
    store_dir, _, _ = make_labeled_store(tmp_path, n=60, capsys=capsys)
    model_path = tmp_path / "model.json"
    run_cli(capsys, "train", "--store", str(store_dir), "--out", str(model_path))
    capsys.readouterr()
    monkeypatch.setattr("sys.stdin", io.StringIO("irgendein text\n"))
    code, out, _ = run_cli(capsys, "predict", "--model", str(model_path))
    assert code == 0
    body = json.loads(out.splitlines()[0])
    assert 0.0 <= body["probability"] <= 1.0


# --- reports ----------------------------------------------------------------


def test_threshold_report_formats(tmp_path, capsys):
    store_dir, _, truth = make_labeled_store(tmp_path, capsys=capsys)
    store = CorpusStore(store_dir, clock=LogicalClock(ts(days=50)))
    store.set_weak_labels(
        [
            (example_id, 0.93 if record["label"] == 1 else 0.22, "v1")
            for example_id, record in sorted(truth.items())
        ]
    )
    code, out, _ = run_cli(
        capsys, "threshold", "--store", str(store_dir), "--format", "CSV"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "HS Probability,Total,HS,nonHS,HS%"

    code, out, _ = run_cli(
        capsys, "threshold", "--store", str(store_dir), "--format", "JSON"
    )
    assert code == 0
    body = json.loads(out)
    assert body["recommended"] == 0.9
    assert body["n_scored"] == len(truth)


def test_drift_report_from_store(tmp_path, capsys):
    store_dir, _, _ = make_labeled_store(tmp_path, n=160, capsys=capsys)
    cutoff = "2019-01-14T00:00:00Z"  # between the two synthetic weeks
    code, out, _ = run_cli(
        capsys, "drift", "--store", str(store_dir), "--cutoff", cutoff,
        "--format", "JSON",
    )
    assert code == 0
    body = json.loads(out)
    assert len(body["rows"]) == 1
    assert {"in_period", "out_of_period", "delta_f1"} <= set(body["rows"][0])

    code, out, _ = run_cli(
        capsys, "drift", "--store", str(store_dir), "--cutoff", cutoff,
        "--format", "MARKDOWN",
    )
    assert code == 0
    assert out.startswith("|")


def test_alpha_from_json_table(tmp_path, capsys):
    table = [[1, 1, 1], [0, 0, 1], [1, 1, None], [0, 0, 0], [1, 0, 1]]
    path = tmp_path / "table.json"
    path.write_text(json.dumps(table), encoding="utf-8")
    code, out, _ = run_cli(capsys, "alpha", str(path))
    assert code == 0
    body = json.loads(out)
    expected = krippendorff_alpha(table)
    assert body["alpha"] == expected.alpha
    assert body["n_items"] == expected.n_items


# --- cycle ----------------------------------------------------------------


def test_cycle_command_runs_one_wave(tmp_path, capsys):
    data = tmp_path / "data"
    store_dir = tmp_path / "store"
    run_cli(capsys, "synth", "--out", str(data), "--n", "60", "--weeks", "2",
            "--seed", "1")
    run_cli(capsys, "ingest", "--store", str(store_dir),
            str(data / "examples.jsonl"))
    code, out, _ = run_cli(
        capsys, "cycle",
        "--store", str(store_dir),
        "--state", str(tmp_path / "cycle-state.json"),
        "--truth", str(data / "truth.jsonl"),
        "--annotators", "3", "--q", "0.0",
        "--slice-size", "20", "--qc-count", "5", "--seed", "1",
    )
    assert code == 0
    result = json.loads(out)
    assert result["wave"] == 1
    assert result["n_resolved"] > 0
    assert result["model_version"] == "v1"
