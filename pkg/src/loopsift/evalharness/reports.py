"""Deterministic text rendering of report objects (CSV, Markdown, JSON)."""

from __future__ import annotations

import csv
import io
import json
from enum import Enum

from ..quality.alpha import ReliabilityReport
from .experiments import CrossSliceResult, DriftReport, IncrementalReport
from .metrics import Metrics
from .threshold import ThresholdBandReport


class ReportFormat(str, Enum):
    CSV = "CSV"
    MARKDOWN = "MARKDOWN"
    JSON = "JSON"


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _tabulate(report) -> tuple[list[str], list[list[str]], list[str]]:
    """Returns (headers, rows, footer lines) for table-style formats."""

    if isinstance(report, ThresholdBandReport):
        headers = ["HS Probability", "Total", "HS", "nonHS", "HS%"]
        rows = [
            [band.label, str(band.total), str(band.positives),
             str(band.negatives), str(band.positive_pct)]
            for band in report.bands
        ]
        footer = [
            "Recommended threshold: "
            + (f"{report.recommended:.2f}" if report.recommended is not None
               else "n/a"),
            "Minimum threshold: "
            + (f"{report.minimum:.2f}" if report.minimum is not None else "n/a"),
        ]
        return headers, rows, footer
    if isinstance(report, DriftReport):
        headers = ["cutoff", "n_train", "n_eval_in", "n_eval_out",
                   "f1_in", "f1_out", "delta_f1"]
        rows = [
            [row.cutoff.isoformat(), str(row.n_train), str(row.n_eval_in),
             str(row.n_eval_out), _fmt(row.in_period.weighted_f1),
             _fmt(row.out_of_period.weighted_f1), _fmt(row.delta_f1)]
            for row in report.rows
        ]
        return headers, rows, []
    if isinstance(report, IncrementalReport):
        headers = ["week", "pool", "train", "eval", "status",
                   "precision", "recall", "weighted_f1", "baseline_f1"]
        rows = []
        for row in report.rows:
            m = row.metrics
            rows.append([
                str(row.week), str(row.pool_size), str(row.train_size),
                str(row.eval_size), row.status,
                _fmt(m.precision) if m else "",
                _fmt(m.recall) if m else "",
                _fmt(m.weighted_f1) if m else "",
                _fmt(row.baseline_f1) if row.baseline_f1 is not None else "",
            ])
        return headers, rows, []
    if isinstance(report, CrossSliceResult):
        headers = ["scope", "source", "n_eval", "precision", "recall",
                   "weighted_f1"]
        rows = [
            ["in_slice", report.train_source, str(report.n_eval_in),
             _fmt(report.in_slice.precision), _fmt(report.in_slice.recall),
             _fmt(report.in_slice.weighted_f1)],
            ["zero_shot", report.test_source, str(report.n_eval_out),
             _fmt(report.zero_shot.precision), _fmt(report.zero_shot.recall),
             _fmt(report.zero_shot.weighted_f1)],
        ]
        return headers, rows, []
    # imported here, not at module top: the cross-validation module depends
    # on evalharness.metrics, so a top-level import would be circular
    from ..mnb.crossval import CvReport

    if isinstance(report, CvReport):
        headers = ["fold", "precision", "recall", "weighted_f1"]
        rows = [
            [str(i + 1), _fmt(m.precision), _fmt(m.recall), _fmt(m.weighted_f1)]
            for i, m in enumerate(report.per_fold)
        ]
        rows.append(["mean", _fmt(report.mean.precision),
                     _fmt(report.mean.recall), _fmt(report.mean.weighted_f1)])
        rows.append(["std", _fmt(report.std.precision),
                     _fmt(report.std.recall), _fmt(report.std.weighted_f1)])
        return headers, rows, []
    if isinstance(report, Metrics):
        headers = ["precision", "recall", "weighted_f1", "support_pos",
                   "support_neg"]
        rows = [[_fmt(report.precision), _fmt(report.recall),
                 _fmt(report.weighted_f1), str(report.support_pos),
                 str(report.support_neg)]]
        return headers, rows, []
    if isinstance(report, ReliabilityReport):
        headers = ["alpha", "n_items", "n_annotators", "n_pairable",
                   "degenerate"]
        rows = [[_fmt(report.alpha), str(report.n_items),
                 str(report.n_annotators), str(report.n_pairable),
                 str(report.degenerate).lower()]]
        return headers, rows, []
    raise TypeError(f"no table rendering for {type(report).__name__}")


def emit_report(report, fmt: ReportFormat | str = ReportFormat.CSV) -> str:
    """Render a report object to a deterministic string."""

    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.JSON:
        to_record = getattr(report, "to_record", None)
        if to_record is None:
            raise TypeError(f"no JSON rendering for {type(report).__name__}")
        return json.dumps(to_record(), indent=2) + "\n"

    headers, rows, footer = _tabulate(report)
    if fmt is ReportFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(rows)
        return buffer.getvalue()

    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) if rows
        else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "| " + " | ".join(h.ljust(widths[i]) for i, h in enumerate(headers)) + " |",
        "|" + "|".join("-" * (w + 2) for w in widths) + "|",
    ]
    for row in rows:
        lines.append(
            "| " + " | ".join(c.ljust(widths[i]) for i, c in enumerate(row)) + " |"
        )
    out = "\n".join(lines) + "\n"
    if footer:
        out += "\n" + "\n".join(footer) + "\n"
    return out
