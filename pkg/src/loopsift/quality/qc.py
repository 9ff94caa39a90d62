"""Quality-control overlap checks between annotators.

Every annotator in a wave answers the same shared QC items.  The report
computes pairwise agreement rates on those items, Krippendorff's alpha
over the QC submatrix, and flags annotators whose agreement with the
per-item majority falls below a floor.  The majority for an item is taken
over all annotators (the candidate included); items with a tied vote are
skipped for flagging purposes, so an annotator with no untied items is
vacuously unflagged.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import MissingQcAnnotationsError
from .alpha import ReliabilityReport, krippendorff_alpha


@dataclass(frozen=True, slots=True)
class QcReport:
    floor: float
    pair_agreement: dict[tuple[str, str], float]
    majority_agreement: dict[str, float]
    reliability: ReliabilityReport
    flagged: tuple[str, ...]

    def to_record(self) -> dict:
        return {
            "floor": self.floor,
            "pair_agreement": {
                f"{a}|{b}": rate for (a, b), rate in sorted(self.pair_agreement.items())
            },
            "majority_agreement": dict(sorted(self.majority_agreement.items())),
            "reliability": self.reliability.to_record(),
            "flagged": list(self.flagged),
        }


def qc_overlap_report(
    answers: Mapping[str, Mapping[str, int]],
    qc_ids: Sequence[str],
    floor: float = 0.6,
) -> QcReport:
    """Agreement report over the shared QC items.

    `answers` maps annotator id to that annotator's example_id -> label
    mapping; entries outside `qc_ids` are ignored.  Raises
    MissingQcAnnotationsError when any annotator lacks any QC item.
    """

    annotators = sorted(answers)
    if len(annotators) < 2:
        raise MissingQcAnnotationsError(
            f"need >= 2 annotators for overlap checks, got {len(annotators)}"
        )
    ids = list(dict.fromkeys(qc_ids))
    if not ids:
        raise MissingQcAnnotationsError("empty QC item set")
    missing = {
        annotator: [i for i in ids if i not in answers[annotator]]
        for annotator in annotators
    }
    missing = {a: gaps for a, gaps in missing.items() if gaps}
    if missing:
        raise MissingQcAnnotationsError(
            "QC items lack annotations",
            missing={a: list(gaps) for a, gaps in sorted(missing.items())},
        )

    pair_agreement: dict[tuple[str, str], float] = {}
    for i, a in enumerate(annotators):
        for b in annotators[i + 1 :]:
            hits = sum(1 for item in ids if answers[a][item] == answers[b][item])
            pair_agreement[(a, b)] = hits / len(ids)

    majority_agreement: dict[str, float] = {}
    flagged: list[str] = []
    for annotator in annotators:
        hits = 0
        counted = 0
        for item in ids:
            votes = Counter(answers[other][item] for other in annotators)
            top = votes.most_common()
            if len(top) > 1 and top[0][1] == top[1][1]:
                continue  # tied item carries no signal
            counted += 1
            if answers[annotator][item] == top[0][0]:
                hits += 1
        rate = hits / counted if counted else 1.0
        majority_agreement[annotator] = rate
        if rate < floor:
            flagged.append(annotator)

    table = [[answers[a][item] for a in annotators] for item in ids]
    reliability = krippendorff_alpha(table)
    return QcReport(
        floor=floor,
        pair_agreement=pair_agreement,
        majority_agreement=majority_agreement,
        reliability=reliability,
        flagged=tuple(flagged),
    )
