"""Krippendorff's alpha for nominal data with missing entries.

Uses the coincidence-matrix formulation: for every unit (item) with
m_u >= 2 values, each ordered value pair contributes 1/(m_u - 1) to the
coincidence count o_ck.  Then

    alpha = 1 - D_o / D_e
    D_o   = (1/n)       * sum_{c != k} o_ck
    D_e   = (1/(n(n-1))) * sum_{c != k} n_c n_k

with n_c the marginal of value c and n the number of pairable values.
When every pairable value is identical, D_e = 0 and disagreement is not
measurable; the report then carries alpha = 1.0 with the degenerate flag
set rather than failing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ..errors import InsufficientDataError


@dataclass(frozen=True, slots=True)
class ReliabilityReport:
    alpha: float
    n_items: int
    n_annotators: int
    n_pairable: int
    degenerate: bool = False

    def to_record(self) -> dict:
        return {
            "alpha": self.alpha,
            "n_items": self.n_items,
            "n_annotators": self.n_annotators,
            "n_pairable": self.n_pairable,
            "degenerate": self.degenerate,
        }


def krippendorff_alpha(table: Sequence[Sequence[object]]) -> ReliabilityReport:
    """Alpha over an items x annotators matrix; None marks a missing cell."""

    n_items = len(table)
    n_annotators = max((len(row) for row in table), default=0)
    units = [[v for v in row if v is not None] for row in table]
    units = [u for u in units if len(u) >= 2]
    if len(units) < 2:
        raise InsufficientDataError(
            f"need >= 2 items with >= 2 annotations, got {len(units)}"
        )
    n_pairable = sum(len(u) for u in units)

    # within-unit pair counts, weighted by 1/(m_u - 1)
    observed_disagreement = 0.0
    marginals: Counter = Counter()
    for unit in units:
        m = len(unit)
        counts = Counter(unit)
        marginals.update(counts)
        for c in counts:
            for k in counts:
                if c != k:
                    observed_disagreement += counts[c] * counts[k] / (m - 1)

    n = n_pairable
    expected_disagreement = 0.0
    for c in marginals:
        for k in marginals:
            if c != k:
                expected_disagreement += marginals[c] * marginals[k]

    if expected_disagreement == 0.0:
        return ReliabilityReport(
            alpha=1.0,
            n_items=n_items,
            n_annotators=n_annotators,
            n_pairable=n_pairable,
            degenerate=True,
        )
    alpha = 1.0 - (n - 1) * observed_disagreement / expected_disagreement
    return ReliabilityReport(
        alpha=alpha,
        n_items=n_items,
        n_annotators=n_annotators,
        n_pairable=n_pairable,
    )
