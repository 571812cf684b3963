"""Relative-error evaluation of released histograms on query workloads."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..geometry import Rect
from ..histogram import AnyHistogram, PointSet, range_query, true_count


@dataclass(frozen=True)
class EvalReport:
    """Per-query relative errors plus the median per size fraction.

    Evaluation uses plain relative error |response - true| / max(true, 1):
    no sanity bound, but a denominator floor of 1 so zero-true queries stay
    finite. Their number is reported per size so they can be filtered.
    """

    per_query: dict[float, tuple[float, ...]]
    median_by_frac: dict[float, float]
    zero_true_by_frac: dict[float, int]

    @property
    def zero_true_count(self) -> int:
        return sum(self.zero_true_by_frac.values())


def eval_relative_error(h: AnyHistogram, ps: PointSet,
                        workload: Mapping[float, Sequence[Rect]]) -> EvalReport:
    """Measure actual (not bounded) relative error per query region."""
    per_query: dict[float, tuple[float, ...]] = {}
    medians: dict[float, float] = {}
    zero_true: dict[float, int] = {}
    for frac, rects in workload.items():
        errs = []
        zeros = 0
        for qr in rects:
            t = true_count(ps, qr)
            if t == 0:
                zeros += 1
            errs.append(abs(range_query(h, qr) - t) / max(t, 1))
        per_query[frac] = tuple(errs)
        medians[frac] = float(np.median(errs))
        zero_true[frac] = zeros
    return EvalReport(per_query=per_query, median_by_frac=medians,
                      zero_true_by_frac=zero_true)
