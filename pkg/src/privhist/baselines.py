"""Comparison mechanisms: a fixed-rule heuristic, a semi-private tuner, and
a non-private oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import GridSpec, Rect
from .histogram import Histogram, NoisyHistogram, PointSet, build, range_query, true_count
from .mechanisms import RngStream, perturb_histogram


@dataclass(frozen=True)
class HeuristicParams:
    """Inputs to the fixed grid-size rule sqrt(N * epsilon / c)."""

    n: int
    epsilon: float
    c: float = 10.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")


def heuristic_grid_size(hp: HeuristicParams) -> int:
    """Grid size from the fixed rule, rounded to the nearest integer, floor 1.

    Data-value independent: only the dataset size enters.
    """
    m = math.sqrt(hp.n * hp.epsilon / hp.c)
    return max(1, int(math.floor(m + 0.5)))


def leaky_select(ps: PointSet, grids: Sequence[int], workload: Sequence[Rect],
                 epsilon: float, rng: RngStream) -> tuple[int, NoisyHistogram]:
    """Semi-private baseline: noisy releases, non-private comparison.

    Every candidate gets a fresh full-budget noisy release (scale 1/epsilon),
    whose actual relative error on the workload is then measured against the
    true counts -- a comparison on sensitive data that spends no budget. The
    argmin candidate wins, ties broken toward the smaller grid.
    """
    if not grids:
        raise ValueError("grids must be non-empty")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not workload:
        raise ValueError("workload must be non-empty")
    truths = [true_count(ps, qr) for qr in workload]
    best: tuple[int, NoisyHistogram] | None = None
    best_err = math.inf
    for i, g in enumerate(sorted(set(int(g) for g in grids))):
        noisy = perturb_histogram(build(ps, GridSpec(ps.domain, g)), epsilon, rng.child(i))
        errs = [abs(range_query(noisy, qr) - t) / max(t, 1)
                for qr, t in zip(workload, truths)]
        mean_err = sum(errs) / len(errs)
        if mean_err < best_err:
            best_err = mean_err
            best = (g, noisy)
    assert best is not None
    return best


def best_select(ps: PointSet, grids: Sequence[int]) -> tuple[int, Histogram]:
    """Non-private oracle: the exact histogram at the largest candidate.

    With zero perturbation error, only aggregation error remains and finer
    grids never aggregate more, so the largest grid is always chosen.
    """
    if not grids:
        raise ValueError("grids must be non-empty")
    g = max(int(g) for g in grids)
    return g, build(ps, GridSpec(ps.domain, g))
