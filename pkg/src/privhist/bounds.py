"""Data-dependent error bounds on noisy range responses, and tuning scores.

The expected error of a Laplace-perturbed histogram on a query region
decomposes into two interpretable terms:

* aggregation error ``|estimate - true_mass|`` from the uniformity
  assumption failing on non-uniform data, and
* perturbation error ``lam * alpha_l1`` from the count noise, since each
  overlapped cell contributes its overlap fraction times an expected
  absolute noise of ``lam``.

The relative form divides by ``max(true_mass, rho)`` where ``rho`` is a
denominator floor (pseudo-count) that keeps small true counts from blowing
the ratio up. Tuning scores are the negated (averaged) bounds, so larger
is better and the maximum attainable score is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .geometry import Rect
from .histogram import Histogram, PointSet, response_and_alpha_l1, true_count


@dataclass(frozen=True)
class SanityBound:
    """Relative-error denominator floor ``rho = delta * n``; requires rho > 1."""

    delta: float
    rho: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie strictly between 0 and 1")
        if not self.rho > 1.0:
            raise ValueError(f"sanity bound rho must exceed 1, got {self.rho}")

    @classmethod
    def for_dataset(cls, delta: float, n: int) -> "SanityBound":
        return cls(delta, delta * n)


@dataclass(frozen=True)
class QueryStats:
    """Per-query aggregates: overlap mass, noiseless estimate, and true count."""

    alpha_l1: float
    estimate: float
    true_mass: int


@dataclass(frozen=True)
class WorkloadStats:
    per_query: tuple[QueryStats, ...]

    def __post_init__(self):
        if not self.per_query:
            raise ValueError("workload must contain at least one query")


def query_stats(ps: PointSet, h: Histogram, qr: Rect) -> QueryStats:
    """Noiseless response, true count, and overlap L1 mass for one region."""
    if h.grid.domain != ps.domain:
        raise ValueError("histogram domain must match point set domain")
    estimate, alpha_l1 = response_and_alpha_l1(h, qr)
    return QueryStats(alpha_l1=alpha_l1, estimate=estimate, true_mass=true_count(ps, qr))


def workload_stats(ps: PointSet, h: Histogram, workload: Sequence[Rect]) -> WorkloadStats:
    return WorkloadStats(tuple(query_stats(ps, h, qr) for qr in workload))


def _check_lam(lam: float) -> None:
    if lam < 0:
        raise ValueError("lambda must be non-negative")


def abs_error_bound(qs: QueryStats, lam: float) -> float:
    """Expected absolute error bound: aggregation term plus lam * ||alpha||_1.

    ``lam = 0`` isolates the aggregation term (the noiseless limit).
    """
    _check_lam(lam)
    return abs(qs.estimate - qs.true_mass) + lam * qs.alpha_l1


def rel_error_bound(qs: QueryStats, lam: float, rho: float) -> float:
    """Expected relative error bound with denominator floored at ``rho``."""
    if not rho > 1.0:
        raise ValueError(f"rho must exceed 1, got {rho}")
    return abs_error_bound(qs, lam) / max(qs.true_mass, rho)


def avg_abs_error_bound(ws: WorkloadStats, lam: float) -> float:
    """Mean absolute-error bound over a workload of query regions."""
    return sum(abs_error_bound(qs, lam) for qs in ws.per_query) / len(ws.per_query)


def avg_rel_error_bound(ws: WorkloadStats, lam: float, rho: float) -> float:
    """Mean relative-error bound over a workload of query regions."""
    return sum(rel_error_bound(qs, lam, rho) for qs in ws.per_query) / len(ws.per_query)


def score(ws: WorkloadStats, lam: float, rho: float) -> float:
    """Tuning score: negated average relative-error bound (never positive)."""
    return -avg_rel_error_bound(ws, lam, rho)


def abs_score(ws: WorkloadStats, lam: float) -> float:
    """Absolute-error score variant: negated average absolute-error bound."""
    return -avg_abs_error_bound(ws, lam)
