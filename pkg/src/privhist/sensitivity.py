"""Sensitivity bounds for tuning scores under single-record dataset change.

The relative-error score of a candidate grid changes by a bounded amount
when one point is added to the dataset. For a single query the bound is

    1/(d*(d*n + 1)) + lam*a/(d*n*(d*n + 1)) + 1/(d*n + d)

with ``d`` the sanity-bound fraction, ``n`` the dataset size and ``a`` the
query's overlap L1 mass on that grid. Averaging scores over a workload
averages the bounds, which keeps the middle term dependent on the mean
overlap mass. Two response-independent relaxations are provided: replacing
each query's overlap mass by its maximum over candidate grids, or by the
cell count ``g_max**2`` of the largest candidate. They are successively
looser, never tighter.

The sanity bound is always derived as ``rho = delta * n`` inside these
formulas; callers pass ``delta`` and ``n``, never ``rho``, so score and
sensitivity can never disagree about it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


def _validate(delta: float, n: int, lam: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie strictly between 0 and 1")
    if n < 1:
        raise ValueError("dataset size must be >= 1")
    if not lam > 0:
        raise ValueError("lambda must be positive")


def rel_sensitivity_single(delta: float, n: int, lam: float, alpha_l1: float) -> float:
    """Score-change bound for one query region on one candidate grid."""
    _validate(delta, n, lam)
    if alpha_l1 < 0:
        raise ValueError("alpha_l1 must be non-negative")
    dn = delta * n
    return 1.0 / (delta * (dn + 1.0)) + lam * alpha_l1 / (dn * (dn + 1.0)) + 1.0 / (dn + delta)


def _mean(values: Sequence[float]) -> float:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("alpha_l1 sequence must be non-empty")
    if np.any(arr < 0):
        raise ValueError("alpha_l1 entries must be non-negative")
    return float(arr.mean())


def rel_sensitivity_avg(delta: float, n: int, lam: float,
                        alpha_l1_per_query: Sequence[float]) -> float:
    """Score-change bound for the workload-averaged score on one grid.

    Equals the single-query bound evaluated at the mean overlap mass.
    """
    return rel_sensitivity_single(delta, n, lam, _mean(alpha_l1_per_query))


def rel_sensitivity_global_maxr(delta: float, n: int, lam: float,
                                max_alpha_l1_per_query: Sequence[float]) -> float:
    """Response-independent bound: each query's overlap mass maximised over grids."""
    return rel_sensitivity_single(delta, n, lam, _mean(max_alpha_l1_per_query))


def rel_sensitivity_global_maxcells(delta: float, n: int, lam: float, g_max: int) -> float:
    """Coarsest bound: overlap mass replaced by the largest candidate's cell count."""
    if g_max < 1:
        raise ValueError("g_max must be >= 1")
    return rel_sensitivity_single(delta, n, lam, float(g_max) ** 2)


def abs_sensitivity() -> float:
    """Conservative constant bound for the absolute-error score variant."""
    return 1.0


@dataclass(frozen=True)
class SensitivityInputs:
    """Validated bundle of the quantities the relative bounds consume."""

    delta: float
    n: int
    lam: float
    alpha_l1_per_query: tuple[float, ...]

    def __post_init__(self):
        _validate(self.delta, self.n, self.lam)
        _mean(self.alpha_l1_per_query)

    def averaged(self) -> float:
        return rel_sensitivity_avg(self.delta, self.n, self.lam, self.alpha_l1_per_query)
