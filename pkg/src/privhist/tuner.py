"""Two-phase private histogram release with data-dependent grid tuning.

Phase 1 scores every candidate grid size by the negated average
relative-error bound its release would incur on a workload of tuning
query regions, then samples one grid via the exponential mechanism,
spending ``eps1``. Phase 2 rebuilds the histogram at the selected size
and releases it with i.i.d. Laplace noise of scale ``1/eps2``, spending
``eps2``. Sequential composition prices the whole pipeline at
``eps1 + eps2``.

The per-candidate diagnostics (raw scores, sensitivities, selection
probabilities) are computed on sensitive data and are NOT release-safe;
they are exposed only when a config explicitly asks for debug output.
The release-safe surface is exactly the selected grid size and the noisy
histogram.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .bounds import score, workload_stats
from .geometry import GridSpec, Rect
from .histogram import Histogram, NoisyHistogram, PointSet, build
from .mechanisms import (PrivacyBudget, RngStream, exp_mechanism_probabilities,
                         exp_mechanism_sample, perturb_histogram)
from .sensitivity import (rel_sensitivity_avg, rel_sensitivity_global_maxcells,
                          rel_sensitivity_global_maxr)


class SensitivityMode(str, enum.Enum):
    RESPONSE_DEPENDENT = "response_dependent"
    GLOBAL_MAXR = "global_maxr"
    GLOBAL_MAXCELLS = "global_maxcells"


@dataclass(frozen=True)
class TuneConfig:
    """Inputs to the tuning phase.

    Grid candidates are normalised to a sorted, duplicate-free tuple.
    ``delta`` defines the sanity bound ``rho = delta * |dataset|``, which
    must exceed 1 at run time.
    """

    grid_candidates: tuple[int, ...]
    workload: tuple[Rect, ...]
    budget: PrivacyBudget
    delta: float
    sensitivity_mode: SensitivityMode = SensitivityMode.RESPONSE_DEPENDENT
    debug: bool = False

    def __post_init__(self):
        grids = tuple(sorted(set(int(g) for g in self.grid_candidates)))
        if not grids:
            raise ValueError("grid_candidates must be non-empty")
        if grids[0] < 1:
            raise ValueError("grid candidates must be positive")
        object.__setattr__(self, "grid_candidates", grids)
        object.__setattr__(self, "workload", tuple(self.workload))
        if not self.workload:
            raise ValueError("workload must be non-empty")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie strictly between 0 and 1")
        object.__setattr__(self, "sensitivity_mode", SensitivityMode(self.sensitivity_mode))


@dataclass(frozen=True)
class TuneDiagnostics:
    """Per-candidate tuning internals. Privacy-sensitive: never release."""

    grids: tuple[int, ...]
    scores: tuple[float, ...]
    sensitivities: tuple[float, ...]
    probabilities: tuple[float, ...]


@dataclass(frozen=True)
class TuneResult:
    selected_g: int
    epsilon_spent: float
    diagnostics: TuneDiagnostics | None = None


class Phase1Evaluation(NamedTuple):
    """Closed-form tuning state for a dataset: scores, bounds, distribution."""

    grids: tuple[int, ...]
    scores: np.ndarray
    sensitivities: np.ndarray
    probabilities: np.ndarray


def candidate_score(ps: PointSet, g: int, workload: Sequence[Rect],
                    lam: float, delta: float) -> tuple[float, list[float]]:
    """Score of one candidate grid plus the per-query overlap L1 masses.

    The sanity bound is derived from the dataset itself (rho = delta*|ps|),
    so neighbouring datasets are scored against their own floors.
    """
    h = build(ps, GridSpec(ps.domain, g))
    ws = workload_stats(ps, h, workload)
    rho = delta * len(ps)
    return score(ws, lam, rho), [qs.alpha_l1 for qs in ws.per_query]


def phase1_probabilities(ps: PointSet, cfg: TuneConfig) -> Phase1Evaluation:
    """Deterministic part of phase 1: the exact selection distribution."""
    n = len(ps)
    if n < 1:
        raise ValueError("dataset must be non-empty")
    if not cfg.delta * n > 1.0:
        raise ValueError(
            f"sanity bound rho = delta*|D| = {cfg.delta * n} must exceed 1")
    lam = 1.0 / cfg.budget.eps2
    scores = []
    alpha_l1 = []
    for g in cfg.grid_candidates:
        s, a = candidate_score(ps, g, cfg.workload, lam, cfg.delta)
        scores.append(s)
        alpha_l1.append(a)
    alpha_mat = np.asarray(alpha_l1)  # [candidate, query]

    mode = cfg.sensitivity_mode
    if mode is SensitivityMode.RESPONSE_DEPENDENT:
        sens = [rel_sensitivity_avg(cfg.delta, n, lam, row) for row in alpha_mat]
    elif mode is SensitivityMode.GLOBAL_MAXR:
        shared = rel_sensitivity_global_maxr(cfg.delta, n, lam, alpha_mat.max(axis=0))
        sens = [shared] * len(cfg.grid_candidates)
    else:
        shared = rel_sensitivity_global_maxcells(cfg.delta, n, lam,
                                                 max(cfg.grid_candidates))
        sens = [shared] * len(cfg.grid_candidates)

    probs = exp_mechanism_probabilities(scores, sens, cfg.budget.eps1)
    return Phase1Evaluation(cfg.grid_candidates, np.asarray(scores, float),
                            np.asarray(sens, float), probs)


def phase1_select(ps: PointSet, cfg: TuneConfig, rng: RngStream) -> TuneResult:
    """Privately select a grid size; consumes ``eps1`` of the budget."""
    ev = phase1_probabilities(ps, cfg)
    idx = exp_mechanism_sample(rng, ev.probabilities)
    diagnostics = None
    if cfg.debug:
        diagnostics = TuneDiagnostics(ev.grids, tuple(ev.scores.tolist()),
                                      tuple(ev.sensitivities.tolist()),
                                      tuple(ev.probabilities.tolist()))
    return TuneResult(selected_g=ev.grids[idx], epsilon_spent=cfg.budget.eps1,
                      diagnostics=diagnostics)


def phase2_release(ps: PointSet, g_star: int, eps2: float, rng: RngStream) -> NoisyHistogram:
    """Rebuild the histogram at the selected size and perturb it; consumes eps2."""
    if g_star < 1:
        raise ValueError("grid size must be >= 1")
    h = build(ps, GridSpec(ps.domain, g_star))
    return perturb_histogram(h, eps2, rng)


def e2e_release(ps: PointSet, cfg: TuneConfig, rng: RngStream) -> tuple[TuneResult, NoisyHistogram]:
    """Full pipeline on distinct substreams; total budget spent is exactly epsilon.

    Only ``selected_g`` and the noisy histogram are safe to publish.
    """
    result = phase1_select(ps, cfg, rng.child(0))
    noisy = phase2_release(ps, result.selected_g, cfg.budget.eps2, rng.child(1))
    return replace(result, epsilon_spent=cfg.budget.epsilon), noisy


@dataclass(frozen=True)
class UtilityParams:
    """Inputs to the selection-quality tail bound."""

    delta_max: float     # largest per-candidate sensitivity bound
    eps1: float
    n_candidates: int
    n_opt: int           # number of candidates attaining the best score
    tau: float

    def __post_init__(self):
        if not self.delta_max > 0:
            raise ValueError("delta_max must be positive")
        if not self.eps1 > 0:
            raise ValueError("eps1 must be positive")
        if not 1 <= self.n_opt <= self.n_candidates:
            raise ValueError("need 1 <= n_opt <= n_candidates")
        if not self.tau > 0:
            raise ValueError("tau must be positive")


def utility_tail_threshold(up: UtilityParams) -> tuple[float, float]:
    """Tail bound on how far the selected grid's score can fall below optimal.

    Returns ``(gap, failure_prob)`` such that the selected candidate scores
    within ``gap`` of the best score except with probability at most
    ``failure_prob``:

        gap = (2*delta_max/eps1) * (ln(n_candidates/n_opt) + tau)
        failure_prob = exp(-tau)
    """
    gap = (2.0 * up.delta_max / up.eps1) * (math.log(up.n_candidates / up.n_opt) + up.tau)
    return gap, math.exp(-up.tau)
