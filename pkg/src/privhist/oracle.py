"""Brute-force verifiers for the bounds and privacy claims.

Each check builds its expected side independently of the code path it
examines (exhaustive neighbour enumeration, Monte-Carlo simulation, direct
geometry) and compares against the bound or distribution under test. All
checks are seeded, return JSON-serialisable reports shaped like
``{check, instance, observed, bound, pass}``, and never suppress an
observed violation.

Neighbour enumeration places the added point on a dense lattice so the
three qualitatively different positions are all exercised: outside the
query region and outside every overlapping cell (case 1), outside the
region but inside an overlapping cell (case 2), and inside the region
(case 3). The continuum cannot be enumerated, so lattice coverage is a
completeness limit, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import QueryStats, abs_error_bound, rel_error_bound
from .geometry import GridSpec, Point, Rect, cell_rect, locate, overlap_fraction, overlap_vector
from .histogram import PointSet, build, true_count
from .mechanisms import RngStream, laplace_noise
from .sensitivity import rel_sensitivity_avg
from .tuner import TuneConfig, candidate_score, phase1_probabilities

CASE_OUTSIDE_ALL = 1
CASE_IN_OVERLAPPING_CELL = 2
CASE_IN_REGION = 3


@dataclass(frozen=True)
class Neighbor:
    """A dataset one added point away from the base, with the point's case."""

    added: Point
    case: int
    points: PointSet


def neighbor_instances(ps: PointSet, qr: Rect, grid: GridSpec,
                       per_cell: int = 5) -> list[Neighbor]:
    """Neighbouring datasets from a lattice of added points.

    The lattice has ``per_cell`` positions per axis inside every cell of
    ``grid`` (cell-interior offsets, so no boundary ambiguity), classified
    against ``qr``.
    """
    overlapping = set(overlap_vector(grid, qr))
    offsets = (np.arange(per_cell) + 0.5) / per_cell
    xe, ye = grid.x_edges, grid.y_edges
    out = []
    for row in range(grid.g):
        ys = ye[row] + offsets * (ye[row + 1] - ye[row])
        for col in range(grid.g):
            xs = xe[col] + offsets * (xe[col + 1] - xe[col])
            for y in ys:
                for x in xs:
                    p = Point(float(x), float(y))
                    probe = PointSet(np.array([p.x]), np.array([p.y]), ps.domain)
                    if true_count(probe, qr) == 1:
                        case = CASE_IN_REGION
                    elif locate(grid, p) in overlapping:
                        case = CASE_IN_OVERLAPPING_CELL
                    else:
                        case = CASE_OUTSIDE_ALL
                    out.append(Neighbor(p, case, ps.with_extra_point(p.x, p.y)))
    return out


def check_score_sensitivity(ps: PointSet, cfg: TuneConfig,
                            per_cell: int = 5) -> dict:
    """Exhaustively verify |score(D) - score(D')| against the claimed bound.

    For every candidate grid and every lattice neighbour, the observed score
    change must not exceed the response-dependent sensitivity computed for
    that grid on the base dataset. Reports the worst observed/bound ratio.
    """
    lam = 1.0 / cfg.budget.eps2
    neighbors = neighbor_instances(
        ps, cfg.workload[0], GridSpec(ps.domain, cfg.grid_candidates[0]), per_cell)
    worst = 0.0
    worst_at = None
    violations = []
    for g in cfg.grid_candidates:
        s_base, alpha = candidate_score(ps, g, cfg.workload, lam, cfg.delta)
        bound = rel_sensitivity_avg(cfg.delta, len(ps), lam, alpha)
        for nb in neighbors:
            s_nb, _ = candidate_score(nb.points, g, cfg.workload, lam, cfg.delta)
            ratio = abs(s_base - s_nb) / bound
            if ratio > worst:
                worst = ratio
                worst_at = {"g": g, "case": nb.case, "x": nb.added.x, "y": nb.added.y}
            if ratio > 1.0:
                violations.append({"g": g, "case": nb.case,
                                   "x": nb.added.x, "y": nb.added.y,
                                   "delta_score": abs(s_base - s_nb), "bound": bound})
    return {
        "check": "score_sensitivity",
        "instance": {"n": len(ps), "grids": list(cfg.grid_candidates),
                     "n_queries": len(cfg.workload), "n_neighbors": len(neighbors),
                     "worst_at": worst_at},
        "observed": worst,
        "bound": 1.0,
        "pass": not violations,
        "violations": violations,
    }


def check_error_bound(ps: PointSet, grid: GridSpec, qr: Rect, lam: float,
                      trials: int, rng: RngStream, delta: float = 0.1) -> dict:
    """Monte-Carlo check that the error bounds dominate the actual expected error.

    Simulates the noisy release ``trials`` times; the empirical mean of
    |response - true| (and its relative form) must stay below the bound plus
    three standard errors. Overlap fractions are recomputed per cell with the
    direct rectangle formula rather than the factorised fast path.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    alphas = np.array([overlap_fraction(cell_rect(grid, i), qr)
                       for i in range(grid.n_cells)])
    counts = build(ps, grid).counts
    clean = float(alphas @ counts)
    truth = true_count(ps, qr)
    qs = QueryStats(alpha_l1=float(alphas.sum()), estimate=clean, true_mass=truth)
    bound_abs = abs_error_bound(qs, lam)
    rho = delta * len(ps)
    bound_rel = rel_error_bound(qs, lam, rho)

    noise = laplace_noise(rng, lam, trials * grid.n_cells).reshape(trials, grid.n_cells)
    abs_errs = np.abs(clean - truth + noise @ alphas)
    mc_abs = float(abs_errs.mean())
    se_abs = float(abs_errs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    denom = max(truth, rho)
    mc_rel = mc_abs / denom
    se_rel = se_abs / denom

    ok_abs = mc_abs <= bound_abs + 3.0 * se_abs
    ok_rel = mc_rel <= bound_rel + 3.0 * se_rel
    return {
        "check": "error_bound",
        "instance": {"n": len(ps), "g": grid.g, "lam": lam, "trials": trials,
                     "true_count": truth},
        "observed": {"abs_mc_mean": mc_abs, "abs_se": se_abs,
                     "rel_mc_mean": mc_rel, "rel_se": se_rel},
        "bound": {"abs": bound_abs, "rel": bound_rel},
        "pass": bool(ok_abs and ok_rel),
    }


def check_exp_mechanism_dp(ps: PointSet, cfg: TuneConfig,
                           per_cell: int = 5) -> dict:
    """Exact selection-probability ratio check against exp(eps1).

    Computes the closed-form phase-1 distribution for the base dataset and
    for every lattice neighbour (each evaluated with its own size-derived
    sanity bound and sensitivities, exactly as the mechanism would run on
    it), then verifies max(p/p', p'/p) <= exp(eps1) + 1e-9 over all
    candidates and neighbours.
    """
    eps1 = cfg.budget.eps1
    limit = math.exp(eps1) + 1e-9
    base = phase1_probabilities(ps, cfg).probabilities
    neighbors = neighbor_instances(
        ps, cfg.workload[0], GridSpec(ps.domain, cfg.grid_candidates[0]), per_cell)
    worst = 1.0
    worst_at = None
    violations = []
    for nb in neighbors:
        other = phase1_probabilities(nb.points, cfg).probabilities
        for r, (pb, pn) in enumerate(zip(base, other)):
            ratio = max(pb / pn, pn / pb)
            if ratio > worst:
                worst = ratio
                worst_at = {"g": cfg.grid_candidates[r], "case": nb.case,
                            "x": nb.added.x, "y": nb.added.y}
            if ratio > limit:
                violations.append({"g": cfg.grid_candidates[r], "case": nb.case,
                                   "x": nb.added.x, "y": nb.added.y, "ratio": ratio})
    return {
        "check": "exp_mechanism_dp",
        "instance": {"n": len(ps), "grids": list(cfg.grid_candidates),
                     "eps1": eps1, "n_neighbors": len(neighbors),
                     "worst_at": worst_at},
        "observed": worst,
        "bound": limit,
        "pass": not violations,
        "violations": violations,
    }


def check_overlap_conservation(rng: RngStream, cases: int) -> dict:
    """Randomised area-conservation check for the overlap computation.

    For random (domain, grid, region) triples the overlap fractions must
    satisfy sum_i alpha_i * Area(cell_i) = Area(region ∩ domain) to within
    1e-9 relative; the right side is computed directly from the rectangle
    coordinates.
    """
    gen = rng.generator()
    worst = 0.0
    failures = []
    for k in range(cases):
        x0, y0 = gen.uniform(-10.0, 10.0, 2)
        w, h = gen.uniform(0.5, 20.0, 2)
        domain = Rect(x0, y0, x0 + w, y0 + h)
        g = int(gen.integers(1, 33))
        grid = GridSpec(domain, g)
        # Region centres range beyond the domain so disjoint and straddling
        # configurations both occur.
        cx = gen.uniform(x0 - 0.5 * w, x0 + 1.5 * w)
        cy = gen.uniform(y0 - 0.5 * h, y0 + 1.5 * h)
        qw = gen.uniform(0.01 * w, 1.2 * w)
        qh = gen.uniform(0.01 * h, 1.2 * h)
        qr = Rect(cx - qw / 2, cy - qh / 2, cx + qw / 2, cy + qh / 2)

        lhs = sum(alpha * cell_rect(grid, i).area
                  for i, alpha in overlap_vector(grid, qr).items())
        xov = max(0.0, min(domain.x_max, qr.x_max) - max(domain.x_min, qr.x_min))
        yov = max(0.0, min(domain.y_max, qr.y_max) - max(domain.y_min, qr.y_min))
        rhs = xov * yov
        scale = max(lhs, rhs)
        err = abs(lhs - rhs) / scale if scale > 0 else 0.0
        worst = max(worst, err)
        if err > 1e-9:
            failures.append({"case": k, "domain": [x0, y0, x0 + w, y0 + h],
                             "g": g, "qr": [qr.x_min, qr.y_min, qr.x_max, qr.y_max],
                             "lhs": lhs, "rhs": rhs, "rel_err": err})
    return {
        "check": "overlap_conservation",
        "instance": {"cases": cases},
        "observed": worst,
        "bound": 1e-9,
        "pass": not failures,
        "failures": failures,
    }
