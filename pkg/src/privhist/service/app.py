"""Service endpoints. Each handler is a plain function over the schema
models, so the CLI can call them in-process without a running server."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from ..geometry import GridSpec, Point, Rect
from ..histogram import NoisyHistogram, PointSet, range_query
from ..mechanisms import PrivacyBudget, RngStream
from ..tuner import TuneConfig, TuneResult, e2e_release, phase1_select, phase2_release
from ..harness.datasets import SynthSpec, synth_points
from ..harness.experiment import results_to_csv, run_experiment
from ..harness.workload import WorkloadSpec, gen_workload
from ..harness.config import build_experiment_config
from .. import oracle
from .schemas import (BenchRequest, BenchResponse, HistogramModel, OracleRequest,
                      OracleResponse, QueryRequest, QueryResponse, RectModel,
                      ReleaseRequest, ReleaseResponse, SynthRequest, SynthResponse,
                      TuneDiagnosticsModel, TuneRequest, TuneResponse)

app = FastAPI(title="privhist", description="Differentially private spatial "
              "histogram release with private grid-size tuning.")


def _bad_request(exc: ValueError) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def _point_set(points: list[tuple[float, float]], domain: RectModel | None) -> PointSet:
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if domain is not None:
        return PointSet(xs, ys, domain.to_rect())
    if xs.size == 0:
        raise ValueError("cannot infer a domain from an empty point list")
    lo_x, hi_x = float(xs.min()), float(xs.max())
    lo_y, hi_y = float(ys.min()), float(ys.max())
    if lo_x == hi_x:
        hi_x = lo_x + 1.0
    if lo_y == hi_y:
        hi_y = lo_y + 1.0
    return PointSet(xs, ys, Rect(lo_x, lo_y, hi_x, hi_y))


def _tune_config(req: TuneRequest, ps: PointSet) -> TuneConfig:
    if req.workload is not None:
        workload = tuple(r.to_rect() for r in req.workload)
    else:
        spec = WorkloadSpec(tuple(req.tune_workload.qr_fracs),
                            req.tune_workload.positions_per_size)
        workload = tuple(gen_workload(ps.domain, spec, RngStream(req.seed).child(0)))
    return TuneConfig(grid_candidates=tuple(req.grids), workload=workload,
                      budget=PrivacyBudget(req.epsilon, req.eps1_frac),
                      delta=req.delta, sensitivity_mode=req.sensitivity_mode,
                      debug=req.debug)


def _tune_response(result: TuneResult) -> TuneResponse:
    diagnostics = None
    if result.diagnostics is not None:
        d = result.diagnostics
        diagnostics = TuneDiagnosticsModel(
            grids=list(d.grids), scores=list(d.scores),
            sensitivities=list(d.sensitivities), probabilities=list(d.probabilities))
    return TuneResponse(selected_g=result.selected_g,
                        epsilon_spent=result.epsilon_spent, diagnostics=diagnostics)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/synth", response_model=SynthResponse)
def synth(req: SynthRequest) -> SynthResponse:
    try:
        clusters = tuple((c.weight, Point(c.cx, c.cy), c.std) for c in req.components)
        spec = SynthSpec(n_points=req.n_points, domain=req.domain.to_rect(),
                         clusters=clusters, uniform_weight=req.uniform_weight)
        ps = synth_points(spec, RngStream(req.seed))
    except ValueError as exc:
        raise _bad_request(exc)
    return SynthResponse(points=[(float(x), float(y)) for x, y in zip(ps.xs, ps.ys)],
                         domain=RectModel.from_rect(ps.domain))


@app.post("/tune", response_model=TuneResponse)
def tune(req: TuneRequest) -> TuneResponse:
    try:
        ps = _point_set(req.points, req.domain)
        cfg = _tune_config(req, ps)
        # Same substream layout as the e2e release, so tuning alone and the
        # full pipeline agree on the selected grid for a given seed.
        result = phase1_select(ps, cfg, RngStream(req.seed).child(1).child(0))
    except ValueError as exc:
        raise _bad_request(exc)
    return _tune_response(result)


@app.post("/release", response_model=ReleaseResponse)
def release(req: ReleaseRequest) -> ReleaseResponse:
    try:
        ps = _point_set(req.points, req.domain)
        rng = RngStream(req.seed).child(1)
        if req.grid_size is not None:
            noisy = phase2_release(ps, int(req.grid_size), req.epsilon, rng.child(1))
            selected_g, spent = int(req.grid_size), req.epsilon
        else:
            cfg = _tune_config(req, ps)
            result, noisy = e2e_release(ps, cfg, rng)
            selected_g, spent = result.selected_g, result.epsilon_spent
    except ValueError as exc:
        raise _bad_request(exc)
    hist = HistogramModel(domain=RectModel.from_rect(ps.domain),
                          g=noisy.grid.g, counts=[float(c) for c in noisy.counts])
    return ReleaseResponse(selected_g=selected_g, epsilon_spent=spent, histogram=hist)


@app.post("/query", response_model=QueryResponse)
def query(req: QueryRequest) -> QueryResponse:
    try:
        grid = GridSpec(req.histogram.domain.to_rect(), req.histogram.g)
        noisy = NoisyHistogram(grid, np.asarray(req.histogram.counts, dtype=float))
        estimate = range_query(noisy, req.rect.to_rect())
    except ValueError as exc:
        raise _bad_request(exc)
    return QueryResponse(estimate=estimate)


@app.post("/bench", response_model=BenchResponse)
def bench(req: BenchRequest) -> BenchResponse:
    try:
        overrides = req.model_dump(exclude={"points", "synth_mixture", "domain"},
                                   exclude_none=True)
        overrides["grids"] = tuple(req.grids)
        overrides["tune_qr_fracs"] = tuple(req.tune_qr_fracs)
        overrides["eval_qr_fracs"] = tuple(req.eval_qr_fracs)
        overrides["synth_mixture"] = tuple(
            (c.weight, c.cx, c.cy, c.std) for c in req.synth_mixture)
        if req.domain is not None:
            overrides["domain"] = req.domain.to_rect()
        points = None
        if req.points is not None:
            cfg_domain = req.domain.to_rect() if req.domain is not None else None
            points = _point_set(req.points, req.domain)
            overrides["dataset"] = "file"
            overrides["dataset_path"] = "<inline>"
            if cfg_domain is None:
                overrides["domain"] = points.domain
        cfg = build_experiment_config(overrides=overrides)
        result = run_experiment(cfg, points=points)
    except ValueError as exc:
        raise _bad_request(exc)
    return BenchResponse(csv=results_to_csv(result.rows), manifest=result.manifest)


@app.post("/oracle", response_model=OracleResponse)
def run_oracle(req: OracleRequest) -> OracleResponse:
    try:
        reports = default_oracle_suite(seed=req.seed,
                                       conservation_cases=req.conservation_cases,
                                       instances=req.instances, trials=req.trials)
    except ValueError as exc:
        raise _bad_request(exc)
    return OracleResponse(reports=reports, all_pass=all(r["pass"] for r in reports))


def default_oracle_suite(seed: int = 0, conservation_cases: int = 2000,
                         instances: int = 3, trials: int = 10000) -> list[dict]:
    """Seeded desk-scale verification run covering all four checks."""
    rng = RngStream(seed)
    reports = [oracle.check_overlap_conservation(rng.child(0), conservation_cases)]
    for k in range(instances):
        inst_rng = rng.child(100 + k)
        gen = inst_rng.generator()
        domain = Rect(0.0, 0.0, 8.0, 8.0)
        n = int(gen.integers(80, 200))
        xs = gen.uniform(0.0, 8.0, n)
        ys = gen.uniform(0.0, 8.0, n)
        # A planted cluster keeps the instances non-uniform.
        xs[: n // 3] = gen.uniform(1.0, 2.0, n // 3)
        ys[: n // 3] = gen.uniform(1.0, 2.0, n // 3)
        ps = PointSet(xs, ys, domain)
        wl_spec = WorkloadSpec((0.3, 0.5), 2)
        workload = tuple(gen_workload(domain, wl_spec, inst_rng.child(1)))
        cfg = TuneConfig(grid_candidates=(2, 4), workload=workload,
                         budget=PrivacyBudget(1.0, 0.2), delta=0.1)
        reports.append(oracle.check_score_sensitivity(ps, cfg))
        reports.append(oracle.check_exp_mechanism_dp(ps, cfg))
        reports.append(oracle.check_error_bound(
            ps, GridSpec(domain, 4), workload[0], lam=1.25,
            trials=trials, rng=inst_rng.child(2)))
    return reports
