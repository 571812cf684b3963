"""Seeded experiment runner producing append-only CSV plus a JSON manifest."""

from __future__ import annotations

import dataclasses
import io
import json
import platform
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..baselines import HeuristicParams, best_select, heuristic_grid_size, leaky_select
from ..geometry import Point, Rect
from ..histogram import AnyHistogram, PointSet
from ..mechanisms import PrivacyBudget, RngStream
from ..tuner import TuneConfig, e2e_release, phase2_release
from .datasets import SynthSpec, load_points_csv, synth_points
from .evaluate import eval_relative_error
from .workload import WorkloadSpec, gen_workload, gen_workload_by_size

METHODS = ("e2e", "heuristic", "leaky", "best")

RESULT_COLUMNS = ("dataset", "method", "epsilon", "eps1_frac", "delta",
                  "sensitivity_mode", "qr_frac", "repeat", "selected_g",
                  "median_rel_err", "zero_true_count")


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat experiment description; field names double as config-file keys."""

    method: str
    dataset: str = "synth"                       # "synth" | "file"
    dataset_name: str = "synth"
    dataset_path: str | None = None
    domain: Rect | None = None                   # required for synth
    synth_points: int = 10000
    synth_mixture: tuple[tuple[float, float, float, float], ...] = ()
    synth_uniform: float = 1.0                   # weight of the uniform background
    grids: tuple[int, ...] = ()
    epsilon: float = 1.0
    eps1_frac: float = 0.2
    delta: float = 0.1
    sensitivity_mode: str = "response_dependent"
    tune_qr_fracs: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.8)
    tune_positions: int = 100
    eval_qr_fracs: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.8)
    eval_positions: int = 100
    repeats: int = 100
    seed: int = 0
    heuristic_c: float = 10.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.dataset not in ("synth", "file"):
            raise ValueError(f"dataset must be 'synth' or 'file', got {self.dataset!r}")
        if self.dataset == "file" and not self.dataset_path:
            raise ValueError("dataset_path required when dataset='file'")
        if self.dataset == "synth" and self.domain is None:
            raise ValueError("domain required when dataset='synth'")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.method != "heuristic" and not self.grids:
            raise ValueError("grids must be non-empty for tuning methods")


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[dict, ...]
    manifest: dict


def _load_dataset(cfg: ExperimentConfig, rng: RngStream) -> PointSet:
    if cfg.dataset == "file":
        return load_points_csv(cfg.dataset_path, cfg.domain).points
    clusters = tuple((w, Point(cx, cy), std) for w, cx, cy, std in cfg.synth_mixture)
    spec = SynthSpec(n_points=cfg.synth_points, domain=cfg.domain,
                     clusters=clusters, uniform_weight=cfg.synth_uniform)
    return synth_points(spec, rng)


def _run_method(cfg: ExperimentConfig, ps: PointSet, tune_workload,
                rng: RngStream) -> tuple[int, AnyHistogram]:
    if cfg.method == "e2e":
        tune_cfg = TuneConfig(
            grid_candidates=cfg.grids, workload=tuple(tune_workload),
            budget=PrivacyBudget(cfg.epsilon, cfg.eps1_frac), delta=cfg.delta,
            sensitivity_mode=cfg.sensitivity_mode)
        result, noisy = e2e_release(ps, tune_cfg, rng)
        return result.selected_g, noisy
    if cfg.method == "heuristic":
        g = heuristic_grid_size(HeuristicParams(len(ps), cfg.epsilon, cfg.heuristic_c))
        # The rule spends nothing on tuning, so the release gets the full budget.
        return g, phase2_release(ps, g, cfg.epsilon, rng)
    if cfg.method == "leaky":
        return leaky_select(ps, cfg.grids, tune_workload, cfg.epsilon, rng)
    return best_select(ps, cfg.grids)


def run_experiment(cfg: ExperimentConfig, *, points: PointSet | None = None) -> ExperimentResult:
    """Run ``repeats`` independent end-to-end trials and collect one row per
    (repeat, evaluation size fraction).

    Every repeat draws its tuning workload, mechanism randomness, and
    evaluation workload from independent substreams of the master seed, so
    output is deterministic per seed and repeats could run in parallel.
    """
    master = RngStream(cfg.seed)
    ps = points if points is not None else _load_dataset(cfg, master.child(0))
    rep_base = master.child(1)
    tune_spec = WorkloadSpec(cfg.tune_qr_fracs, cfg.tune_positions)
    eval_spec = WorkloadSpec(cfg.eval_qr_fracs, cfg.eval_positions)

    rows = []
    for rep in range(cfg.repeats):
        rep_rng = rep_base.child(rep)
        tune_workload = gen_workload(ps.domain, tune_spec, rep_rng.child(0))
        selected_g, released = _run_method(cfg, ps, tune_workload, rep_rng.child(1))
        eval_workload = gen_workload_by_size(ps.domain, eval_spec, rep_rng.child(2))
        report = eval_relative_error(released, ps, eval_workload)
        for frac in cfg.eval_qr_fracs:
            rows.append({
                "dataset": cfg.dataset_name,
                "method": cfg.method,
                "epsilon": cfg.epsilon,
                "eps1_frac": cfg.eps1_frac,
                "delta": cfg.delta,
                "sensitivity_mode": cfg.sensitivity_mode,
                "qr_frac": frac,
                "repeat": rep,
                "selected_g": selected_g,
                "median_rel_err": report.median_by_frac[frac],
                "zero_true_count": report.zero_true_by_frac[frac],
            })
    rows.sort(key=lambda r: (r["qr_frac"], r["repeat"]))
    manifest = {
        "config": _config_dict(cfg),
        "seed": cfg.seed,
        "n_points": len(ps),
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "privhist": _package_version(),
        },
    }
    return ExperimentResult(rows=tuple(rows), manifest=manifest)


def _config_dict(cfg: ExperimentConfig) -> dict:
    d = dataclasses.asdict(cfg)
    if cfg.domain is not None:
        d["domain"] = [cfg.domain.x_min, cfg.domain.y_min, cfg.domain.x_max, cfg.domain.y_max]
    return d


def _package_version() -> str:
    from importlib.metadata import PackageNotFoundError, version
    try:
        return version("privhist")
    except PackageNotFoundError:
        return "unknown"


def results_to_csv(rows, header: bool = True) -> str:
    """Render result rows with a fixed column order and repr-exact floats."""
    buf = io.StringIO()
    if header:
        buf.write(",".join(RESULT_COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(_format_cell(row[c]) for c in RESULT_COLUMNS) + "\n")
    return buf.getvalue()


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(result: ExperimentResult, out_path: str | Path) -> Path:
    """Append rows to the results CSV and write the manifest alongside it.

    The header is only written when the file does not exist yet; repeated
    runs accumulate rows. Returns the manifest path.
    """
    out_path = Path(out_path)
    new_file = not out_path.exists()
    with open(out_path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(results_to_csv(result.rows, header=new_file))
    manifest_path = out_path.with_suffix(out_path.suffix + ".manifest.json")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(result.manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path
