"""Operational surface: data ingestion, synthetic data, workloads,
evaluation metrics, and the experiment runner."""

from .config import build_experiment_config, parse_config_text, read_config_file
from .datasets import (CsvLoadResult, CsvParseError, SynthSpec, load_points_csv,
                       synth_points, write_points_csv)
from .evaluate import EvalReport, eval_relative_error
from .experiment import (ExperimentConfig, ExperimentResult, RESULT_COLUMNS,
                         results_to_csv, run_experiment, write_results)
from .workload import WorkloadSpec, gen_workload, gen_workload_by_size

__all__ = [
    "CsvLoadResult", "CsvParseError", "SynthSpec", "load_points_csv",
    "synth_points", "write_points_csv",
    "WorkloadSpec", "gen_workload", "gen_workload_by_size",
    "EvalReport", "eval_relative_error",
    "ExperimentConfig", "ExperimentResult", "RESULT_COLUMNS",
    "results_to_csv", "run_experiment", "write_results",
    "parse_config_text", "read_config_file", "build_experiment_config",
]
