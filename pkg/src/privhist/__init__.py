"""Differentially private spatial histograms with private grid-size tuning.

The pipeline releases a grid histogram of a sensitive planar point set in
two sequentially composed phases: the grid size is selected by the
exponential mechanism over data-dependent error bounds (spending eps1),
then the histogram at that size is released with Laplace-perturbed counts
(spending eps2). Range queries against the release weigh cell counts by
overlap fractions under the uniformity assumption.
"""

from .baselines import HeuristicParams, best_select, heuristic_grid_size, leaky_select
from .bounds import (QueryStats, SanityBound, WorkloadStats, abs_error_bound,
                     abs_score, avg_abs_error_bound, avg_rel_error_bound,
                     query_stats, rel_error_bound, score, workload_stats)
from .geometry import (GridSpec, Point, Rect, cell_rect, locate, overlap_fraction,
                       overlap_vector)
from .histogram import (Histogram, NoisyHistogram, PointSet, build, range_query,
                        true_count)
from .mechanisms import (NoiseSpec, PrivacyBudget, RngStream,
                         exp_mechanism_probabilities, exp_mechanism_sample,
                         laplace_noise, laplace_sample, perturb_histogram)
from .sensitivity import (SensitivityInputs, abs_sensitivity, rel_sensitivity_avg,
                          rel_sensitivity_global_maxcells, rel_sensitivity_global_maxr,
                          rel_sensitivity_single)
from .tuner import (Phase1Evaluation, SensitivityMode, TuneConfig, TuneDiagnostics,
                    TuneResult, UtilityParams, e2e_release, phase1_probabilities,
                    phase1_select, phase2_release, utility_tail_threshold)

__version__ = "0.1.0"

__all__ = [
    "Point", "Rect", "GridSpec", "cell_rect", "locate", "overlap_fraction",
    "overlap_vector",
    "PointSet", "Histogram", "NoisyHistogram", "build", "true_count", "range_query",
    "PrivacyBudget", "NoiseSpec", "RngStream", "laplace_sample", "laplace_noise",
    "perturb_histogram", "exp_mechanism_probabilities", "exp_mechanism_sample",
    "SanityBound", "QueryStats", "WorkloadStats", "query_stats", "workload_stats",
    "abs_error_bound", "rel_error_bound", "avg_abs_error_bound",
    "avg_rel_error_bound", "score", "abs_score",
    "SensitivityInputs", "rel_sensitivity_single", "rel_sensitivity_avg",
    "rel_sensitivity_global_maxr", "rel_sensitivity_global_maxcells",
    "abs_sensitivity",
    "SensitivityMode", "TuneConfig", "TuneDiagnostics", "TuneResult",
    "UtilityParams", "Phase1Evaluation", "phase1_probabilities", "phase1_select",
    "phase2_release", "e2e_release", "utility_tail_threshold",
    "HeuristicParams", "heuristic_grid_size", "leaky_select", "best_select",
]
