"""Continuous conditional random fields for time-series regression.

Two edge structures are available: the standard chain CCRF, which couples
neighbouring outputs, and the distance-to-mean DM-CCRF, which pulls every
output toward the running mean of the outputs before it.  A kernel extreme
learning machine supplies the baseline predictions both models refine.
"""
from .dataset import (
    ScalingParams,
    Schema,
    TimeSeriesDataset,
    chronological_split,
    load_csv,
    scale_apply,
    scale_fit,
)
from .elm import BaselineModel, ElmConfig, predict_kernel_elm, scenario_grid, train_kernel_elm
from .evaluation import EvalReport, head_to_head, mape, run_scenarios
from .gcrf import (
    CanonicalGaussian,
    Edge,
    GcrfParams,
    assemble_canonical,
    energy,
    log_density,
    log_likelihood_and_grad,
)
from .inference import predict, predict_with_std, predictive_variance
from .training import FitResult, TrainConfig, fit

__version__ = "0.1.0"

__all__ = [
    "BaselineModel", "CanonicalGaussian", "Edge", "ElmConfig", "EvalReport", "FitResult",
    "GcrfParams", "ScalingParams", "Schema", "TimeSeriesDataset", "TrainConfig",
    "assemble_canonical", "chronological_split", "energy", "fit", "head_to_head",
    "load_csv", "log_density", "log_likelihood_and_grad", "mape", "predict",
    "predict_kernel_elm", "predict_with_std", "predictive_variance", "run_scenarios", "scale_apply",
    "scale_fit", "scenario_grid", "train_kernel_elm",
]
