"""Kernel Extreme Learning Machine used as the baseline regressor.

The kernel form of an ELM is ridge regression in the feature space of a
kernel: with Gram matrix ``Omega`` over the training inputs and
regularization coefficient ``C``, the output weights are

    dual_coeffs = (Omega + I / C)^{-1} y

and a query ``x`` is predicted as ``sum_m k(x, x_m) * dual_coeffs[m]``.
The kernel is a Gaussian RBF ``exp(-||u - v||^2 / kernel_param)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.spatial.distance import cdist

from .errors import DimensionMismatch, SolveFailure

# (kernel_param, reg_coeff) for the fifteen benchmark scenarios, in order.
_SCENARIOS = (
    *((1.0, c) for c in (1, 5, 10, 50, 100, 500, 1000, 10_000, 1_000_000)),
    *((1e6, c) for c in (5, 10, 50, 100, 1000, 10_000)),
)


@dataclass(frozen=True)
class ElmConfig:
    kernel_param: float
    reg_coeff: float

    def __post_init__(self):
        for name in ("kernel_param", "reg_coeff"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class BaselineModel:
    train_inputs: np.ndarray
    dual_coeffs: np.ndarray
    config: ElmConfig

    def __post_init__(self):
        X = np.array(self.train_inputs, dtype=float, ndmin=2)
        a = np.array(self.dual_coeffs, dtype=float).ravel()
        if X.shape[0] != a.shape[0]:
            raise DimensionMismatch(
                f"{X.shape[0]} training rows but {a.shape[0]} dual coefficients"
            )
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(a))):
            raise ValueError("baseline model contains non-finite values")
        X.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "train_inputs", X)
        object.__setattr__(self, "dual_coeffs", a)

    def predict(self, query):
        return predict_kernel_elm(self, query)

    def save(self, path):
        np.savez(
            path,
            train_inputs=self.train_inputs,
            dual_coeffs=self.dual_coeffs,
            kernel_param=self.config.kernel_param,
            reg_coeff=self.config.reg_coeff,
        )

    @classmethod
    def load(cls, path):
        with np.load(path) as z:
            cfg = ElmConfig(float(z["kernel_param"]), float(z["reg_coeff"]))
            return cls(z["train_inputs"], z["dual_coeffs"], cfg)


def rbf_kernel(u, v, kernel_param):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DimensionMismatch(f"vectors of shape {u.shape} and {v.shape}")
    if not kernel_param > 0:
        raise ValueError("kernel_param must be positive")
    d = u - v
    return float(np.exp(-np.dot(d.ravel(), d.ravel()) / kernel_param))


def gram_matrix(A, B, kernel_param):
    """Pairwise RBF kernel values between the rows of ``A`` and ``B``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"{A.shape[1]} vs {B.shape[1]} columns")
    return np.exp(-cdist(A, B, "sqeuclidean") / kernel_param)


def train_kernel_elm(train, config: ElmConfig) -> BaselineModel:
    """Fit a kernel ELM on ``train`` (a dataset, or an ``(X, y)`` pair).

    Raises
    ------
    SolveFailure
        If ``Omega + I / reg_coeff`` is not numerically positive definite.
    """
    if isinstance(train, tuple):
        X, y = train
    else:
        X, y = train.features, train.targets
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"{X.shape[0]} inputs but {y.shape[0]} targets")
    if X.shape[0] < 1:
        raise ValueError("need at least one training row")
    omega = gram_matrix(X, X, config.kernel_param)
    omega[np.diag_indices_from(omega)] += 1.0 / config.reg_coeff
    try:
        factor = linalg.cho_factor(omega, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SolveFailure(
            f"regularized Gram matrix is not positive definite "
            f"(kernel_param={config.kernel_param}, reg_coeff={config.reg_coeff})"
        ) from exc
    coeffs = linalg.cho_solve(factor, y)
    if not np.all(np.isfinite(coeffs)):
        raise SolveFailure("kernel ELM solve produced non-finite coefficients")
    return BaselineModel(X, coeffs, config)


def predict_kernel_elm(model: BaselineModel, query):
    Q = np.atleast_2d(np.asarray(query, dtype=float))
    if Q.shape[1] != model.train_inputs.shape[1]:
        raise DimensionMismatch(
            f"query has {Q.shape[1]} columns, model was trained on "
            f"{model.train_inputs.shape[1]}"
        )
    return gram_matrix(Q, model.train_inputs, model.config.kernel_param) @ model.dual_coeffs


def crossfit_predictions(X, y, config: ElmConfig, folds=5):
    """Out-of-fold predictions over contiguous blocks.

    The rows are cut into ``folds`` consecutive blocks; each block is
    predicted by a model trained on all other rows.  Unlike in-sample
    predictions, the residuals reflect how the baseline behaves on unseen
    data, which is what the CRF weights have to be calibrated against.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    if not 2 <= folds <= n:
        raise ValueError(f"need 2 <= folds <= {n}, got {folds}")
    out = np.empty(n)
    for block in np.array_split(np.arange(n), folds):
        keep = np.ones(n, dtype=bool)
        keep[block] = False
        model = train_kernel_elm((X[keep], y[keep]), config)
        out[block] = predict_kernel_elm(model, X[block])
    return out


def scenario_grid():
    """The fifteen baseline configurations of the benchmark, scenario 1 first."""
    return [ElmConfig(g, c) for g, c in _SCENARIOS]
