"""Maximum-likelihood fitting of the CRF weights.

Parameters are optimized in log space, which keeps every weight strictly
positive and the precision positive definite without any projection step.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import NonFiniteObjective, NotPositiveDefinite, SequenceTooShort
from .gcrf import Edge, GcrfParams, as_baselines, log_likelihood_and_grad

log = logging.getLogger(__name__)

_STEP_GROWTH = 1.5
_MIN_STEP = 1e-12
# Box on log-weights; keeps exp() finite when a weight runs to 0 or infinity.
LOG_WEIGHT_BOUNDS = (math.log(1e-10), math.log(1e10))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    max_iters: int = 500
    rel_tol: float = 1e-6
    init_alpha: float = 1.0
    init_edge_weight: float = 0.01

    def __post_init__(self):
        for name in ("learning_rate", "rel_tol", "init_alpha", "init_edge_weight"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be a positive integer, got {self.max_iters}")


@dataclass(frozen=True)
class FitResult:
    params: GcrfParams
    final_log_likelihood: float
    iterations_used: int
    trajectory: tuple[float, ...]
    converged: bool
    gradient: np.ndarray = field(repr=False)


def _direction(grad, fisher, theta):
    """Fisher-scoring direction restricted to coordinates free to move.

    A coordinate sitting on a bound with the gradient pushing outward is
    frozen.  The information matrix is inverted through its eigenvalues,
    with tiny ones floored, since it becomes near-singular as a weight
    approaches zero.
    """
    lo, hi = LOG_WEIGHT_BOUNDS
    free = ~(((theta <= lo) & (grad < 0)) | ((theta >= hi) & (grad > 0)))
    d = np.zeros_like(grad)
    if not free.any():
        return d
    g = grad[free]
    lam, V = linalg.eigh(fisher[np.ix_(free, free)])
    floor = max(lam.max(), 0.0) * 1e-12
    if np.all(np.isfinite(lam)) and lam.max() > 0:
        step = V @ ((V.T @ g) / np.maximum(lam, floor))
        if np.all(np.isfinite(step)) and step @ g > 0:
            d[free] = step
            return d
    d[free] = g
    return d


def fit(train_targets, baselines, edge, config: TrainConfig = TrainConfig()) -> FitResult:
    """Maximize the log-likelihood by preconditioned gradient ascent.

    Each iteration tries ``theta + step * F^{-1} grad`` where ``F`` is the
    expected information in log-parameter space.  A trial that does not
    increase the log-likelihood (or leaves the positive-definite region) is
    retried at half the step, so the trajectory never decreases.  After an
    accepted step the step grows by 1.5, capped at the full scoring step 1.

    The fit is converged once the relative improvement falls below
    ``rel_tol`` and ``max|grad| <= 10 * rel_tol * |loglik|``.  It stops
    unconverged after ``max_iters`` accepted steps, when no step above 1e-12
    improves the objective, or when every weight is pinned at the bounds
    ``[1e-10, 1e10]`` imposed on all weights.
    """
    edge = Edge.parse(edge)
    f = as_baselines(baselines)
    y = np.asarray(train_targets, dtype=float).ravel()
    n = y.size
    if n < 2:
        raise SequenceTooShort(f"need at least two training targets, got {n}")
    if not np.all(np.isfinite(y)):
        raise NonFiniteObjective("training targets contain non-finite values")

    theta = np.log(np.append(np.full(f.shape[1], config.init_alpha), config.init_edge_weight))
    theta = np.clip(theta, *LOG_WEIGHT_BOUNDS)
    ll, grad, fisher = log_likelihood_and_grad(y, f, theta, edge, with_fisher=True)
    if not (math.isfinite(ll) and np.all(np.isfinite(grad))):
        raise NonFiniteObjective(f"log-likelihood at initialization is {ll}")

    trajectory = [ll]
    step = config.learning_rate
    converged = False
    iters = 0
    while iters < config.max_iters:
        accepted = None
        direction = _direction(grad, fisher, theta)
        if not direction.any():
            log.debug("%s fit pinned at parameter bounds", edge.value)
            break
        while step >= _MIN_STEP:
            trial = np.clip(theta + step * direction, *LOG_WEIGHT_BOUNDS)
            try:
                with np.errstate(over="raise", invalid="raise"):
                    ll_t, grad_t, fisher_t = log_likelihood_and_grad(
                        y, f, trial, edge, with_fisher=True
                    )
            except (NotPositiveDefinite, FloatingPointError, ValueError):
                ll_t = -math.inf
            if math.isfinite(ll_t) and ll_t >= ll and np.all(np.isfinite(grad_t)):
                accepted = (trial, ll_t, grad_t, fisher_t)
                break
            step *= 0.5
        if accepted is None:
            log.debug("%s fit stalled at iteration %d", edge.value, iters)
            break
        iters += 1
        improvement = (accepted[1] - ll) / max(abs(ll), 1e-300)
        theta, ll, grad, fisher = accepted
        trajectory.append(ll)
        if improvement < config.rel_tol and np.max(np.abs(grad)) <= 10 * config.rel_tol * abs(ll):
            converged = True
            break
        step = min(step * _STEP_GROWTH, 1.0)

    params = GcrfParams.from_log(theta)
    log.debug(
        "%s fit: ll=%.6g after %d iterations (converged=%s), alpha=%s, w=%.4g",
        edge.value, ll, iters, converged, params.alpha, params.edge_weight,
    )
    return FitResult(params, ll, iters, tuple(trajectory), converged, grad)
