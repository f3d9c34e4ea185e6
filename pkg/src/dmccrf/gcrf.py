"""Gaussian conditional random fields over a single time-ordered sequence.

The unnormalized log-density of outputs ``y`` (length N) given baseline
predictions ``f`` (N x K1) is the potential

    psi(y) = -sum_i sum_k alpha_k (y_i - f_ik)^2 - w * edge_penalty(y)

with one of two edge penalties:

* ``Edge.CHAIN``: ``sum_{i=1}^{N-1} (y_i - y_{i+1})^2`` couples neighbours.
* ``Edge.DM``: ``sum_{i=2}^{N} (y_i - m_i)^2`` pulls each output toward
  the mean ``m_i`` of all outputs before it.

Both penalties are quadratic forms ``y' C0 y`` so ``psi`` is a Gaussian in
canonical form.  Writing ``A = diag(sum_k alpha_k)`` and ``C = w * C0``:

    psi(y) = -1/2 y' P y + b' y + const,   P = 2 (A + C),   b = 2 f alpha

The factor 2 keeps ``exp(psi)`` and the ``exp(-1/2 ...)`` Gaussian density
literally the same function of ``y``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DimensionMismatch, NotPositiveDefinite, SequenceTooShort

_LOG_2PI = math.log(2.0 * math.pi)


class Edge(str, enum.Enum):
    """Edge feature family."""

    CHAIN = "chain"
    DM = "dm"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"chain": cls.CHAIN, "ccrf": cls.CHAIN, "dm": cls.DM, "dm-ccrf": cls.DM}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown edge variant {value!r}") from None


@dataclass(frozen=True)
class GcrfParams:
    """Variable-feature weights ``alpha`` (length K1) and one edge weight.

    Weights must be finite and non-negative.  Zero weights are accepted so
    that boundary cases can be evaluated through :func:`energy`, but a
    proper distribution needs every ``alpha_k > 0`` and ``edge_weight > 0``.
    """

    alpha: np.ndarray
    edge_weight: float

    def __post_init__(self):
        a = np.array(self.alpha, dtype=float, ndmin=1).ravel()
        w = float(self.edge_weight)
        if a.size == 0:
            raise ValueError("alpha must have at least one entry")
        if not (np.all(np.isfinite(a)) and math.isfinite(w)):
            raise ValueError("parameters must be finite")
        if np.any(a < 0) or w < 0:
            raise ValueError("parameters must be non-negative")
        a.flags.writeable = False
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "edge_weight", w)

    @property
    def n_baselines(self):
        return self.alpha.size

    def to_log(self):
        return np.append(np.log(self.alpha), math.log(self.edge_weight))

    @classmethod
    def from_log(cls, log_params):
        p = np.exp(np.asarray(log_params, dtype=float))
        return cls(p[:-1], p[-1])


@dataclass(frozen=True, eq=False)
class CanonicalGaussian:
    """``N(mean, precision^{-1})`` together with its Cholesky factor.

    ``log_norm`` is ``N/2 log(2 pi) - 1/2 log det(precision)``, the log of the
    normalizer of ``exp(-1/2 (y - mean)' precision (y - mean))``.
    """

    precision: np.ndarray
    linear: np.ndarray
    mean: np.ndarray
    log_norm: float
    _chol: tuple = field(repr=False)

    @property
    def size(self):
        return self.mean.size

    def covariance(self):
        return linalg.cho_solve(self._chol, np.eye(self.size))

    def variance(self):
        """Diagonal of the covariance, via the inverse Cholesky factor."""
        L = self._chol[0]
        Linv = linalg.solve_triangular(L, np.eye(self.size), lower=True)
        return np.einsum("ij,ij->j", Linv, Linv)

    def logdet_precision(self):
        return 2.0 * np.sum(np.log(np.diag(self._chol[0])))


def as_baselines(f):
    """Coerce baseline predictions to an N x K1 float matrix."""
    f = np.asarray(f, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    if f.ndim != 2:
        raise DimensionMismatch(f"baselines must be N x K1, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("baseline predictions must be finite")
    return f


def _check(baselines, params):
    f = as_baselines(baselines)
    if f.shape[1] != params.n_baselines:
        raise DimensionMismatch(
            f"{f.shape[1]} baseline columns but {params.n_baselines} alpha weights"
        )
    return f


def dm_running_means(y):
    """Means of all preceding values, ``m_2 .. m_N`` (``m_1`` is undefined)."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] < 2:
        raise SequenceTooShort("running means need at least two values")
    return np.cumsum(y, axis=-1)[..., :-1] / np.arange(1, y.shape[-1])


def edge_penalty(y, edge):
    """Unit-weight edge penalty evaluated term by term; ``y`` may be batched
    along leading axes."""
    edge = Edge.parse(edge)
    y = np.asarray(y, dtype=float)
    if y.shape[-1] < 2:
        return np.zeros(y.shape[:-1])
    if edge is Edge.CHAIN:
        d = y[..., 1:] - y[..., :-1]
    else:
        d = y[..., 1:] - dm_running_means(y)
    return np.einsum("...i,...i->...", d, d)


def energy(y, baselines, params: GcrfParams, edge):
    """The potential ``psi(y)``; always <= 0.

    Accepts a single sequence of shape ``(N,)`` or a batch ``(..., N)``.
    """
    f = _check(baselines, params)
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != f.shape[0]:
        raise DimensionMismatch(f"y has length {y.shape[-1]}, baselines have {f.shape[0]} rows")
    variable = 0.0
    # One baseline column at a time: K1 is small and this avoids a trailing
    # (..., N, K1) temporary, which is slow for large batches.
    for k, a in enumerate(params.alpha):
        resid = y - f[:, k]
        variable = variable + a * np.einsum("...i,...i->...", resid, resid)
    out = -variable - params.edge_weight * edge_penalty(y, edge)
    return float(out) if np.ndim(out) == 0 else out


def build_A(alpha, n):
    return np.sum(alpha) * np.eye(n)


def _edge_rows(edge, n):
    """Rows ``v`` with ``edge_penalty(y) = sum (v . y)^2``."""
    V = np.zeros((n - 1, n))
    if edge is Edge.CHAIN:
        idx = np.arange(n - 1)
        V[idx, idx] = 1.0
        V[idx, idx + 1] = -1.0
    else:
        for i in range(1, n):
            V[i - 1, :i] = -1.0 / i
            V[i - 1, i] = 1.0
    return V


def build_C(edge, edge_weight, n):
    """Symmetric PSD matrix with ``y' C y = edge_weight * edge_penalty(y)``."""
    edge = Edge.parse(edge)
    if n < 2:
        raise SequenceTooShort(f"edge matrix needs N >= 2, got {n}")
    V = _edge_rows(edge, n)
    return edge_weight * (V.T @ V)


def build_linear(alpha, baselines):
    f = as_baselines(baselines)
    alpha = np.asarray(alpha, dtype=float).ravel()
    if f.shape[1] != alpha.size:
        raise DimensionMismatch(f"{f.shape[1]} baseline columns but {alpha.size} weights")
    return 2.0 * f @ alpha


def _canonical(f, params, edge, unit_C):
    n = f.shape[0]
    # C is PSD, so the precision is SPD exactly when sum(alpha) > 0.
    if not np.sum(params.alpha) > 0:
        raise NotPositiveDefinite(f"precision is singular: alpha={params.alpha.tolist()}")
    precision = 2.0 * (build_A(params.alpha, n) + params.edge_weight * unit_C)
    linear = build_linear(params.alpha, f)
    try:
        chol = linalg.cho_factor(precision, lower=True)
    except linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            f"precision is not positive definite (alpha={params.alpha.tolist()}, "
            f"edge_weight={params.edge_weight}, edge={edge.value})"
        ) from exc
    mean = linalg.cho_solve(chol, linear)
    log_norm = 0.5 * n * _LOG_2PI - np.sum(np.log(np.diag(chol[0])))
    for a in (precision, linear, mean):
        a.flags.writeable = False
    return CanonicalGaussian(precision, linear, mean, float(log_norm), chol)


def assemble_canonical(baselines, params: GcrfParams, edge) -> CanonicalGaussian:
    """Precision ``2 (A + C)``, linear term ``2 f alpha`` and the mean.

    Raises
    ------
    SequenceTooShort
        For sequences shorter than two.
    NotPositiveDefinite
        If the precision cannot be Cholesky-factored.
    """
    edge = Edge.parse(edge)
    f = _check(baselines, params)
    n = f.shape[0]
    if n < 2:
        raise SequenceTooShort(f"need N >= 2, got {n}")
    return _canonical(f, params, edge, build_C(edge, 1.0, n))


def log_density(cg: CanonicalGaussian, y):
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != cg.size:
        raise DimensionMismatch(f"y has length {y.shape[-1]}, distribution has {cg.size}")
    d = y - cg.mean
    quad = np.einsum("...i,ij,...j->...", d, cg.precision, d)
    out = -0.5 * quad - cg.log_norm
    return float(out) if np.ndim(out) == 0 else out


def log_likelihood_and_grad(y_true, baselines, log_params, edge, with_fisher=False):
    """Log-likelihood of ``y_true`` and its gradient in log-parameter space.

    ``log_params`` holds ``log alpha_1 .. log alpha_K1`` followed by
    ``log edge_weight``.  With ``mu`` the mean and ``P`` the precision,

        d/d alpha_k = -y'y + mu'mu + 2 f_k'(y - mu) + tr(P^{-1})
        d/d w       = -y'C0 y + mu'C0 mu + tr(P^{-1} C0)

    and the chain rule multiplies each by the parameter itself.  With
    ``with_fisher`` the expected information matrix in the same coordinates
    is returned as a third value.
    """
    edge = Edge.parse(edge)
    params = GcrfParams.from_log(log_params)
    f = _check(baselines, params)
    y = np.asarray(y_true, dtype=float).ravel()
    n = f.shape[0]
    if y.size != n:
        raise DimensionMismatch(f"y has length {y.size}, baselines have {n} rows")
    if n < 2:
        raise SequenceTooShort(f"need N >= 2, got {n}")
    C0 = build_C(edge, 1.0, n)
    cg = _canonical(f, params, edge, C0)
    ll = log_density(cg, y)

    mu = cg.mean
    cov = cg.covariance()
    resid = y - mu
    d_alpha = -(y @ y) + mu @ mu + 2.0 * (f.T @ resid) + np.trace(cov)
    d_w = -(y @ C0 @ y) + mu @ C0 @ mu + np.sum(cov * C0)
    grad = np.append(d_alpha * params.alpha, d_w * params.edge_weight)
    if not with_fisher:
        return ll, grad
    return ll, grad, _fisher(f, params, mu, cov, C0)


def _fisher(f, params, mu, cov, C0):
    """Expected information in log-parameter space.

    For ``y ~ N(mu, P^{-1})`` with derivatives ``P_j`` and ``b_j``:
    ``F_ij = (b_i - P_i mu)' P^{-1} (b_j - P_j mu) + 1/2 tr(P_i P^{-1} P_j P^{-1})``.
    """
    k = params.n_baselines
    a = params.alpha
    w = params.edge_weight
    # Columns hold b_j - P_j mu.
    shift = np.empty((mu.size, k + 1))
    shift[:, :k] = 2.0 * a * (f - mu[:, None])
    shift[:, k] = -2.0 * w * (C0 @ mu)
    F = shift.T @ cov @ shift

    cc = cov @ C0
    t_aa = np.sum(cov * cov)
    t_aw = np.sum(cc * cov.T)
    t_ww = np.sum(cc * cc.T)
    F[:k, :k] += 2.0 * np.outer(a, a) * t_aa
    F[:k, k] += 2.0 * a * w * t_aw
    F[k, :k] += 2.0 * a * w * t_aw
    F[k, k] += 2.0 * w * w * t_ww
    return F
