"""Brute-force quadrature checks for tiny CRFs (N <= 3).

``exp(energy(y))`` is integrated directly with the trapezoidal rule on a
tensor grid.  Nothing here touches the precision matrix or the linear term;
the analytic solution is only used to place the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import GridTooCoarse
from .gcrf import GcrfParams, as_baselines, assemble_canonical, energy

MIN_GRID_POINTS = 200
MIN_HALFWIDTH_SD = 6.0
REFINE_RTOL = 1e-6


@dataclass(frozen=True)
class QuadratureResult:
    log_normalizer: float
    mean: np.ndarray
    covariance: np.ndarray

    @property
    def normalizer(self):
        return math.exp(self.log_normalizer)


def _axes(center, scale, halfwidth_sd, points):
    offsets = np.linspace(-halfwidth_sd, halfwidth_sd, points)
    return [c + s * offsets for c, s in zip(center, scale)]


def _trapezoid_weights(axis):
    h = axis[1] - axis[0]
    w = np.full(axis.size, h)
    w[0] = w[-1] = 0.5 * h
    return w


def _integrate(f, params, edge, center, scale, halfwidth_sd, points):
    n = center.size
    axes = _axes(center, scale, halfwidth_sd, points)
    weights = [_trapezoid_weights(a) for a in axes]
    ref = energy(center, f, params, edge)

    # Inner axes are flattened once; the outer axis is walked slab by slab so
    # memory stays at points**(n-1) rows.
    if n > 1:
        inner = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, n - 1)
        w_inner = reduce(np.multiply, np.ix_(*weights[1:])).ravel()
    else:
        inner = np.empty((1, 0))
        w_inner = np.ones(1)

    z = 0.0
    s1 = np.zeros(n)
    s2 = np.zeros((n, n))
    # Only the first column changes from slab to slab.
    ys = np.empty((inner.shape[0], n))
    ys[:, 1:] = inner
    d = ys - center
    for y0, w0 in zip(axes[0], weights[0]):
        ys[:, 0] = y0
        d[:, 0] = y0 - center[0]
        p = w0 * w_inner * np.exp(energy(ys, f, params, edge) - ref)
        z += p.sum()
        pd = p @ d
        s1 += pd
        s2 += (d * p[:, None]).T @ d
    m = s1 / z
    return ref + math.log(z), center + m, s2 / z - np.outer(m, m)


def _rel_change(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def quadrature_moments(
    baselines,
    params: GcrfParams,
    edge,
    halfwidth_sd=8.0,
    grid_points=MIN_GRID_POINTS + 1,
    center=None,
    scale=None,
    refine=True,
) -> QuadratureResult:
    """Normalizer, mean and covariance of ``exp(energy(y))`` by quadrature.

    Parameters
    ----------
    baselines, params, edge
        The CRF, as for :func:`dmccrf.gcrf.energy`.
    halfwidth_sd : float
        Grid half-width in posterior standard deviations per axis (>= 6).
    grid_points : int
        Points per axis (>= 200).
    center, scale : array_like, optional
        Grid center and per-axis standard deviation.  Default to the analytic
        mean and marginal standard deviations; required for N = 1, where
        the analytic form is not defined.
    refine : bool
        Repeat the integration with the grid step halved and raise
        :class:`GridTooCoarse` if any result moves by more than 1e-6
        relative.

    Returns
    -------
    QuadratureResult
        ``log_normalizer`` is ``log of the integral of exp(energy)``.
    """
    f = as_baselines(baselines)
    n = f.shape[0]
    if not 1 <= n <= 3:
        raise ValueError(f"quadrature is limited to N <= 3, got {n}")
    if grid_points < MIN_GRID_POINTS:
        raise ValueError(f"grid_points must be >= {MIN_GRID_POINTS}")
    if halfwidth_sd < MIN_HALFWIDTH_SD:
        raise ValueError(f"halfwidth_sd must be >= {MIN_HALFWIDTH_SD}")
    if center is None or scale is None:
        cg = assemble_canonical(f, params, edge)
        center = cg.mean if center is None else center
        scale = np.sqrt(cg.variance()) if scale is None else scale
    center = np.asarray(center, dtype=float).ravel()
    scale = np.asarray(scale, dtype=float).ravel()

    lz, mean, cov = _integrate(f, params, edge, center, scale, halfwidth_sd, grid_points)
    if refine:
        lz2, mean2, cov2 = _integrate(
            f, params, edge, center, scale, halfwidth_sd, 2 * grid_points - 1
        )
        changes = (
            abs(math.expm1(lz2 - lz)),
            _rel_change(mean, mean2),
            _rel_change(cov, cov2),
        )
        if max(changes) > REFINE_RTOL:
            raise GridTooCoarse(
                f"halving the grid step moved results by {max(changes):.3g} relative"
            )
        lz, mean, cov = lz2, mean2, cov2
    return QuadratureResult(lz, mean, cov)


def quadrature_loglik(y, baselines, params: GcrfParams, edge, **grid) -> float:
    """``energy(y) - log(normalizer)``, the log-density by direct integration."""
    q = quadrature_moments(baselines, params, edge, **grid)
    return energy(y, baselines, params, edge) - q.log_normalizer
