"""Synthetic traffic-like series for tests, demos and the benchmark harness.

The fixture is a stationary AR(1) flow around a positive level:

    s_t = phi * s_{t-1} + sqrt(1 - phi^2) * e_t,      e_t ~ N(0, 1)
    flow_t = level + spread * s_t

Each of the ``d`` predictors is an independently corrupted reading of the
latent state, ``x_tj = s_t + feature_noise * u_tj`` with ``u_tj ~ N(0, 1)``.
Everything is drawn from ``numpy.random.default_rng(seed)`` in the order
e, then u, so a seed pins the whole dataset.

The defaults describe the benchmark fixture: a weakly autocorrelated flow
seen through predictors that are individually noisier than the flow itself,
so that any single baseline is noisy and benefits from structured smoothing.
:func:`benchmark_runs` fixes the rest of the protocol.
"""
from __future__ import annotations

import numpy as np

from .dataset import Schema, TimeSeriesDataset, chronological_split

FEATURES = tuple(f"f{j}" for j in range(1, 10))
SCHEMA = Schema("t", FEATURES, "flow")


def ar1_dataset(
    seed,
    n=240,
    phi=0.2,
    level=100.0,
    spread=15.0,
    feature_noise=3.0,
    n_features=len(FEATURES),
) -> TimeSeriesDataset:
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n)
    u = rng.standard_normal((n, n_features))
    s = np.empty(n)
    s[0] = e[0]
    innov = np.sqrt(1.0 - phi * phi)
    for t in range(1, n):
        s[t] = phi * s[t - 1] + innov * e[t]
    X = s[:, None] + feature_noise * u
    flow = level + spread * s
    stamps = [f"2013-01-{1 + t // 96:02d}T{(t % 96) // 4:02d}:{15 * (t % 4):02d}" for t in range(n)]
    return TimeSeriesDataset(stamps, X, flow)


# Benchmark protocol for the synthetic fixture.
BENCHMARK_SEEDS = tuple(range(20))
BENCHMARK_TRAIN_FRACTION = 0.7
BENCHMARK_SCENARIO = 7  # kernel_param 1, reg_coeff 1000


def benchmark_runs(seeds=BENCHMARK_SEEDS, **kwargs):
    """Yield ``(seed, train, test)`` chronological splits of the fixture."""
    for seed in seeds:
        train, test = chronological_split(ar1_dataset(seed, **kwargs), BENCHMARK_TRAIN_FRACTION)
        yield seed, train, test
