"""
Fitting the CRF weights
=======================

Maximum likelihood over the baseline weights ``alpha`` and the edge weight,
in log space.  The log-likelihood never decreases along the way.
"""

import numpy as np

from dmccrf import Edge, TrainConfig, fit, predict_with_std
from dmccrf.evaluation import mape

rng = np.random.default_rng(1)
n = 120
t = np.arange(n)
y = 0.5 + 0.2 * np.sin(t / 5.0) + rng.normal(scale=0.02, size=n)

# Two baselines: a decent one and a much noisier one.
f = np.column_stack([y + rng.normal(scale=0.05, size=n), y + rng.normal(scale=0.3, size=n)])

for edge in (Edge.CHAIN, Edge.DM):
    res = fit(y, f, edge, TrainConfig())
    steps = np.diff(res.trajectory)
    print(f"{edge.value:5s} alpha={np.round(res.params.alpha, 2)} "
          f"edge_weight={res.params.edge_weight:.3g} "
          f"loglik={res.final_log_likelihood:.2f} after {res.iterations_used} iterations "
          f"(converged={res.converged}, smallest step {steps.min():.1e})")
    # The good baseline gets the larger weight; predictions carry a
    # standard deviation from the Gaussian covariance.
    mean, std = predict_with_std(f, res.params, edge)
    print(f"      in-sample MAPE baseline 1 {mape(y, f[:, 0]):.2f}%, "
          f"CRF {mape(y, mean):.2f}%, mean std {std.mean():.3f}")
