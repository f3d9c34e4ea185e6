"""
A Gaussian CRF in four lines
============================

The energy of a sequence ``y`` given baseline predictions ``f`` is a
negative quadratic, so ``exp(energy)`` is a multivariate Gaussian.  This
demo builds both edge variants on a tiny problem and checks the closed
form against brute-force quadrature.
"""

import numpy as np

from dmccrf import Edge, GcrfParams, assemble_canonical, energy, log_density
from dmccrf.oracle import quadrature_moments

# Two time steps, one baseline that predicts 0 then 1.
f = np.array([0.0, 1.0])
params = GcrfParams(alpha=[1.0], edge_weight=1.0)

# The chain variant pulls neighbouring outputs together, so the mean
# shrinks the baseline's jump from 0 to 1.
cg = assemble_canonical(f, params, Edge.CHAIN)
print("precision\n", cg.precision)
print("mean", cg.mean)

# With two points the distance-to-mean penalty is the same as the chain
# penalty (the running mean of one value is that value).  From three points
# on they differ: DM pulls each output toward the average of its whole past.
f3 = np.array([0.2, 0.9, 0.4])
for edge in (Edge.CHAIN, Edge.DM):
    print(edge.value, "mean", assemble_canonical(f3, params, edge).mean.round(4))

# The canonical form is exact.  Integrating exp(energy) over a fine grid
# gives the same mean, covariance and normalizer.
q = quadrature_moments(f3, params, Edge.DM)
cg = assemble_canonical(f3, params, Edge.DM)
print("quadrature mean", q.mean.round(6), "analytic", cg.mean.round(6))
y = np.array([0.3, 0.5, 0.6])
print(
    "log-density analytic %.9f, by quadrature %.9f"
    % (log_density(cg, y), energy(y, f3, params, Edge.DM) - q.log_normalizer)
)
