"""
The kernel ELM baseline
=======================

The baseline is kernel ridge regression with an RBF kernel.  Each of the
15 benchmark scenarios is one (kernel parameter, regularization) pair.
"""

from dmccrf import chronological_split, scale_apply, scale_fit
from dmccrf.elm import crossfit_predictions, scenario_grid, train_kernel_elm
from dmccrf.evaluation import mape
from dmccrf.synthetic import ar1_dataset

# A synthetic flow series: 240 quarter-hours, nine noisy predictors.
data = ar1_dataset(seed=0)
train, test = chronological_split(data, 0.7)
print(len(train), "training rows,", len(test), "test rows")

# Scaling is fitted on the training block only and applied to both.
scaling = scale_fit(train)
strain, stest = scale_apply(train, scaling), scale_apply(test, scaling)

# Test MAPE (in flow units) across the grid.
for i, config in enumerate(scenario_grid(), 1):
    model = train_kernel_elm(strain, config)
    pred = scaling.unscale_target(model.predict(stest.features))
    print(f"scenario {i:2d}  gamma={config.kernel_param:<5g} C={config.reg_coeff:<6g}"
          f"  test MAPE {mape(test.targets, pred):6.3f}")

# In-sample predictions of a weakly regularized kernel model sit almost on
# top of the targets, which would tell the CRF that the baseline is nearly
# perfect.  Out-of-fold predictions show its real error level and are what
# the CRF weights are fitted on.
config = scenario_grid()[6]
model = train_kernel_elm(strain, config)
inside = scaling.unscale_target(model.predict(strain.features))
outside = scaling.unscale_target(crossfit_predictions(strain.features, strain.targets, config))
print("train MAPE in-sample %.3f, out-of-fold %.3f"
      % (mape(train.targets, inside), mape(train.targets, outside)))
