"""Prediction with a fitted CRF: the conditional mean and its marginal variances."""
import numpy as np

from .gcrf import GcrfParams, assemble_canonical


def predict(test_baselines, params: GcrfParams, edge):
    """Joint prediction over the whole test sequence, ``y_hat = P^{-1} b``."""
    return np.array(assemble_canonical(test_baselines, params, edge).mean)


def predictive_variance(test_baselines, params: GcrfParams, edge):
    """Marginal variances, the diagonal of ``P^{-1}``."""
    return assemble_canonical(test_baselines, params, edge).variance()


def predict_with_std(test_baselines, params: GcrfParams, edge):
    cg = assemble_canonical(test_baselines, params, edge)
    return np.array(cg.mean), np.sqrt(cg.variance())
