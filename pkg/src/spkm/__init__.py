"""Sparse pre-image kernel machines.

A kernel model f(x) = k(x, U) c over a small set of learned input-space
basis vectors U, trained by alternating projected gradient descent on U with
a regularized solve for the weights c. Both the basis vectors (primal) and
the weights (dual) can be made sparse.
"""

from .baselines import KrrModel, NystromMap, kmeans, krr_fit, nystrom_features
from .core import (
    FitReport,
    SpkmModel,
    SpkmView,
    TrainConfig,
    c_step,
    decide,
    fit,
    fit_mkl,
    fit_multiclass,
    load_model,
    model_from_json,
    model_to_json,
    predict,
    save_model,
    u_gradient,
    u_step,
)
from .errors import ConfigError, DataError, DegeneratePrediction, NumericalError, SpkmError
from .kernels import KernelSpec
from .losses import LossSpec
from .sparseops import L1Ball, lasso_cd, project_l1, soft_threshold
from .theory import BoundInputs, RademacherEstimate, empirical_rademacher, rademacher_bound

__all__ = [
    "BoundInputs",
    "ConfigError",
    "DataError",
    "DegeneratePrediction",
    "FitReport",
    "KernelSpec",
    "KrrModel",
    "L1Ball",
    "LossSpec",
    "NumericalError",
    "NystromMap",
    "RademacherEstimate",
    "SpkmError",
    "SpkmModel",
    "SpkmView",
    "TrainConfig",
    "c_step",
    "decide",
    "empirical_rademacher",
    "fit",
    "fit_mkl",
    "fit_multiclass",
    "kmeans",
    "krr_fit",
    "lasso_cd",
    "load_model",
    "model_from_json",
    "model_to_json",
    "nystrom_features",
    "predict",
    "project_l1",
    "rademacher_bound",
    "save_model",
    "soft_threshold",
    "u_gradient",
    "u_step",
]
