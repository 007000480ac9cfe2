"""Training losses over the prediction vector, with gradients w.r.t. it.

The trainer is loss-agnostic: everything downstream only needs value() and
grad(), so adding a loss (log-loss, squared hinge) means adding exactly those
two functions here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, DegeneratePrediction

FAMILIES = ("squared", "cosine")

#: predictions with norm below this make the cosine loss undefined
DEGENERATE_NORM = 1e-12


def _check_pair(yhat, y):
    yhat = np.asarray(yhat, dtype=float)
    y = np.asarray(y, dtype=float)
    if yhat.ndim != 1 or y.ndim != 1 or yhat.shape != y.shape or yhat.shape[0] < 1:
        raise DataError(
            f"predictions and targets must be equal-length vectors, got {yhat.shape} vs {y.shape}"
        )
    return yhat, y


@dataclass(frozen=True)
class LossSpec:
    """Loss family tag. "squared" is the unnormalized sum of squares
    ||yhat - y||^2; "cosine" is the alignment loss -y.yhat / ||yhat||,
    scale-invariant in yhat."""

    family: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown loss family {self.family!r}; expected one of {FAMILIES}")

    def value(self, yhat, y) -> float:
        yhat, y = _check_pair(yhat, y)
        if self.family == "squared":
            r = yhat - y
            return float(np.dot(r, r))
        norm = float(np.linalg.norm(yhat))
        if norm < DEGENERATE_NORM:
            raise DegeneratePrediction("prediction vector has ~zero norm; cosine loss undefined")
        return float(-np.dot(y, yhat) / norm)

    def grad(self, yhat, y) -> np.ndarray:
        """dL/dyhat. Squared: 2(yhat - y). Cosine, by the quotient rule:
        -y/||yhat|| + (y.yhat) yhat / ||yhat||^3."""
        yhat, y = _check_pair(yhat, y)
        if self.family == "squared":
            return 2.0 * (yhat - y)
        norm = float(np.linalg.norm(yhat))
        if norm < DEGENERATE_NORM:
            raise DegeneratePrediction("prediction vector has ~zero norm; cosine loss undefined")
        return -y / norm + (np.dot(y, yhat) / norm**3) * yhat

    def to_tag(self) -> str:
        return self.family

    @classmethod
    def from_tag(cls, tag: str) -> "LossSpec":
        tag = str(tag).lower()
        if tag == "cosine_proximity":
            tag = "cosine"
        return cls(tag)


SQUARED = LossSpec("squared")
COSINE = LossSpec("cosine")
