"""Reference methods: kernel ridge regression, Nystrom feature maps, k-means.

Landmark matrices interoperate with the basis-vector models: a fitted model's
U plugs directly into NystromMap as the landmark set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, NumericalError
from .kernels import KernelSpec
from .sparseops import lasso_cd

#: jitter added to the landmark kernel matrix before eigendecomposition
NYSTROM_JITTER = 1e-10

#: eigenpairs below this fraction of the top eigenvalue are dropped
NYSTROM_RANK_TOL = 1e-12


@dataclass
class KrrModel:
    """Kernel ridge regression: dual coefficients over all training rows."""

    alpha: np.ndarray
    Xtrain: np.ndarray
    kernel: KernelSpec
    lam: float

    def predict(self, X) -> np.ndarray:
        return self.kernel.gram(np.asarray(X, dtype=float), self.Xtrain) @ self.alpha


def krr_fit(X, y, kernel: KernelSpec, lam: float) -> KrrModel:
    """Solve (K + lam I) alpha = y on the full training kernel matrix."""
    if not lam > 0:
        raise ConfigError(f"krr needs lam > 0, got {lam}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise DataError(f"incompatible krr shapes: X {X.shape}, y {y.shape}")
    K = kernel.gram(X, X)
    alpha = np.linalg.solve(K + lam * np.eye(X.shape[0]), y)
    if not np.all(np.isfinite(alpha)):
        raise NumericalError("krr solve produced non-finite coefficients")
    return KrrModel(alpha=alpha, Xtrain=X, kernel=kernel, lam=lam)


@dataclass
class NystromMap:
    """Feature map Phi(X) = k(X, landmarks) @ whitener with Phi Phi^T ~ K.

    The whitener is an inverse square-root factor of the landmark kernel
    matrix; near-null eigenpairs are dropped, which shrinks the feature
    dimension below the landmark count.
    """

    landmarks: np.ndarray
    kernel: KernelSpec
    whitener: np.ndarray

    @classmethod
    def build(cls, landmarks, kernel: KernelSpec) -> "NystromMap":
        landmarks = np.asarray(landmarks, dtype=float)
        if landmarks.ndim != 2 or landmarks.shape[0] < 1:
            raise DataError(f"landmarks must be a nonempty m x d matrix, got {landmarks.shape}")
        m = landmarks.shape[0]
        K_mm = kernel.gram(landmarks, landmarks) + NYSTROM_JITTER * np.eye(m)
        evals, evecs = np.linalg.eigh(K_mm)
        keep = evals > NYSTROM_RANK_TOL * evals.max()
        whitener = evecs[:, keep] / np.sqrt(evals[keep])
        if not np.all(np.isfinite(whitener)):
            raise NumericalError("nystrom whitener is non-finite")
        return cls(landmarks=landmarks, kernel=kernel, whitener=whitener)


def nystrom_features(nmap: NystromMap, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return nmap.kernel.gram(X, nmap.landmarks) @ nmap.whitener


def kmeans(X, m: int, seed: int, max_iter: int = 100) -> np.ndarray:
    """Lloyd's algorithm from a seeded distinct-row initialization.

    Empty clusters are re-seeded to the points currently farthest from their
    assigned centers. Deterministic given the seed.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 1 <= m <= n:
        raise DataError(f"need 1 <= m <= n, got m={m} for n={n}")
    rng = np.random.default_rng(seed)
    centers = X[rng.permutation(n)[:m]].copy()
    assign = np.full(n, -1)
    for _ in range(max_iter):
        d2 = (
            np.einsum("ij,ij->i", X, X)[:, None]
            + np.einsum("ij,ij->i", centers, centers)[None, :]
            - 2.0 * X @ centers.T
        )
        new_assign = np.argmin(d2, axis=1)
        empties = [j for j in range(m) if not np.any(new_assign == j)]
        if empties:
            # hand each empty cluster one of the worst-served points
            worst = np.argsort(d2[np.arange(n), new_assign])[::-1]
            for j, i in zip(empties, worst):
                new_assign[i] = j
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(m):
            centers[j] = X[assign == j].mean(axis=0)
    return centers


def linear_lasso_fit(X, y, lam: float) -> np.ndarray:
    """Lasso on raw features with an appended intercept column; returns the
    d+1 coefficient vector (intercept last)."""
    X = np.asarray(X, dtype=float)
    A = np.hstack([X, np.ones((X.shape[0], 1))])
    return lasso_cd(A, np.asarray(y, dtype=float), lam)


def linear_lasso_predict(coef, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X @ coef[:-1] + coef[-1]
