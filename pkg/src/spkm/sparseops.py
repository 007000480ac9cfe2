"""Sparsity operators: l1-ball projection, soft threshold, lasso solver.

The projection produces exact zeros, so sparsity statistics downstream count
entries that are exactly 0 with no epsilon fudging.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError


@dataclass(frozen=True)
class L1Ball:
    """The set {w : ||w||_1 <= radius}, radius in the units of the projected vector."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigError(f"l1 ball radius must be positive, got {self.radius}")

    def project(self, v) -> np.ndarray:
        return project_l1(v, self.radius)


def project_l1(v, radius: float) -> np.ndarray:
    """Euclidean projection of v onto the l1 ball of the given radius.

    Sort-and-threshold algorithm: the nonzero coordinates of the result are
    the large ones of v shrunk toward zero by a common amount, signs kept.
    Returns v unchanged (as a copy) when it is already inside the ball.
    """
    if not radius > 0:
        raise ConfigError(f"l1 ball radius must be positive, got {radius}")
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise DataError("cannot project a vector with non-finite entries")
    a = np.abs(v)
    if a.sum() <= radius:
        return v.copy()
    s = np.sort(a)[::-1]
    css = np.cumsum(s)
    idx = np.arange(1, len(s) + 1)
    rho = np.nonzero(s > (css - radius) / idx)[0][-1]
    theta = (css[rho] - radius) / (rho + 1)
    return np.sign(v) * np.maximum(a - theta, 0.0)


def soft_threshold(v, t: float) -> np.ndarray:
    """Componentwise sign(v_i) * max(|v_i| - t, 0)."""
    if t < 0:
        raise ConfigError(f"soft threshold needs t >= 0, got {t}")
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def lasso_cd(A, y, lam: float, tol: float = 1e-8, max_iter: int = 1000) -> np.ndarray:
    """Minimize ||A c - y||^2 + lam ||c||_1 by cyclic coordinate descent.

    Naive residual recomputation per coordinate; with few columns this is
    cheap and keeps the update transparent. Stops when the largest coordinate
    change in a sweep drops below tol, or after max_iter sweeps. A column of
    zeros keeps its coefficient pinned at 0.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    if A.ndim != 2 or y.ndim != 1 or A.shape[0] != y.shape[0]:
        raise DataError(f"incompatible lasso shapes: A {A.shape}, y {y.shape}")
    if lam < 0:
        raise ConfigError(f"lasso needs lam >= 0, got {lam}")
    n, R = A.shape
    col_sq = np.einsum("ij,ij->j", A, A)
    c = np.zeros(R)
    for _ in range(max_iter):
        max_delta = 0.0
        for j in range(R):
            if col_sq[j] == 0.0:
                continue
            r_j = y - A @ c + A[:, j] * c[j]
            rho = float(A[:, j] @ r_j)
            new = np.sign(rho) * max(abs(rho) - lam / 2.0, 0.0) / col_sq[j]
            max_delta = max(max_delta, abs(new - c[j]))
            c[j] = new
        if max_delta < tol:
            break
    return c
