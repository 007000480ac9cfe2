"""Differentiable kernel functions with analytic gradients in the second argument.

All kernels are evaluated on the fly; nothing here ever builds an n x n
matrix unless the caller asks for one via gram(A, A).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError

FAMILIES = ("rbf", "polynomial", "linear")


def _as_vector(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] < 1:
        raise DataError(f"{name} must be a 1-d vector of length >= 1, got shape {x.shape}")
    return x


def _as_matrix(A, name):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DataError(f"{name} must be a 2-d matrix, got shape {A.shape}")
    return A


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family with its parameters.

    family: "rbf" (bandwidth sigma), "polynomial" (degree, offset) or "linear".
    rescale_to_signed maps raw values v to 2v - 1; only meaningful for kernels
    whose raw range is [0, 1], i.e. rbf.
    """

    family: str
    sigma: float = 1.0
    degree: int = 3
    offset: float = 1.0
    rescale_to_signed: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "rbf" and not self.sigma > 0:
            raise ConfigError(f"rbf kernel needs sigma > 0, got {self.sigma}")
        if self.family == "polynomial":
            if int(self.degree) != self.degree or self.degree < 1:
                raise ConfigError(f"polynomial degree must be an integer >= 1, got {self.degree}")
        if self.rescale_to_signed and self.family != "rbf":
            raise ConfigError("rescale_to_signed requires a kernel with raw range [0, 1] (rbf)")

    # ------------------------------------------------------------------
    # evaluation

    def value(self, x, u) -> float:
        """k(x, u), with the 2v - 1 rescale applied when configured."""
        x = _as_vector(x, "x")
        u = _as_vector(u, "u")
        if x.shape != u.shape:
            raise DataError(f"dimension mismatch: x has {x.shape[0]} features, u has {u.shape[0]}")
        if self.family == "rbf":
            d = x - u
            # (x-u) squared elementwise is exactly symmetric in (x, u)
            raw = float(np.exp(-np.dot(d, d) / (2.0 * self.sigma**2)))
        elif self.family == "polynomial":
            raw = float((np.dot(x, u) + self.offset) ** self.degree)
        else:
            raw = float(np.dot(x, u))
        return 2.0 * raw - 1.0 if self.rescale_to_signed else raw

    def grad_u(self, x, u) -> np.ndarray:
        """d/du k(x, u).

        For rbf the raw gradient is k(x,u) (x - u) / sigma^2, the sign coming
        from differentiating the exponent; the rescale contributes a factor 2
        by the chain rule.
        """
        x = _as_vector(x, "x")
        u = _as_vector(u, "u")
        if x.shape != u.shape:
            raise DataError(f"dimension mismatch: x has {x.shape[0]} features, u has {u.shape[0]}")
        if self.family == "rbf":
            d = x - u
            raw = float(np.exp(-np.dot(d, d) / (2.0 * self.sigma**2)))
            g = (raw / self.sigma**2) * d
            return 2.0 * g if self.rescale_to_signed else g
        if self.family == "polynomial":
            return self.degree * (np.dot(x, u) + self.offset) ** (self.degree - 1) * x
        return x.copy()

    def gram_cached(self, A, B):
        """(values, cache) where values is the n x m kernel matrix (rescale
        applied) and cache holds the family's intermediate, reusable by
        weighted_grad_u at the same (A, B). Cost O(n m d), memory O(n m)."""
        A = _as_matrix(A, "A")
        B = _as_matrix(B, "B")
        if A.shape[1] != B.shape[1]:
            raise DataError(
                f"dimension mismatch: A has {A.shape[1]} features, B has {B.shape[1]}"
            )
        if A.shape[0] == 0 or B.shape[0] == 0:
            return np.zeros((A.shape[0], B.shape[0])), None
        if self.family == "rbf":
            raw = np.exp(-_sq_dists(A, B) / (2.0 * self.sigma**2))
            return (2.0 * raw - 1.0 if self.rescale_to_signed else raw), raw
        if self.family == "polynomial":
            base = A @ B.T + self.offset
            return base**self.degree, base
        return A @ B.T, None

    def gram(self, A, B) -> np.ndarray:
        """n x m matrix of k(A_i, B_j) values."""
        return self.gram_cached(A, B)[0]

    def weighted_grad_u(self, X, U, weights, cache=None) -> np.ndarray:
        """Accumulated gradients G with rows G_r = sum_i weights[i, r] * d/du_r k(x_i, u_r).

        This is the O(d n R) primitive behind basis-vector updates; working
        memory beyond the inputs is O(n R + R d). Pass the cache from
        gram_cached(X, U) to avoid re-evaluating the kernel.
        """
        X = _as_matrix(X, "X")
        U = _as_matrix(U, "U")
        weights = np.asarray(weights, dtype=float)
        if X.shape[1] != U.shape[1]:
            raise DataError(
                f"dimension mismatch: X has {X.shape[1]} features, U has {U.shape[1]}"
            )
        if weights.shape != (X.shape[0], U.shape[0]):
            raise DataError(
                f"weights must have shape {(X.shape[0], U.shape[0])}, got {weights.shape}"
            )
        if self.family == "rbf":
            raw = cache if cache is not None else np.exp(
                -_sq_dists(X, U) / (2.0 * self.sigma**2)
            )
            scale = (2.0 if self.rescale_to_signed else 1.0) / self.sigma**2
            M = scale * weights * raw
            return M.T @ X - M.sum(axis=0)[:, None] * U
        if self.family == "polynomial":
            base = cache if cache is not None else X @ U.T + self.offset
            M = weights * (self.degree * base ** (self.degree - 1))
            return M.T @ X
        return weights.T @ X

    # ------------------------------------------------------------------
    # wire format

    def to_json(self) -> dict:
        obj = {"family": self.family}
        if self.family == "rbf":
            obj["sigma"] = float(self.sigma)
        elif self.family == "polynomial":
            obj["degree"] = int(self.degree)
            obj["offset"] = float(self.offset)
        obj["rescale"] = bool(self.rescale_to_signed)
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "KernelSpec":
        if not isinstance(obj, dict) or "family" not in obj:
            raise ConfigError(f"kernel spec must be an object with a 'family' key, got {obj!r}")
        kwargs = {"family": obj["family"], "rescale_to_signed": bool(obj.get("rescale", False))}
        if "sigma" in obj:
            kwargs["sigma"] = float(obj["sigma"])
        if "degree" in obj:
            kwargs["degree"] = int(obj["degree"])
        if "offset" in obj:
            kwargs["offset"] = float(obj["offset"])
        return cls(**kwargs)


def _sq_dists(A, B):
    """Pairwise squared Euclidean distances, clipped at 0 against cancellation."""
    sq_a = np.square(A).sum(axis=1)
    sq_b = np.square(B).sum(axis=1)
    d = sq_a[:, None] + sq_b[None, :] - 2.0 * (A @ B.T)
    np.maximum(d, 0.0, out=d)
    return d
