"""Dataset handling: CSV ingestion, splits, standardization, the bandwidth
heuristic, synthetic generators, and evaluation metrics."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .errors import ConfigError, DataError

SPARSE_NOISE_DEGREES = (1, 2, 5)


@dataclass
class Dataset:
    """Feature rows plus labels. X is a single n x d matrix, or a list of
    per-view matrices for multi-view data. signal_mask marks the ground-truth
    informative columns when the data came from the sparse-noise generator."""

    X: object
    y: np.ndarray
    feature_names: list | None = None
    views: list | None = None
    signal_mask: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def d(self) -> int:
        if isinstance(self.X, list):
            return sum(v.shape[1] for v in self.X)
        return self.X.shape[1]

    def take(self, idx) -> "Dataset":
        idx = np.asarray(idx)
        X = [v[idx] for v in self.X] if isinstance(self.X, list) else self.X[idx]
        return Dataset(X=X, y=self.y[idx], feature_names=self.feature_names,
                       views=self.views, signal_mask=self.signal_mask)


# ----------------------------------------------------------------------
# ingestion and splits


def load_csv(path, label_column, has_header: bool = False) -> Dataset:
    """Parse a numeric CSV into a Dataset.

    label_column is a 0-based column index, or a column name when the file
    has a header. Binary label columns (exactly two distinct values) are
    mapped to -1/+1, smaller value to -1. Missing or non-numeric cells are
    hard errors.
    """
    try:
        with open(path, newline="", encoding="utf-8") as f:
            rows = [row for row in csv.reader(f) if row]
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e
    if not rows:
        raise DataError(f"{path} is empty")

    names = None
    if has_header:
        names = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise DataError(f"{path} has a header but no data rows")
    if isinstance(label_column, str):
        if names is None:
            raise DataError("label column given by name but the file has no header")
        if label_column not in names:
            raise DataError(f"label column {label_column!r} not in header {names}")
        label_idx = names.index(label_column)
    else:
        label_idx = int(label_column)

    width = len(rows[0])
    if not 0 <= label_idx < width:
        raise DataError(f"label column {label_idx} out of range for {width} columns")
    values = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"row {i} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                raise DataError(f"missing value at row {i}, column {j}")
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise DataError(f"non-numeric cell {cell!r} at row {i}, column {j}") from None
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path} contains non-finite values")

    y = values[:, label_idx]
    X = np.delete(values, label_idx, axis=1)
    distinct = np.unique(y)
    if len(distinct) == 2:
        y = np.where(y == distinct[0], -1.0, 1.0)
    feature_names = None
    if names is not None:
        feature_names = [nm for j, nm in enumerate(names) if j != label_idx]
    return Dataset(X=X, y=y, feature_names=feature_names)


def split_thirds(ds: Dataset, seed: int):
    """Seeded shuffle, then an exact partition into train, validation, test
    of sizes ceil(n/3), ceil of half the rest, and the remainder."""
    n = ds.n
    if n < 3:
        raise DataError(f"need at least 3 samples to split in thirds, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = -(-n // 3)
    n_val = -(-(n - n_train) // 2)
    return (
        ds.take(perm[:n_train]),
        ds.take(perm[n_train:n_train + n_val]),
        ds.take(perm[n_train + n_val:]),
    )


def sigma_heuristic(X) -> float:
    """Mean Euclidean distance over all unordered distinct pairs of rows."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError(f"bandwidth heuristic needs at least 2 rows, got shape {X.shape}")
    sigma = float(pdist(X).mean())
    if not sigma > 0:
        raise DataError("all rows are identical; bandwidth heuristic degenerates to 0")
    return sigma


def standardize(train, *others):
    """Per-feature (x - mean) / std using statistics of the first argument
    only. Zero-variance features map to 0. Returns the transformed arrays in
    the given order, then the train means and stds."""
    train = np.asarray(train, dtype=float)
    if train.ndim != 2 or train.shape[0] < 1:
        raise DataError(f"standardize needs a nonempty n x d train matrix, got {train.shape}")
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    scale = np.where(std > 0, 1.0 / np.where(std > 0, std, 1.0), 0.0)
    out = [(np.asarray(A, dtype=float) - mean) * scale for A in (train, *others)]
    return out, mean, std


# ----------------------------------------------------------------------
# synthetic generators (all bit-deterministic under a fixed seed)


def gen_blobs(n: int, centers, std: float, seed: int) -> Dataset:
    """Gaussian blobs around the given centers, split as evenly as possible.
    Two centers give -1/+1 labels (center order); more give class indices."""
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2 or centers.shape[0] < 1:
        raise ConfigError(f"centers must be a C x d matrix, got shape {centers.shape}")
    if n < centers.shape[0]:
        raise ConfigError(f"need n >= number of centers, got n={n} for {centers.shape[0]}")
    C = centers.shape[0]
    counts = [n // C + (1 if i < n % C else 0) for i in range(C)]
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for i, (center, cnt) in enumerate(zip(centers, counts)):
        xs.append(center + std * rng.normal(size=(cnt, centers.shape[1])))
        label = [-1.0, 1.0][i] if C == 2 else float(i)
        ys.append(np.full(cnt, label))
    return Dataset(X=np.vstack(xs), y=np.concatenate(ys))


def gen_sparse_noise(n: int, d_signal: int, d_noise: int, relation_degree: int, seed: int) -> Dataset:
    """Binary labels from a random polynomial of a few signal features, padded
    with pure-noise features. The signal columns come first; signal_mask
    records them. The polynomial score is centered at its median so the two
    classes are balanced."""
    if d_signal < 1 or d_noise < 0 or n < 2:
        raise ConfigError(f"invalid dims n={n}, d_signal={d_signal}, d_noise={d_noise}")
    if relation_degree not in SPARSE_NOISE_DEGREES:
        raise ConfigError(
            f"relation degree must be one of {SPARSE_NOISE_DEGREES}, got {relation_degree}"
        )
    rng = np.random.default_rng(seed)
    S = rng.normal(size=(n, d_signal))
    monomials = [
        combo
        for deg in range(1, relation_degree + 1)
        for combo in itertools.combinations_with_replacement(range(d_signal), deg)
    ]
    coefs = rng.normal(size=len(monomials))
    score = np.zeros(n)
    for coef, combo in zip(coefs, monomials):
        term = np.ones(n)
        for j in combo:
            term = term * S[:, j]
        score += coef * term
    y = np.where(score > np.median(score), 1.0, -1.0)
    X = np.hstack([S, rng.normal(size=(n, d_noise))])
    mask = np.array([True] * d_signal + [False] * d_noise)
    return Dataset(X=X, y=y, signal_mask=mask)


def gen_multiview(
    n: int,
    d_informative: int = 2,
    d_noise: int = 6,
    separation: float = 3.0,
    std: float = 0.5,
    seed: int = 0,
) -> Dataset:
    """Two-view binary data: view 0 holds separable blobs, view 1 is pure
    standard-normal noise carrying no label information."""
    if n < 2 or d_informative < 1 or d_noise < 1:
        raise ConfigError(f"invalid dims n={n}, d_informative={d_informative}, d_noise={d_noise}")
    rng = np.random.default_rng(seed)
    center = np.zeros(d_informative)
    center[0] = separation
    half = n // 2
    y = np.concatenate([np.full(n - half, -1.0), np.full(half, 1.0)])
    view_a = np.where(y[:, None] > 0, center, -center) + std * rng.normal(size=(n, d_informative))
    view_b = rng.normal(size=(n, d_noise))
    return Dataset(X=[view_a, view_b], y=y)


# ----------------------------------------------------------------------
# metrics


def accuracy(y_true, y_pred) -> float:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.size < 1:
        raise DataError(f"metric needs equal-length vectors, got {y_true.shape} vs {y_pred.shape}")
    return float(np.mean(y_true == y_pred))


def mse(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape or y_true.size < 1:
        raise DataError(f"metric needs equal-length vectors, got {y_true.shape} vs {y_pred.shape}")
    return float(np.mean((y_true - y_pred) ** 2))
