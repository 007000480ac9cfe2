"""Kernel machines parameterized by a few learned input-space basis vectors.

The model is f(x) = k(x, U) c with U an R x d matrix of basis vectors living
in the input space and c their weights. Training alternates projected
gradient descent on U with a regularized solve for c, restarted from several
random initializations; the restart with the lowest final training objective
wins. The same engine drives the binary/regression, multiclass, and
multi-view (one kernel per view) variants.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError, DegeneratePrediction, NumericalError
from .kernels import KernelSpec
from .losses import LossSpec
from .sparseops import lasso_cd, project_l1, soft_threshold

TASKS = ("binary", "regression", "multiclass")

#: accepted objective values may rise by at most this much (round-off slack)
DESCENT_SLACK = 1e-12

_MAX_HALVINGS = 30
_MAX_DEGENERATE_REDRAWS = 3


# ----------------------------------------------------------------------
# configuration and results


@dataclass
class TrainConfig:
    """Knobs for the alternating trainer.

    c_norm_a selects the weight penalty: 1 gives lam * ||c||_1 (sparse
    weights, solved by coordinate descent under squared loss), 2 gives
    lam * ||c||_2^2 (ridge). u_ball_radius, when set, constrains every basis
    vector to the l1 ball of that radius; None disables the projection.
    """

    R: int
    loss: LossSpec
    c_norm_a: int = 2
    lam: float = 1e-3
    u_ball_radius: float | None = None
    restarts_K: int = 5
    u_max_iters: int = 50
    outer_max_iters: int = 50
    step_init: float = 1.0
    backtrack_factor: float = 0.5
    obj_tol: float = 1e-5
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.loss, str):
            self.loss = LossSpec.from_tag(self.loss)
        if self.R < 1:
            raise ConfigError(f"R must be >= 1, got {self.R}")
        if self.c_norm_a not in (1, 2):
            raise ConfigError(f"c_norm_a must be 1 or 2, got {self.c_norm_a}")
        if self.lam < 0:
            raise ConfigError(f"lam must be >= 0, got {self.lam}")
        if self.u_ball_radius is not None and not self.u_ball_radius > 0:
            raise ConfigError(f"u_ball_radius must be positive or None, got {self.u_ball_radius}")
        if self.restarts_K < 1:
            raise ConfigError(f"restarts_K must be >= 1, got {self.restarts_K}")
        if self.u_max_iters < 1:
            raise ConfigError(f"u_max_iters must be >= 1, got {self.u_max_iters}")
        if self.outer_max_iters < 1:
            raise ConfigError(f"outer_max_iters must be >= 1, got {self.outer_max_iters}")
        if not self.step_init > 0:
            raise ConfigError(f"step_init must be positive, got {self.step_init}")
        if not 0 < self.backtrack_factor < 1:
            raise ConfigError(f"backtrack_factor must be in (0, 1), got {self.backtrack_factor}")
        if not self.obj_tol > 0:
            raise ConfigError(f"obj_tol must be positive, got {self.obj_tol}")

    def to_json(self) -> dict:
        return {
            "r": self.R,
            "loss": self.loss.to_tag(),
            "c_norm_a": self.c_norm_a,
            "lambda": self.lam,
            "u_ball_radius": self.u_ball_radius,
            "restarts": self.restarts_K,
            "u_max_iters": self.u_max_iters,
            "outer_max_iters": self.outer_max_iters,
            "step_init": self.step_init,
            "backtrack_factor": self.backtrack_factor,
            "obj_tol": self.obj_tol,
            "seed": self.seed,
        }


@dataclass
class FitReport:
    """What happened during fit: objective traces per restart, the winner,
    sparsity statistics of the winning model, wall-clock per phase."""

    per_restart_objectives: list
    best_restart: int
    final_objective: float
    u_nnz_fraction: float
    c_nnz: int
    phase_seconds: dict
    degenerate_reinits: int = 0
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "per_restart_objectives": self.per_restart_objectives,
            "best_restart": self.best_restart,
            "final_objective": self.final_objective,
            "u_nnz_fraction": self.u_nnz_fraction,
            "c_nnz": self.c_nnz,
            "phase_seconds": self.phase_seconds,
            "degenerate_reinits": self.degenerate_reinits,
            "warnings": self.warnings,
        }


@dataclass
class SpkmView:
    """One view of a multi-view model: its kernel, basis vectors, weights."""

    kernel: KernelSpec
    U: np.ndarray
    c: np.ndarray


@dataclass
class SpkmModel:
    """A fitted model. Exactly one parameterization is populated:
    (U, c) for binary/regression, (U, C) for multiclass, or views for
    multi-view models."""

    task: str
    loss: LossSpec
    kernel: KernelSpec | None = None
    U: np.ndarray | None = None
    c: np.ndarray | None = None
    C: np.ndarray | None = None
    views: list | None = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {TASKS}")
        if isinstance(self.loss, str):
            self.loss = LossSpec.from_tag(self.loss)
        if self.views is not None:
            for v in self.views:
                v.U = _check_param_matrix(v.U, "view U")
                v.c = np.asarray(v.c, dtype=float)
                _require_finite(v.c, "view c")
            return
        self.U = _check_param_matrix(self.U, "U")
        if self.task == "multiclass":
            if self.C is None:
                raise ConfigError("multiclass model needs a C weight matrix")
            self.C = np.asarray(self.C, dtype=float)
            _require_finite(self.C, "C")
            if self.C.ndim != 2 or self.C.shape[0] != self.U.shape[0]:
                raise ConfigError(f"C must be R x classes with R={self.U.shape[0]}, got {self.C.shape}")
        else:
            if self.c is None:
                raise ConfigError("model needs a weight vector c")
            self.c = np.asarray(self.c, dtype=float)
            _require_finite(self.c, "c")
            if self.c.shape != (self.U.shape[0],):
                raise ConfigError(f"c must have length R={self.U.shape[0]}, got shape {self.c.shape}")

    @property
    def n_basis(self) -> int:
        if self.views is not None:
            return sum(v.U.shape[0] for v in self.views)
        return self.U.shape[0]


def _check_param_matrix(U, name):
    if U is None:
        raise ConfigError(f"model needs a {name} matrix")
    U = np.asarray(U, dtype=float)
    if U.ndim != 2 or U.shape[0] < 1:
        raise ConfigError(f"{name} must be a 2-d matrix with at least one row, got shape {U.shape}")
    _require_finite(U, name)
    return U


def _require_finite(a, name):
    if not np.all(np.isfinite(a)):
        raise NumericalError(f"{name} contains non-finite entries")


# ----------------------------------------------------------------------
# prediction


def predict(model: SpkmModel, X) -> np.ndarray:
    """Raw scores k(X, U) c. Multiclass models return an m x classes matrix;
    multi-view models take X as a list with one array per view."""
    if model.views is not None:
        Xs = list(X)
        if len(Xs) != len(model.views):
            raise DataError(f"expected {len(model.views)} views, got {len(Xs)}")
        score = None
        for v, Xj in zip(model.views, Xs):
            s = v.kernel.gram(np.asarray(Xj, dtype=float), v.U) @ v.c
            score = s if score is None else score + s
        return score
    K = model.kernel.gram(np.asarray(X, dtype=float), model.U)
    if model.task == "multiclass":
        return K @ model.C
    return K @ model.c


def decide(model: SpkmModel, scores) -> np.ndarray:
    """Turn raw scores into task decisions: sign for binary (0 counts as +1),
    argmax column index for multiclass, identity for regression."""
    scores = np.asarray(scores)
    if model.task == "binary":
        return np.where(scores >= 0, 1.0, -1.0)
    if model.task == "multiclass":
        return np.argmax(scores, axis=1)
    return scores


# ----------------------------------------------------------------------
# serialization (value-exact round trip for finite doubles)


def model_to_json(model: SpkmModel) -> dict:
    if model.views is not None:
        return {
            "task": model.task,
            "loss": model.loss.to_tag(),
            "views": [
                {"kernel": v.kernel.to_json(), "U": v.U.tolist(), "c": v.c.tolist()}
                for v in model.views
            ],
        }
    obj = {"task": model.task, "kernel": model.kernel.to_json(), "loss": model.loss.to_tag()}
    obj["U"] = model.U.tolist()
    if model.task == "multiclass":
        obj["C"] = model.C.tolist()
    else:
        obj["c"] = model.c.tolist()
    return obj


def model_from_json(obj: dict) -> SpkmModel:
    try:
        loss = LossSpec.from_tag(obj["loss"])
        if "views" in obj:
            views = [
                SpkmView(
                    kernel=KernelSpec.from_json(v["kernel"]),
                    U=np.asarray(v["U"], dtype=float),
                    c=np.asarray(v["c"], dtype=float),
                )
                for v in obj["views"]
            ]
            return SpkmModel(task=obj["task"], loss=loss, views=views)
        kernel = KernelSpec.from_json(obj["kernel"])
        if obj["task"] == "multiclass":
            return SpkmModel(task=obj["task"], loss=loss, kernel=kernel,
                             U=np.asarray(obj["U"], dtype=float),
                             C=np.asarray(obj["C"], dtype=float))
        return SpkmModel(task=obj["task"], loss=loss, kernel=kernel,
                         U=np.asarray(obj["U"], dtype=float),
                         c=np.asarray(obj["c"], dtype=float))
    except KeyError as e:
        raise ConfigError(f"model JSON is missing key {e}") from e


def save_model(model: SpkmModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model_to_json(model), f, indent=2)
        f.write("\n")


def load_model(path) -> SpkmModel:
    with open(path, encoding="utf-8") as f:
        return model_from_json(json.load(f))


# ----------------------------------------------------------------------
# the alternating optimizer, written once over a list of view blocks


@dataclass
class _View:
    X: np.ndarray
    kernel: KernelSpec
    R: int


def _grams(views, U_list):
    """Assembled kernel matrix over all views plus per-view gradient caches."""
    parts = [v.kernel.gram_cached(v.X, U) for v, U in zip(views, U_list)]
    return np.hstack([p[0] for p in parts]), [p[1] for p in parts]


def _loss_total(loss, P, Y) -> float:
    return float(sum(loss.value(P[:, t], Y[:, t]) for t in range(Y.shape[1])))


def _loss_grads(loss, P, Y) -> np.ndarray:
    return np.column_stack([loss.grad(P[:, t], Y[:, t]) for t in range(Y.shape[1])])


def _penalty(C, lam, a) -> float:
    if lam == 0:
        return 0.0
    return lam * float(np.abs(C).sum() if a == 1 else (C * C).sum())


def _objective(K, C, Y, loss, cfg) -> float:
    return _loss_total(loss, K @ C, Y) + _penalty(C, cfg.lam, cfg.c_norm_a)


def _project_rows(U, radius):
    if radius is None:
        return U
    return np.vstack([project_l1(row, radius) for row in U])


def _u_gradient_blocks(views, U_list, C, W, caches):
    """Per-view gradients of the data loss w.r.t. the basis vectors."""
    blocks = []
    offset = 0
    for v, U, cache in zip(views, U_list, caches):
        wt = W @ C[offset:offset + v.R].T
        blocks.append(v.kernel.weighted_grad_u(v.X, U, wt, cache=cache))
        offset += v.R
    return blocks


def _rms_row_norm(A) -> float:
    v = float(np.sqrt(np.mean(np.einsum("ij,ij->i", A, A))))
    return v if v > 0 else 1.0


def _max_row_norm(A) -> float:
    return float(np.sqrt(np.max(np.einsum("ij,ij->i", A, A))))


def _u_descent(views, U_list, C, Y, loss, cfg):
    """Projected gradient descent on the basis vectors with c fixed.

    Backtracking halves the step until the candidate (projected when a ball
    radius is set) strictly decreases the objective; a step that survives is
    reused, slightly grown, for the next iteration. The raw gradient scale
    depends on n and the kernel, so each call freezes a per-view
    preconditioner making the first probe at step_init=1 displace the
    worst-moving basis vector by about one data radius; flat far-field
    regions of the kernel then stay out of reach of a single wild step.
    Returns the new basis vectors, their kernel matrix, and the trace of
    accepted objective values.
    """
    radius = cfg.u_ball_radius
    U_list = [_project_rows(U, radius) for U in U_list]
    K, caches = _grams(views, U_list)
    obj = _objective(K, C, Y, loss, cfg)
    trace = [obj]
    step = cfg.step_init
    # under a tight ball the relevant movement scale is the ball, not the data
    x_scales = [_rms_row_norm(v.X) for v in views]
    if radius is not None:
        x_scales = [min(xs, radius) for xs in x_scales]
    alphas = None
    for _ in range(cfg.u_max_iters):
        W = _loss_grads(loss, K @ C, Y)
        blocks = _u_gradient_blocks(views, U_list, C, W, caches)
        if all(not np.any(G) for G in blocks):
            break
        if alphas is None:
            alphas = [
                xs / g if (g := _max_row_norm(G)) > 0 else 0.0
                for xs, G in zip(x_scales, blocks)
            ]
        # walk down the step ladder keeping the best candidate: a large step
        # that barely decreases must not shadow a smaller, better one
        s = step
        best = None
        prev_obj = math.inf
        for _ in range(_MAX_HALVINGS + 1):
            cand = [
                _project_rows(U - (s * a) * G, radius)
                for U, G, a in zip(U_list, blocks, alphas)
            ]
            K_cand, caches_cand = _grams(views, cand)
            try:
                obj_cand = _objective(K_cand, C, Y, loss, cfg)
            except DegeneratePrediction:
                obj_cand = math.inf
            if best is None or obj_cand < best[0]:
                best = (obj_cand, cand, K_cand, caches_cand, s)
            elif obj_cand > prev_obj and best[0] < obj:
                break
            prev_obj = obj_cand
            s *= cfg.backtrack_factor
        if best[0] >= obj:
            break
        drop = obj - best[0]
        obj, U_list, K, caches, s_used = best
        trace.append(obj)
        step = min(s_used / cfg.backtrack_factor, cfg.step_init)
        if drop < cfg.obj_tol * max(1.0, abs(obj)):
            break
    return U_list, K, trace


def _c_solve_squared(K, Y, cfg) -> np.ndarray:
    if cfg.c_norm_a == 1:
        return np.column_stack([lasso_cd(K, Y[:, t], cfg.lam) for t in range(Y.shape[1])])
    if cfg.lam == 0:
        C, *_ = np.linalg.lstsq(K, Y, rcond=None)
        return C
    R = K.shape[1]
    return np.linalg.solve(K.T @ K + cfg.lam * np.eye(R), K.T @ Y)


def _c_descent_cosine(K, c0, y, cfg) -> np.ndarray:
    """Proximal (a=1) or plain (a=2) gradient descent on one weight column
    under the cosine loss; only objective-decreasing steps are taken."""
    lam, a = cfg.lam, cfg.c_norm_a
    loss = LossSpec("cosine")

    def total(c):
        return loss.value(K @ c, y) + _penalty(c, lam, a)

    c = c0.copy()
    cur = total(c)
    step = cfg.step_init
    for _ in range(cfg.u_max_iters):
        g_smooth = K.T @ loss.grad(K @ c, y)
        s = step
        accepted = False
        for _ in range(_MAX_HALVINGS + 1):
            if a == 1:
                cand = soft_threshold(c - s * g_smooth, s * lam)
            else:
                cand = c - s * (g_smooth + 2.0 * lam * c)
            try:
                val = total(cand)
            except DegeneratePrediction:
                val = math.inf
            if val < cur:
                accepted = True
                break
            s *= cfg.backtrack_factor
        if not accepted:
            break
        drop = cur - val
        c, cur = cand, val
        step = min(s / cfg.backtrack_factor, cfg.step_init)
        if drop < cfg.obj_tol * max(1.0, abs(cur)):
            break
    return c


def _c_update(K, C, Y, loss, cfg, current_obj):
    """Solve/descend on the weights with U fixed; keep the old weights if the
    candidate somehow fails to improve the objective."""
    if loss.family == "squared":
        C_new = _c_solve_squared(K, Y, cfg)
        _require_finite(C_new, "updated weights")
    else:
        C_new = np.column_stack(
            [_c_descent_cosine(K, C[:, t], Y[:, t], cfg) for t in range(Y.shape[1])]
        )
    try:
        obj_new = _objective(K, C_new, Y, loss, cfg)
    except DegeneratePrediction:
        return C, current_obj
    if obj_new <= current_obj:
        return C_new, obj_new
    return C, current_obj


def _init_basis(view: _View, rng, radius) -> np.ndarray:
    rows = rng.integers(0, view.X.shape[0], size=view.R)
    noise = rng.normal(size=(view.R, view.X.shape[1])) * (0.1 * view.X.std(axis=0))
    return _project_rows(view.X[rows] + noise, radius)


def _init_weights(views, Y, rng, classification, multiclass):
    if multiclass:
        return None  # solved against the labels once U exists
    R_total = sum(v.R for v in views)
    if classification:
        parts = []
        for v in views:
            n_pos = (v.R + 1) // 2
            parts.append(np.concatenate([np.ones(n_pos), -np.ones(v.R - n_pos)]))
        return np.concatenate(parts)[:, None]
    lo, hi = float(Y.min()), float(Y.max())
    return rng.uniform(lo, hi, size=(R_total, 1))


def _fit_engine(views, Y, cfg, task):
    """Shared restart loop behind fit, fit_multiclass and fit_mkl."""
    n = Y.shape[0]
    classification = task in ("binary", "multiclass")
    multiclass = task == "multiclass"
    loss = cfg.loss
    R_total = sum(v.R for v in views)
    warnings = []
    if R_total > n:
        warnings.append(f"more basis vectors ({R_total}) than training samples ({n})")

    traces, results = [], []
    degenerate_reinits = 0
    phase = {"u_step": 0.0, "c_step": 0.0}

    for k in range(cfg.restarts_K):
        rng = np.random.default_rng(cfg.seed + k)
        C = _init_weights(views, Y, rng, classification, multiclass)

        state = None
        for attempt in range(_MAX_DEGENERATE_REDRAWS + 1):
            U_list = [_init_basis(v, rng, cfg.u_ball_radius) for v in views]
            try:
                K, _ = _grams(views, U_list)
                C_k = _c_solve_squared(K, Y, cfg) if multiclass else C
                obj = _objective(K, C_k, Y, loss, cfg)
                state = (U_list, K, C_k, obj)
                break
            except DegeneratePrediction:
                degenerate_reinits += 1
        if state is None:
            traces.append([math.inf])
            results.append((math.inf, None, None))
            continue

        U_list, K, C_k, obj = state
        trace = [obj]
        for _ in range(cfg.outer_max_iters):
            round_start = obj
            t0 = time.perf_counter()
            U_list, K, u_trace = _u_descent(views, U_list, C_k, Y, loss, cfg)
            phase["u_step"] += time.perf_counter() - t0
            obj = u_trace[-1]
            trace.append(obj)
            t0 = time.perf_counter()
            C_k, obj = _c_update(K, C_k, Y, loss, cfg, obj)
            phase["c_step"] += time.perf_counter() - t0
            trace.append(obj)
            if (round_start - obj) < cfg.obj_tol * max(1.0, abs(round_start)):
                break
        traces.append(trace)
        results.append((obj, U_list, C_k))

    finals = [r[0] for r in results]
    best = int(np.argmin(finals))
    if not math.isfinite(finals[best]):
        raise NumericalError("every restart collapsed to a degenerate prediction")
    best_obj, best_U, best_C = results[best]

    u_entries = sum(U.size for U in best_U)
    u_nnz = sum(int(np.count_nonzero(U)) for U in best_U)
    report = FitReport(
        per_restart_objectives=[list(map(float, t)) for t in traces],
        best_restart=best,
        final_objective=float(best_obj),
        u_nnz_fraction=u_nnz / u_entries,
        c_nnz=int(np.count_nonzero(best_C)),
        phase_seconds=phase,
        degenerate_reinits=degenerate_reinits,
        warnings=warnings,
    )
    return best_U, best_C, report


# ----------------------------------------------------------------------
# public training entry points


def _infer_task(y) -> str:
    vals = set(np.unique(y))
    return "binary" if vals <= {-1.0, 1.0} else "regression"


def _check_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise DataError(f"X must be a nonempty n x d matrix, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise DataError(f"y must have one entry per row of X, got {y.shape} for n={X.shape[0]}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DataError("training data contains non-finite values")
    return X, y


def fit(X, y, kernel: KernelSpec, cfg: TrainConfig, task: str = "auto"):
    """Train a binary or regression model; returns (model, report).

    Deterministic given cfg.seed: restart k draws from its own stream seeded
    with seed + k, so results do not depend on restart scheduling.
    """
    X, y = _check_xy(X, y)
    if task == "auto":
        task = _infer_task(y)
    if task not in ("binary", "regression"):
        raise ConfigError(f"fit handles binary or regression tasks, got {task!r}")
    if task == "binary" and not set(np.unique(y)) <= {-1.0, 1.0}:
        raise DataError("binary task needs labels in {-1, +1}")
    views = [_View(X, kernel, cfg.R)]
    U_list, C, report = _fit_engine(views, y[:, None], cfg, task)
    model = SpkmModel(task=task, loss=cfg.loss, kernel=kernel, U=U_list[0], c=C[:, 0])
    return model, report


def fit_multiclass(X, Y, kernel: KernelSpec, cfg: TrainConfig):
    """Train a shared-basis multiclass model against one-hot +-1 labels.

    Y must be n x classes with entries in {-1, +1} and exactly one +1 per
    row. All class columns share the basis vectors U; the weight matrix C has
    one column per class and predictions take the argmax column.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim != 2 or Y.ndim != 2 or Y.shape[0] != X.shape[0]:
        raise DataError(f"need X n x d and Y n x classes, got {X.shape} and {Y.shape}")
    if Y.shape[1] < 2:
        raise DataError("multiclass needs at least two label columns")
    if not set(np.unique(Y)) <= {-1.0, 1.0}:
        raise DataError("one-hot labels must contain only -1 and +1")
    if not np.all((Y == 1.0).sum(axis=1) == 1):
        raise DataError("each row of Y must have exactly one +1")
    views = [_View(X, kernel, cfg.R)]
    U_list, C, report = _fit_engine(views, Y, cfg, "multiclass")
    model = SpkmModel(task="multiclass", loss=cfg.loss, kernel=kernel, U=U_list[0], C=C)
    return model, report


def fit_mkl(views, y, cfg: TrainConfig, task: str = "auto"):
    """Train over several data views, each with its own kernel and basis count.

    views is a list of (X_j, kernel_j, R_j) triples sharing the row count;
    the weight vector concatenates all views' coefficients and is solved
    jointly, so an l1 penalty (c_norm_a=1) can zero out whole views. With a
    single view this follows exactly the same trajectory as fit().
    """
    if len(views) < 1:
        raise ConfigError("need at least one view")
    parsed = []
    n = None
    for j, (Xj, kern, Rj) in enumerate(views):
        Xj = np.asarray(Xj, dtype=float)
        if Xj.ndim != 2:
            raise DataError(f"view {j} must be a 2-d matrix, got shape {Xj.shape}")
        if n is None:
            n = Xj.shape[0]
        elif Xj.shape[0] != n:
            raise DataError(f"view {j} has {Xj.shape[0]} rows, expected {n}")
        if Rj < 1:
            raise ConfigError(f"view {j} needs R >= 1, got {Rj}")
        parsed.append(_View(Xj, kern, int(Rj)))
    y = np.asarray(y, dtype=float)
    if y.shape != (n,):
        raise DataError(f"y must have one entry per row, got {y.shape} for n={n}")
    if task == "auto":
        task = _infer_task(y)
    if task not in ("binary", "regression"):
        raise ConfigError(f"fit_mkl handles binary or regression tasks, got {task!r}")

    U_list, C, report = _fit_engine(parsed, y[:, None], cfg, task)
    offset = 0
    blocks = []
    for v, U in zip(parsed, U_list):
        blocks.append(SpkmView(kernel=v.kernel, U=U, c=C[offset:offset + v.R, 0]))
        offset += v.R
    model = SpkmModel(task=task, loss=cfg.loss, views=blocks)
    return model, report


# ----------------------------------------------------------------------
# single steps on an existing model (binary/regression, one view)


def _model_state(model, X, y, cfg):
    if model.views is not None or model.task == "multiclass":
        raise ConfigError("step functions operate on single-view binary/regression models")
    X, y = _check_xy(X, y)
    views = [_View(X, model.kernel, model.U.shape[0])]
    return views, model.U, model.c[:, None], y[:, None]


def u_step(model: SpkmModel, X, y, cfg: TrainConfig):
    """One round of projected gradient descent on the basis vectors with the
    weights fixed. Returns (new U, trace of accepted objective values)."""
    views, U, C, Y = _model_state(model, X, y, cfg)
    U_list, _, trace = _u_descent(views, [U], C, Y, cfg.loss, cfg)
    return U_list[0], trace


def c_step(model: SpkmModel, X, y, cfg: TrainConfig) -> np.ndarray:
    """Re-solve the weights with the basis vectors fixed; never increases the
    objective (the previous weights are kept if the solve fails to improve)."""
    views, U, C, Y = _model_state(model, X, y, cfg)
    K, _ = _grams(views, [U])
    obj = _objective(K, C, Y, cfg.loss, cfg)
    C_new, _ = _c_update(K, C, Y, cfg.loss, cfg, obj)
    return C_new[:, 0]


def u_gradient(model: SpkmModel, X, y) -> np.ndarray:
    """Gradient of the data loss w.r.t. the basis vectors at the model's
    current parameters; the O(d n R) computation that dominates training."""
    if model.views is not None or model.task == "multiclass":
        raise ConfigError("u_gradient operates on single-view binary/regression models")
    X, y = _check_xy(X, y)
    K, cache = model.kernel.gram_cached(X, model.U)
    w = model.loss.grad(K @ model.c, y)
    return model.kernel.weighted_grad_u(
        X, model.U, w[:, None] * model.c[None, :], cache=cache
    )
