"""Command-line driver: train, eval, bench, theory, synth.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure. Every run writes its resolved configuration alongside the outputs,
and identical flags reproduce identical artifacts byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import data as dat
from .core import (
    TrainConfig,
    decide,
    fit,
    load_model,
    predict,
    save_model,
)
from .errors import ConfigError, DataError, NumericalError
from .kernels import KernelSpec
from .losses import LossSpec
from .theory import BoundInputs, empirical_rademacher, rademacher_bound


def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("true", "1", "yes"):
        return True
    if t in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _parse_label_col(text):
    t = str(text).strip()
    try:
        return int(t)
    except ValueError:
        return t


def _load_dataset(path, label_col):
    """Load a CSV, sniffing whether the first row is a header."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"dataset file not found: {path}")
    with open(p, newline="", encoding="utf-8") as f:
        first = next(csv.reader(f), None)
    if first is None:
        raise DataError(f"{path} is empty")
    has_header = False
    for cell in first:
        try:
            float(cell)
        except ValueError:
            has_header = True
            break
    return dat.load_csv(p, label_col, has_header=has_header)


def _resolve_kernel(args, X):
    family = {"rbf": "rbf", "poly": "polynomial"}.get(args.kernel)
    if family is None:
        raise ConfigError(f"unknown kernel {args.kernel!r}; expected rbf or poly")
    if args.sigma == "auto":
        sigma = dat.sigma_heuristic(X) if family == "rbf" else 1.0
    else:
        sigma = float(args.sigma)
    rescale = args.rescale
    if rescale is None:
        rescale = family == "rbf"
    return KernelSpec(family, sigma=sigma, degree=args.degree, rescale_to_signed=rescale)


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2)
        f.write("\n")


# ----------------------------------------------------------------------
# commands


def cmd_train(args) -> int:
    ds = _load_dataset(args.data, args.label_col)
    task = "binary" if set(np.unique(ds.y)) <= {-1.0, 1.0} else "regression"
    loss_tag = args.loss
    if loss_tag == "auto":
        loss_tag = "cosine" if task == "binary" else "squared"
    kernel = _resolve_kernel(args, ds.X)
    radius = None if str(args.u_radius).lower() == "none" else float(args.u_radius)
    cfg = TrainConfig(
        R=args.r, loss=LossSpec.from_tag(loss_tag), c_norm_a=args.c_norm, lam=args.lam,
        u_ball_radius=radius, restarts_K=args.restarts, seed=args.seed,
    )
    t0 = time.perf_counter()
    model, report = fit(ds.X, ds.y, kernel, cfg, task=task)
    seconds = time.perf_counter() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_model(model, out / "model.json")
    resolved = {
        "command": "train",
        "data": str(args.data),
        "label_col": args.label_col,
        "task": task,
        "kernel": kernel.to_json(),
        "train_config": cfg.to_json(),
    }
    _write_json(out / "report.json", {
        "config": resolved,
        "train_seconds": seconds,
        "report": report.to_json(),
    })
    print(f"wrote {out / 'model.json'} and {out / 'report.json'} "
          f"(task={task}, final objective {report.final_objective:.6g})")
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    ds = _load_dataset(args.data, args.label_col)
    t0 = time.perf_counter()
    scores = predict(model, ds.X)
    if model.task == "regression":
        metric, value = "mse", dat.mse(ds.y, scores)
    else:
        metric, value = "accuracy", dat.accuracy(ds.y, decide(model, scores))
    seconds = time.perf_counter() - t0

    if model.views is not None:
        u_nnz = sum(int(np.count_nonzero(v.U)) for v in model.views)
        u_entries = sum(v.U.size for v in model.views)
        coeffs = np.concatenate([v.c for v in model.views])
    else:
        u_nnz = int(np.count_nonzero(model.U))
        u_entries = model.U.size
        coeffs = model.C if model.task == "multiclass" else model.c
    metrics = {
        "metric": metric,
        "value": value,
        "r": model.n_basis,
        "u_nnz_fraction": u_nnz / u_entries,
        "c_nnz": int(np.count_nonzero(coeffs)),
        "seconds": seconds,
        "config": {"command": "eval", "model": str(args.model), "data": str(args.data),
                   "label_col": args.label_col},
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "metrics.json", metrics)
    print(json.dumps(metrics, indent=2))
    return 0


def cmd_bench(args) -> int:
    bcw = None
    if args.data is not None:
        bcw = _load_dataset(args.data, args.label_col)
    rows = bench_mod.run_scenario(
        args.scenario, args.seed, repeats=args.repeats, bcw=bcw, mkl_lambda=args.lam,
    )
    rows = bench_mod.sort_rows(rows)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{args.scenario}.csv"
    fields = ["scenario", "method", "dataset", "param", "value_name", "value", "seed", "seconds"]
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    resolved = {
        "command": "bench", "scenario": args.scenario, "seed": args.seed,
        "repeats": args.repeats, "data": None if args.data is None else str(args.data),
        "mkl_lambda": args.lam,
    }
    _write_json(out / f"{args.scenario}_summary.json",
                {"config": resolved, "cells": bench_mod.summarize(rows)})
    written = [str(csv_path), str(out / f'{args.scenario}_summary.json')]
    if not args.no_plot:
        from .plots import render_figure

        fig_path = out / f"{args.scenario}.png"
        render_figure(args.scenario, rows, fig_path)
        written.append(str(fig_path))
    print("wrote " + ", ".join(written))
    return 0


def cmd_theory(args) -> int:
    if args.data is not None:
        X = _load_dataset(args.data, args.label_col).X
    else:
        X = np.random.default_rng(args.seed).normal(size=(args.n, args.d))
    sigma = dat.sigma_heuristic(X) if args.sigma == "auto" else float(args.sigma)
    kernel = KernelSpec("rbf", sigma=sigma)  # raw rbf: k(x, x) = 1 = tau
    n = X.shape[0]
    if args.budget > 0:
        bound = rademacher_bound(BoundInputs(args.tau, args.budget, n))
    else:
        bound = 0.0
    est = empirical_rademacher(X, kernel, args.budget, trials=args.trials, seed=args.seed)
    result = {
        "bound": bound,
        "estimate": est.estimate,
        "trials": est.trials,
        "stderr": est.stderr,
        "config": {"command": "theory", "tau": args.tau, "budget": args.budget,
                   "n": n, "sigma": sigma, "seed": args.seed,
                   "data": None if args.data is None else str(args.data)},
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "theory.json", result)
    print(json.dumps(result, indent=2))
    return 0


def cmd_synth(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sidecar = None
    if args.generator == "blobs":
        center = np.zeros(args.d)
        center[0] = args.separation
        ds = dat.gen_blobs(args.n, np.vstack([-center, center]), std=args.std, seed=args.seed)
        resolved = {"generator": "blobs", "n": args.n, "d": args.d,
                    "separation": args.separation, "std": args.std, "seed": args.seed}
    elif args.generator == "sparse-noise":
        ds = dat.gen_sparse_noise(args.n, args.d_signal, args.d_noise, args.degree, args.seed)
        resolved = {"generator": "sparse-noise", "n": args.n, "d_signal": args.d_signal,
                    "d_noise": args.d_noise, "degree": args.degree, "seed": args.seed}
        sidecar = {"signal_mask": [bool(b) for b in ds.signal_mask], "config": resolved}
    elif args.generator == "multiview":
        ds = dat.gen_multiview(args.n, d_informative=args.d_signal, d_noise=args.d_noise,
                               seed=args.seed)
        resolved = {"generator": "multiview", "n": args.n, "d_informative": args.d_signal,
                    "d_noise": args.d_noise, "seed": args.seed}
        widths = [v.shape[1] for v in ds.X]
        bounds = np.cumsum([0] + widths)
        sidecar = {"view_columns": [[int(bounds[i]), int(bounds[i + 1])] for i in range(len(widths))],
                   "config": resolved}
        ds = dat.Dataset(X=np.hstack(ds.X), y=ds.y)
    else:
        raise ConfigError(f"unknown generator {args.generator!r}")

    csv_path = out / f"{args.generator}.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([f"x{j}" for j in range(ds.X.shape[1])] + ["label"])
        for row, label in zip(ds.X, ds.y):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(label))])
    written = [str(csv_path)]
    if sidecar is not None:
        mask_path = out / f"{args.generator}_mask.json"
        _write_json(mask_path, sidecar)
        written.append(str(mask_path))
    print("wrote " + ", ".join(written))
    return 0


# ----------------------------------------------------------------------
# parser


def _add_data_flags(p, required=True):
    p.add_argument("--data", required=required, help="path to a CSV dataset")
    p.add_argument("--label-col", type=_parse_label_col, default=-1,
                   help="label column index or header name (default: last column)")


def _build_parser():
    parser = argparse.ArgumentParser(prog="spkm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model on a CSV dataset")
    _add_data_flags(p)
    p.add_argument("--kernel", choices=["rbf", "poly"], default="rbf")
    p.add_argument("--sigma", default="auto", help="rbf bandwidth, or 'auto' for the mean-distance heuristic")
    p.add_argument("--degree", type=int, default=3, help="polynomial kernel degree")
    p.add_argument("--rescale", type=_parse_bool, default=None,
                   help="map kernel values from [0,1] to [-1,1] (default: true for rbf)")
    p.add_argument("--loss", choices=["squared", "cosine", "auto"], default="auto")
    p.add_argument("--r", type=int, default=5, help="number of basis vectors")
    p.add_argument("--c-norm", type=int, choices=[1, 2], default=2, dest="c_norm")
    p.add_argument("--lambda", type=float, default=1e-3, dest="lam")
    p.add_argument("--u-radius", default="none", dest="u_radius",
                   help="l1 ball radius for basis vectors, or 'none'")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a saved model on a CSV dataset")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run a benchmark scenario; writes CSV, summary JSON, figure")
    p.add_argument("--scenario", required=True, choices=list(bench_mod.SCENARIOS))
    _add_data_flags(p, required=False)
    p.add_argument("--repeats", type=int, default=5, help="seeds seed..seed+repeats-1")
    p.add_argument("--lambda", type=float, default=None, dest="lam",
                   help="override the weight penalty for the mkl scenario")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("theory", help="compare the complexity bound with a Monte-Carlo estimate")
    _add_data_flags(p, required=False)
    p.add_argument("--tau", type=float, default=1.0, help="kernel bound sup k(x,x)")
    p.add_argument("--budget", type=float, default=1.0, help="l1 budget on the weights")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--n", type=int, default=40, help="rows of synthetic data when --data is absent")
    p.add_argument("--d", type=int, default=3, help="columns of synthetic data when --data is absent")
    p.add_argument("--sigma", default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    p.add_argument("--generator", required=True, choices=["blobs", "sparse-noise", "multiview"])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--d", type=int, default=2, help="blob dimensionality")
    p.add_argument("--separation", type=float, default=2.0, help="blob center offset")
    p.add_argument("--std", type=float, default=0.3, help="blob standard deviation")
    p.add_argument("--d-signal", type=int, default=3, dest="d_signal")
    p.add_argument("--d-noise", type=int, default=27, dest="d_noise")
    p.add_argument("--degree", type=int, default=2, help="signal polynomial degree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return 3
    except (NumericalError, np.linalg.LinAlgError) as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
