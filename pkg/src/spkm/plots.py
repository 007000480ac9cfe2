"""Figure rendering for bench results: one PNG per scenario, saved next to
the CSV it is drawn from."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _mean_by(rows, value_name, keys=("method", "param")):
    groups = {}
    for r in rows:
        if r["value_name"] != value_name:
            continue
        key = tuple(r[k] for k in keys)
        groups.setdefault(key, []).append(r["value"])
    return {k: float(np.mean(v)) for k, v in sorted(groups.items())}


def _param_number(param):
    tail = param.split("=", 1)[-1]
    try:
        return float(tail)
    except ValueError:
        return None


def render_figure(scenario, rows, out_path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if scenario == "scaling":
        for method, value_name in (("spkm-grad", "grad_seconds"), ("spkm", "fit_seconds"), ("krr", "fit_seconds")):
            means = _mean_by([r for r in rows if r["method"] == method], value_name)
            pts = sorted((_param_number(p), v) for (_, p), v in means.items())
            if pts:
                ax.loglog([p for p, _ in pts], [v for _, v in pts], marker="o", label=method)
        ax.set_xlabel("training samples n")
        ax.set_ylabel("seconds")
        ax.set_title("runtime scaling")
        ax.legend()
    elif scenario == "sparsity":
        for value_name, style in (("accuracy", "-o"), ("signal_recall", "--s")):
            means = _mean_by([r for r in rows if r["method"] == "spkm"], value_name)
            pts = sorted((_param_number(p), v) for (_, p), v in means.items())
            ax.semilogx([p for p, _ in pts], [v for _, v in pts], style, label=value_name)
        base = _mean_by([r for r in rows if r["method"] == "spkm-unprojected"], "accuracy")
        if base:
            ax.axhline(next(iter(base.values())), color="gray", linestyle=":",
                       label="accuracy, no projection")
        ax.set_xlabel("l1 ball radius")
        ax.set_ylabel("mean over seeds")
        ax.set_title("primal sparsity sweep")
        ax.legend()
    elif scenario == "nystrom":
        means = _mean_by(rows, "accuracy", keys=("dataset", "method", "param"))
        series = {}
        for (dataset, method, param), v in means.items():
            series.setdefault((dataset, method), []).append((_param_number(param), v))
        for (dataset, method), pts in sorted(series.items()):
            pts.sort()
            ax.plot([p for p, _ in pts], [v for _, v in pts], marker="o",
                    label=f"{dataset} / {method}")
        ax.set_xlabel("landmarks m")
        ax.set_ylabel("mean accuracy")
        ax.set_title("landmark selection for Nystrom features")
        ax.legend(fontsize=8)
    elif scenario == "mkl":
        means = _mean_by(rows, "accuracy")
        nnz_inf = _mean_by(rows, "informative_view_nnz")
        nnz_noise = _mean_by(rows, "noise_view_nnz")
        labels = ["accuracy", "informative view nnz", "noise view nnz"]
        vals = [
            next(iter(means.values()), 0.0),
            next(iter(nnz_inf.values()), 0.0),
            next(iter(nnz_noise.values()), 0.0),
        ]
        ax.bar(labels, vals, color=["tab:blue", "tab:green", "tab:red"])
        ax.set_title("two-view selection with l1 weights")
    else:  # table1 and anything tabular
        means = _mean_by(rows, "accuracy", keys=("method",))
        labels = [k[0] for k in means]
        ax.bar(labels, list(means.values()))
        ax.set_ylim(0.5, 1.0)
        ax.set_ylabel("mean accuracy")
        ax.set_title(scenario)
        ax.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
