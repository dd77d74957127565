"""Cactus plot rendering.

Figures go straight to files through the Agg backend; nothing is shown
interactively.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import LogLocator, MaxNLocator, NullFormatter, StrMethodFormatter  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
    "svg.hashsalt": "posat",
}

LABELS = {"time": "solving time (s)", "checks": "clause checks"}
MARKERS = "os^vD<>px*"


def cactus_figure(series: dict, metric: str, path, title: str = "") -> None:
    """One panel per verdict group; x is the metric, y the instances solved.

    ``series`` maps (config, verdict-group) to [(k, value), ...] as produced
    by :func:`posat.harness.report.cactus_series`.
    """
    groups = []
    for _, group in series:
        if group not in groups:
            groups.append(group)
    groups = sorted(groups, key=lambda g: {"SAT": 0, "UNSAT": 1}.get(g, 2)) or ["ALL"]
    configs = []
    for config, _ in series:
        if config not in configs:
            configs.append(config)
    with plt.rc_context(RC):
        fig, axes = plt.subplots(1, len(groups), figsize=(3.6 * len(groups), 3.0), squeeze=False)
        for ax, group in zip(axes[0], groups):
            for i, config in enumerate(configs):
                points = series.get((config, group))
                if not points:
                    continue
                ks = [k for k, _ in points]
                values = [v for _, v in points]
                ax.step(values, ks, where="post", marker=MARKERS[i % len(MARKERS)], label=config)
            ax.set_xlabel(LABELS.get(metric, metric))
            ax.set_ylabel("instances solved")
            if group != "ALL":
                ax.set_title(f"{group} instances")
            ax.yaxis.set_major_locator(MaxNLocator(integer=True))
            if metric == "checks":
                shown = [v for (_, g), pts in series.items() if g == group for _, v in pts]
                # counts span orders of magnitude; zero-check runs need symlog
                if shown and min(shown) > 0:
                    ax.set_xscale("log")
                    ax.xaxis.set_major_locator(LogLocator(subs=(1, 2, 5)))
                    ax.xaxis.set_major_formatter(StrMethodFormatter("{x:g}"))
                    ax.xaxis.set_minor_formatter(NullFormatter())
                else:
                    ax.set_xscale("symlog")
        axes[0][0].legend(loc="best", frameon=False)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
        plt.close(fig)
