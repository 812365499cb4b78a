"""Render sweep results to PNG figures next to the delimited output."""

from __future__ import annotations

import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import RunRecord

__all__ = ["render_figures"]

_AXIS_LABELS = {
    "latency_D": "latency requirement D (s)",
    "cache_ratio": "cache ratio S/M",
    "zipf_gamma": "Zipf exponent",
    "density": "BS density (per unit area)",
    "backhaul_prob": "backhaul availability",
}


def render_figures(records: list[RunRecord], directory: str,
                   sweep_axis: str) -> list[str]:
    """Write outage-vs-sweep (and, when available, latency-vs-sweep) figures.

    Returns the list of files written.
    """
    os.makedirs(directory, exist_ok=True)
    xlabel = _AXIS_LABELS.get(sweep_axis, sweep_axis)
    written: list[str] = []

    series: dict[tuple[str, str], list[RunRecord]] = defaultdict(list)
    for rec in records:
        if rec.error is None:
            series[(rec.policy, rec.evaluator)].append(rec)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    plotted = False
    for (policy, evaluator), recs in sorted(series.items()):
        recs.sort(key=lambda r: r.sweep_value)
        xs = [r.sweep_value for r in recs]
        if all(r.outage is not None for r in recs):
            ax.plot(xs, [r.outage for r in recs], marker="o",
                    label=f"{policy} / {evaluator}")
            plotted = True
        elif all(r.lower is not None and r.upper is not None for r in recs):
            ax.fill_between(xs, [r.lower for r in recs], [r.upper for r in recs],
                            alpha=0.3, label=f"{policy} / {evaluator} bounds")
            plotted = True
    if plotted:
        ax.set_xlabel(xlabel)
        ax.set_ylabel("outage probability")
        ax.set_yscale("log")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        path = os.path.join(directory, f"outage_vs_{sweep_axis}.png")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        written.append(path)
    plt.close(fig)

    delay_series = {key: [r for r in recs if r.d_star is not None]
                    for key, recs in series.items()}
    delay_series = {key: recs for key, recs in delay_series.items() if recs}
    if delay_series:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for (policy, evaluator), recs in sorted(delay_series.items()):
            recs.sort(key=lambda r: r.sweep_value)
            ax.plot([r.sweep_value for r in recs], [r.d_star for r in recs],
                    marker="s", label=f"{policy} / {evaluator}")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("minimum achievable latency D* (s)")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        path = os.path.join(directory, f"latency_vs_{sweep_axis}.png")
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        written.append(path)
        plt.close(fig)
    return written
