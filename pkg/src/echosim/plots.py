"""Simple SVG plot emission for the CLI. Data always goes to CSV first; these
plots are a convenience view, not the primary output."""

from __future__ import annotations

import math
import os


def _use_agg():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_series(snapshots, path):
    """Entropy / segregation / diversity curves from a snapshot series."""
    plt = _use_agg()
    ts = [s.t for s in snapshots]
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2))
    for ax, attr, label in zip(
            axes,
            ("mean_screen_entropy", "segregation", "neighbor_diversity"),
            ("screen entropy", "segregation", "neighbor diversity")):
        ys = [getattr(s, attr) for s in snapshots]
        ax.plot(ts, ys)
        ax.set_xlabel("step")
        ax.set_ylabel(label)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_epsilon_rows(rows, path):
    plt = _use_agg()
    eps = [r.epsilon for r in rows]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
    axes[0].errorbar(eps, [r.mean_peaks for r in rows],
                     yerr=[r.std_peaks for r in rows], marker="o")
    axes[0].set_xlabel("epsilon")
    axes[0].set_ylabel("opinion peaks")
    axes[1].errorbar(eps, [r.mean_max_distance for r in rows],
                     yerr=[r.std_max_distance for r in rows], marker="o")
    axes[1].set_xlabel("epsilon")
    axes[1].set_ylabel("max opinion distance")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_mu_q_grid(cells, t_max, path):
    """Heatmap of mean time to echo chamber (censored runs at t_max)."""
    plt = _use_agg()
    mus = sorted({c.mu for c in cells})
    qs = sorted({c.q for c in cells})
    grid = [[float("nan")] * len(mus) for _ in qs]
    for c in cells:
        grid[qs.index(c.q)][mus.index(c.mu)] = math.log10(
            max(c.mean_time_censored_at_max(t_max), 1.0))
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(grid, origin="lower", aspect="auto")
    ax.set_xticks(range(len(mus)), [str(m) for m in mus])
    ax.set_yticks(range(len(qs)), [str(q) for q in qs])
    ax.set_xlabel("mu")
    ax.set_ylabel("q")
    fig.colorbar(im, ax=ax, label="log10 mean time")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_scaling_rows(rows, path):
    plt = _use_agg()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.errorbar([r.n for r in rows], [r.mean_time for r in rows],
                yerr=[r.std_time for r in rows], marker="o")
    ax.set_xlabel("N")
    ax.set_ylabel("mean time to echo chamber")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_strategy_ccdfs(by_strategy, path):
    plt = _use_agg()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name, stats in by_strategy.items():
        if stats.ccdf:
            xs = [d for d, _f in stats.ccdf if d > 0]
            ys = [f for d, f in stats.ccdf if d > 0]
            ax.loglog(xs, ys, label=name)
    ax.set_xlabel("in-degree")
    ax.set_ylabel("CCDF")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_histogram_csv(rows, path, xlabel):
    """rows: (bin_lo, bin_hi, count) triples."""
    plt = _use_agg()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar([r[0] for r in rows], [r[2] for r in rows],
           width=[r[1] - r[0] for r in rows], align="edge")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
