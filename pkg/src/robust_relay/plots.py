"""Figure rendering for sweep reports."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import SWEEP_T_OVER_P, RateReport


def render_sweep_figure(report: RateReport, path: str, title: str = ""):
    """Plot the HD/FD/selected mean-rate curves of a sweep to an image file."""
    x = [p.sweep_param for p in report.points]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(x, [p.fd_mean for p in report.points], marker="+", label="FD worst-case")
    ax.plot(x, [p.hd_mean for p in report.points], marker="o", linestyle="--", label="HD")
    ax.plot(x, [p.selected_mean for p in report.points], marker=".", linestyle=":",
            label="mode-selected")
    ax.set_xlabel("T/P" if report.sweep == SWEEP_T_OVER_P else "relay receive antennas")
    ax.set_ylabel("average rate (bits/channel use)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
