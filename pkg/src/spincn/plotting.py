"""Figures for experiment time series, written to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

# Fixed metadata keeps repeated renders byte-identical.
_PNG_METADATA = {"Software": None}


def plot_populations_and_i_plus(series, state: int, path, title: str = ""):
    """One population curve plus Im and Re of <I+>, with the pulse end marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(series.times, series.populations[:, state], label=f"(1) $r_{{{state}{state}}}$")
    ax.plot(series.times, series.i_plus.imag, label=r"(2) Im$\langle I^+\rangle$")
    ax.plot(series.times, series.i_plus.real, label=r"(3) Re$\langle I^+\rangle$")
    ax.axvline(series.times[-1], color="k", lw=0.8, ls=":")
    ax.set_xlabel("t")
    ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def plot_active_populations(series, path, title: str = ""):
    """The four active-state populations r00..r33 over the pulse."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for k in range(4):
        ax.plot(series.times, series.populations[:, k], label=f"({k + 1}) $r_{{{k}{k}}}$")
    ax.axvline(series.times[-1], color="k", lw=0.8, ls=":")
    ax.set_xlabel("t")
    ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def plot_experiment(series, experiment: str, path):
    """Population plus <I+> panel for digital runs, four populations otherwise."""
    digital = {"fig2a": 0, "fig2b": 1, "fig2c": 2, "fig2d": 3}
    if experiment in digital:
        return plot_populations_and_i_plus(series, digital[experiment], path, experiment)
    return plot_active_populations(series, path, experiment)
