"""Optional figures for simulation and comparison runs.

Rendering uses the non-interactive Agg backend and writes straight to a
file. Nothing here affects the CSV or JSON outputs.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (6.0, 4.0)


def _finish(fig, ax, path):
    ax.set_xlabel("time (s)")
    ax.set_ylabel("bending angle (deg)")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trajectory(trajectory, path, label="simulation"):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(trajectory.times, np.degrees(trajectory.angles), "k-", lw=1.5, label=label)
    _finish(fig, ax, path)


def plot_comparison(report, path, traces=()):
    """Measured repeats, their mean, and both models on one set of axes."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for i, trace in enumerate(traces):
        ax.plot(trace.times, trace.angles, color="0.7", lw=0.8,
                label="experiment" if i == 0 else None)
    mean = report.mean_trace
    ax.plot(mean.times, mean.angles, "k-", lw=1.5, label="mean of experiments")
    if report.nonlinear_trace is not None:
        ax.plot(report.nonlinear_trace.times, report.nonlinear_trace.angles, "r--", lw=1.5,
                label=f"nonlinear (RMS {report.rms_nonlinear:.2f} deg)")
    if report.linear_trace is not None:
        ax.plot(report.linear_trace.times, report.linear_trace.angles, "b:", lw=1.5,
                label=f"linear (RMS {report.rms_linear:.2f} deg)")
    if report.setpoint is not None:
        ax.axhline(report.setpoint, color="0.5", lw=0.8, ls="-.")
    _finish(fig, ax, path)
