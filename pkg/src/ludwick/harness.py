"""Compare simulated step responses with repeated measurements.

Measured traces are averaged on a uniform grid covering the span that all
traces share, and each model is scored by its RMS distance in degrees
from that average.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .dynamics import DEFAULT_DT, linear_step_response, step_response
from .errors import GridMismatchError, SpanError, ValidationError

DEFAULT_RATE_HZ = 100.0

# Grid times closer than this are considered the same instant.
GRID_ATOL = 1e-9


@dataclass(frozen=True)
class MeasuredTrace:
    times: np.ndarray  # s
    angles: np.ndarray  # deg

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        a = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "angles", a)
        if t.ndim != 1 or t.shape != a.shape:
            raise ValidationError("times and angles must be 1-D and of equal length")
        if len(t) < 2:
            raise ValidationError("a trace needs at least 2 samples")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(a)):
            raise ValidationError("trace contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise ValidationError("trace times must be strictly increasing")

    def resample(self, grid):
        grid = np.asarray(grid, dtype=float)
        if grid[0] < self.times[0] - GRID_ATOL or grid[-1] > self.times[-1] + GRID_ATOL:
            raise SpanError(
                f"grid [{grid[0]:g}, {grid[-1]:g}] s leaves the trace span "
                f"[{self.times[0]:g}, {self.times[-1]:g}] s"
            )
        return MeasuredTrace(grid, np.interp(grid, self.times, self.angles))


def trajectory_trace(trajectory):
    """Angle history of a simulated trajectory, in degrees."""
    return MeasuredTrace(trajectory.times, np.degrees(trajectory.angles))


def mean_trace(traces, grid):
    """Linearly interpolate every trace onto ``grid`` and average pointwise.

    The average does not depend on the order of ``traces``.
    """
    if not traces:
        raise ValidationError("need at least one trace")
    grid = np.asarray(grid, dtype=float)
    stack = np.array([t.resample(grid).angles for t in traces])
    # sorted columns make the sum order-free; offsetting from the minimum
    # makes the mean of identical traces exact
    stack = np.sort(stack, axis=0)
    floor = stack[0]
    return MeasuredTrace(grid, floor + (stack - floor).mean(axis=0))


def common_grid(traces, rate_hz=DEFAULT_RATE_HZ):
    """Uniform grid at ``rate_hz`` over the intersection of the trace spans."""
    start = max(float(t.times[0]) for t in traces)
    end = min(float(t.times[-1]) for t in traces)
    if not end > start:
        raise SpanError("traces share no common time span")
    count = math.floor((end - start) * rate_hz + 1e-9)
    if count < 1:
        raise SpanError(f"common span {end - start:g} s is shorter than one grid period")
    return start + np.arange(count + 1) / rate_hz


def rms_error(a, b):
    """Root-mean-square angle difference of two traces on the same grid."""
    if len(a.times) != len(b.times) or not np.allclose(
        a.times, b.times, rtol=0.0, atol=GRID_ATOL
    ):
        raise GridMismatchError("traces are sampled on different grids")
    diff = a.angles - b.angles
    return float(np.sqrt(np.mean(diff * diff)))


@dataclass(frozen=True)
class ComparisonReport:
    rms_nonlinear: float
    rms_linear: float
    setpoint: Optional[float]
    trace_count: int
    mean_trace: MeasuredTrace
    nonlinear_trace: Optional[MeasuredTrace] = None
    linear_trace: Optional[MeasuredTrace] = None

    def to_dict(self):
        return {
            "rms_nonlinear_deg": self.rms_nonlinear,
            "rms_linear_deg": self.rms_linear,
            "setpoint_deg": self.setpoint,
            "trace_count": self.trace_count,
            "mean_trace": {
                "time_s": self.mean_trace.times.tolist(),
                "angle_deg": self.mean_trace.angles.tolist(),
            },
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


def compare(
    params,
    force,
    traces,
    rate_hz=DEFAULT_RATE_HZ,
    dt=None,
    theta0=0.0,
    omega0=0.0,
    setpoint=None,
):
    """Score the nonlinear and linear models against the averaged traces.

    Both models start from ``(theta0, omega0)`` (radians) at t = 0, the
    instant the force is applied. ``dt`` defaults to the smaller of
    ``DEFAULT_DT`` and a fifth of the grid period. ``setpoint`` (degrees) is
    carried into the report untouched.
    """
    traces = list(traces)
    if not traces:
        raise ValidationError("need at least one trace")
    grid = common_grid(traces, rate_hz)
    if grid[0] < 0:
        raise SpanError("traces must not start before t = 0")
    if dt is None:
        dt = min(DEFAULT_DT, 1.0 / rate_hz / 5.0)
    t_end = float(grid[-1])
    if t_end <= 0:
        raise SpanError("traces end at t = 0")

    avg = mean_trace(traces, grid)
    nonlinear = trajectory_trace(step_response(params, force, t_end, dt, theta0, omega0))
    linear = trajectory_trace(linear_step_response(params, force, t_end, dt, theta0, omega0))
    nonlinear = MeasuredTrace(grid, np.interp(grid, nonlinear.times, nonlinear.angles))
    linear = MeasuredTrace(grid, np.interp(grid, linear.times, linear.angles))
    return ComparisonReport(
        rms_nonlinear=rms_error(nonlinear, avg),
        rms_linear=rms_error(linear, avg),
        setpoint=setpoint,
        trace_count=len(traces),
        mean_trace=avg,
        nonlinear_trace=nonlinear,
        linear_trace=linear,
    )


def read_trace_csv(path):
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["time_s", "angle_deg"]:
                raise ValidationError("expected header time_s,angle_deg")
            rows = [(float(r[0]), float(r[1])) for r in reader if r]
        if not rows:
            raise ValidationError("no samples")
        times, angles = zip(*rows)
        return MeasuredTrace(np.array(times), np.array(angles))
    except (ValueError, IndexError, UnicodeDecodeError) as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def read_trace_dir(directory):
    """Every ``*.csv`` in a run directory, in filename order. Fails on the first bad file."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ValidationError(f"{directory}: not a directory")
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise ValidationError(f"{directory}: no trace CSV files")
    return [read_trace_csv(f) for f in files]


def write_trace_csv(trace, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("time_s,angle_deg\n")
        for t, a in zip(trace.times, trace.angles):
            fh.write(f"{float(t)!r},{float(a)!r}\n")
