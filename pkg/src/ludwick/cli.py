"""Command-line front end.

Exit status is 0 on success, 1 for invalid input and 2 when the numerics
fail (singular fit, unstable integration). Every input is parsed and every
result computed before any output file is opened.
"""

import argparse
import csv
import io
import math
import sys

from .config import load_config
from .dynamics import step_response
from .errors import NumericalError, ValidationError
from .harness import compare, read_trace_dir
from .materials import builtin_materials, load_materials, materials_to_csv
from .regress import DEFAULT_HOLDOUT, fit_model, fit_n_from_curve, predict_n, read_curve_csv, split_by_name

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _g(x):
    return "" if x is None else repr(float(x))


def estimate_table(materials, holdout_names):
    """Fit on everything outside the holdout and tabulate predictions.

    With an empty holdout the fit uses every record with a known exponent
    and the table lists in-sample predictions for all of them.
    """
    if holdout_names:
        training, rows = split_by_name(materials, holdout_names)
    else:
        rows = [m for m in materials if m.fractional_power is not None]
        training = rows
    training = [m for m in training if m.fractional_power is not None]
    model = fit_model(training)
    table = []
    for m in rows:
        pred = predict_n(model, m)
        resid = None if m.fractional_power is None else pred - m.fractional_power
        table.append((m.name, m.fractional_power, pred, resid))
    return model, table


def run_estimate_n(args):
    materials = load_materials(args.db) if args.db else builtin_materials()
    names = [s.strip() for s in args.holdout.split(",") if s.strip()]
    model, table = estimate_table(materials, names)
    out = io.StringIO()
    out.write(f"# {model.to_text()}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["name", "true_n", "predicted_n", "residual"])
    for name, true_n, pred, resid in table:
        writer.writerow([name, _g(true_n), _g(pred), _g(resid)])
    _emit(out.getvalue(), args.out)


def run_fit_n(args):
    n = fit_n_from_curve(read_curve_csv(args.curve), args.e)
    _emit(f"{n!r}\n", args.out)


def trajectory_csv(trajectory, header_comment):
    out = io.StringIO()
    out.write(f"# {header_comment}\n")
    out.write("time_s,angle_deg,velocity_degps\n")
    for t, a, w in zip(trajectory.times, trajectory.angles, trajectory.velocities):
        out.write(f"{float(t)!r},{math.degrees(a)!r},{math.degrees(w)!r}\n")
    return out.getvalue()


def run_simulate(args):
    cfg = load_config(args.config)
    if args.linear:
        cfg = cfg.linearized()
    traj = step_response(cfg.params, cfg.force, cfg.t_end, cfg.dt, cfg.theta0, cfg.omega0)
    text = trajectory_csv(traj, cfg.describe())
    _emit(text, args.out)
    if args.figure:
        from .plotting import plot_trajectory

        plot_trajectory(traj, args.figure, "linear" if args.linear else "nonlinear")


def run_compare(args):
    cfg = load_config(args.config)
    traces = read_trace_dir(args.traces)
    report = compare(
        cfg.params,
        cfg.force,
        traces,
        rate_hz=args.rate_hz,
        theta0=cfg.theta0,
        omega0=cfg.omega0,
        setpoint=args.setpoint,
    )
    _emit(report.to_json(), args.out)
    if args.figure:
        from .plotting import plot_comparison

        plot_comparison(report, args.figure, traces)


def run_materials(args):
    _emit(materials_to_csv(builtin_materials()), args.out)


def build_parser():
    parser = _Parser(prog="ludwick", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate-n", help="predict fractional powers of held-out materials")
    p.add_argument("--db", help="material CSV (default: builtin table)")
    p.add_argument(
        "--holdout",
        default=",".join(DEFAULT_HOLDOUT),
        help="comma-separated names to hold out; empty for an in-sample fit",
    )
    p.add_argument("--out")
    p.set_defaults(func=run_estimate_n)

    p = sub.add_parser("fit-n", help="fit the exponent of a stress-strain curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--e", required=True, type=float, help="Young's modulus, MPa")
    p.add_argument("--out")
    p.set_defaults(func=run_fit_n)

    p = sub.add_parser("simulate", help="step response of one actuator")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--linear", action="store_true", help="linear spring baseline")
    p.add_argument("--figure", help="also render the trajectory to this image file")
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("compare", help="score both models against measured traces")
    p.add_argument("--config", required=True)
    p.add_argument("--traces", required=True, help="directory of time_s,angle_deg CSVs")
    p.add_argument("--out", required=True)
    p.add_argument("--rate-hz", type=float, default=100.0)
    p.add_argument("--setpoint", type=float, help="target angle in degrees, recorded only")
    p.add_argument("--figure", help="also render the overlay to this image file")
    p.set_defaults(func=run_compare)

    p = sub.add_parser("materials", help="dump the builtin material table")
    p.add_argument("--out")
    p.set_defaults(func=run_materials)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
