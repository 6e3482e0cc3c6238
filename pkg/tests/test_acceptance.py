"""Exit criteria for the build, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import math
import time

import numpy as np
import pytest

from oracles import bisect_root, linear_step_analytic
from ludwick.dynamics import (
    ActuatorParams,
    linear_step_response,
    restoring_torque,
    steady_state_angle,
    step_response,
    torque_function,
)
from ludwick.harness import MeasuredTrace, compare
from ludwick.materials import StrainSample, builtin_materials, find_material
from ludwick.regress import DEFAULT_HOLDOUT, fit_model, fit_n_from_curve, predict_n, split_by_name

PUBLISHED_ESTIMATES = {"Dragon Skin 20": 2.365, "Dragon Skin FX-Pro": 1.727}


def params(M, C, K, n, **kw):
    return ActuatorParams(mass=M, damping=C, spring_k=K, power=n, **kw)


def test_c1_table_ii_reproduction(criterion):
    start = time.perf_counter()
    training, holdout = split_by_name(builtin_materials(), DEFAULT_HOLDOUT)
    model = fit_model(training)
    predicted = {m.name: predict_n(model, m) for m in holdout}
    elapsed = time.perf_counter() - start
    errors = {k: abs(predicted[k] - v) / v for k, v in PUBLISHED_ESTIMATES.items()}
    ok = all(e < 0.10 for e in errors.values()) and elapsed < 1.0
    detail = ", ".join(
        f"{k} {predicted[k]:.4f} vs {PUBLISHED_ESTIMATES[k]} ({100 * errors[k]:.2f}%)"
        for k in PUBLISHED_ESTIMATES
    )
    criterion("C1 Table II reproduction (<10%)", ok, f"{detail}; {elapsed * 1e3:.1f} ms")


LINEAR_CASES = {
    "overdamped": (1.0, 3.0, 2.0, 1.0),
    "critically damped": (1.0, 2.0, 1.0, 1.0),
    "underdamped": (1.0, 0.4, 4.0, 4.0),
}


@pytest.mark.parametrize("case", LINEAR_CASES)
def test_c2_linear_limit(criterion, case):
    M, C, K, F = LINEAR_CASES[case]
    start = time.perf_counter()
    traj = step_response(params(M, C, K, 1.0), F, 10.0, 1e-3)
    elapsed = time.perf_counter() - start
    err = float(np.max(np.abs(traj.angles - linear_step_analytic(M, C, K, F, traj.times))))
    criterion(
        f"C2 linear limit, {case} (<1e-4 rad)",
        err < 1e-4 and elapsed < 1.0,
        f"max error {err:.2e} rad in {elapsed * 1e3:.0f} ms",
    )


def test_c3_steady_state_oracle(criterion):
    rng = np.random.default_rng(20231014)
    worst = 0.0
    for _ in range(20):
        M = rng.uniform(0.2, 2.0)
        K = rng.uniform(0.2, 3.0)
        n = rng.uniform(1.0, 3.0)
        target = rng.uniform(0.1, 0.95 * math.pi)
        F = K * target**n
        stiffness = K * n * target ** (n - 1)
        C = rng.uniform(0.5, 3.0) * 2.0 * math.sqrt(M * stiffness)
        p = params(M, C, K, n)
        # slowest mode of the system linearized about the rest angle
        disc = C * C - 4 * M * stiffness
        rate = (C - math.sqrt(disc)) / (2 * M) if disc > 0 else C / (2 * M)
        traj = step_response(p, F, 25.0 / rate, 1e-2)
        root = bisect_root(lambda th: K * th**n - F, 0.0, math.pi)
        assert (F / K) ** (1 / n) < math.pi
        worst = max(worst, abs(traj.angles[-1] - root), abs(steady_state_angle(p, F) - root))
    criterion("C3 steady state vs bisection, 20 sets (<1e-4 rad)", worst < 1e-4,
              f"worst deviation {worst:.2e} rad")


def test_c4_clamp_invariant(criterion):
    cases = [(1.0, 0.5, 1.0, 2.0, 12.0), (0.2, 0.05, 0.5, 2.365, 10.0), (1.0, 2.0, 1.0, 1.0, 4.0),
             (0.5, 0.0, 0.3, 1.538, 2.0)]
    ok, worst, vels = True, -math.inf, []
    for M, C, K, n, F in cases:
        assert (F / K) ** (1 / n) > math.pi
        traj = step_response(params(M, C, K, n), F, 10.0, 1e-3)
        worst = max(worst, float(traj.angles.max()) - math.pi)
        vels.append(float(traj.velocities[-1]))
        ok &= bool(np.all(traj.angles <= math.pi + 1e-12)) and traj.velocities[-1] == 0.0
    criterion("C4 clamp at pi", ok,
              f"max overshoot {worst:.1e} rad, terminal velocities {vels}")


def test_c5_convergence_order(criterion):
    M, C, K, F = 1.0, 0.4, 4.0, 4.0
    p = params(M, C, K, 1.0)
    errs = []
    for dt in (0.1, 0.05, 0.025):
        traj = step_response(p, F, 10.0, dt)
        errs.append(float(np.max(np.abs(traj.angles - linear_step_analytic(M, C, K, F, traj.times)))))
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    criterion("C5 RK4 order (ratio in [8, 32])", all(8 <= r <= 32 for r in ratios),
              "ratios " + ", ".join(f"{r:.2f}" for r in ratios))


def test_c6_curve_fit_round_trip(criterion):
    strains = np.linspace(0.1, 3.0, 30)
    E = 0.34
    exact_err = 0.0
    noisy_err = 0.0
    rng = np.random.default_rng(6)
    for n in (1.5, 2.0, 2.5):
        clean = [StrainSample(float(e), E * float(e) ** n) for e in strains]
        exact_err = max(exact_err, abs(fit_n_from_curve(clean, E) - n) / n)
        noise = rng.uniform(-0.01, 0.01, strains.size)
        noisy = [StrainSample(s.strain, s.stress * (1 + d)) for s, d in zip(clean, noise)]
        noisy_err = max(noisy_err, abs(fit_n_from_curve(noisy, E) - n))
    criterion("C6 curve fit round trip", exact_err <= 1e-10 and noisy_err < 0.05,
              f"noise-free rel error {exact_err:.1e}, +-1% noise abs error {noisy_err:.4f}")


def test_c7_parameter_varying_branch(criterion):
    grid = np.linspace(0.0, math.pi, 2001)
    checked, bad = 0, []
    for m in builtin_materials():
        if m.eta is None:
            continue
        p = params(0.05, 0.3, 0.7, m.fractional_power, eta=m.eta)
        spring = torque_function(p)
        for th in map(float, grid):
            expected = 0.7 * th if th <= m.eta else 0.7 * th**m.fractional_power
            if spring(th) != expected or restoring_torque(p, th) != expected:
                bad.append((m.name, th))
        checked += 1
    criterion("C7 Hooke below eta, Ludwick above", checked == 3 and not bad,
              f"{checked} materials x {grid.size} angles, {len(bad)} mismatches")


ACTUATOR = params(0.05, 0.4, 0.6, 2.365)


def sampled(traj, every=10):
    return MeasuredTrace(traj.times[::every], np.degrees(traj.angles[::every]))


def test_c8_harness_self_consistency(criterion):
    F = 1.2
    traces = [sampled(step_response(ACTUATOR, F, 3.0, 1e-3))] * 7
    report = compare(ACTUATOR, F, traces)
    lin = compare(ACTUATOR, F, [sampled(linear_step_response(ACTUATOR, F, 3.0, 1e-3))])
    ok = report.rms_nonlinear < 1e-6 and report.rms_linear > report.rms_nonlinear and lin.rms_linear < 1e-6
    criterion("C8 harness self-consistency", ok,
              f"rms_nonlinear {report.rms_nonlinear:.1e} deg, rms_linear {report.rms_linear:.2f} deg")


@pytest.mark.parametrize("material", ["Dragon Skin 20", "Dragon Skin FX-Pro"])
def test_c9_nonlinear_beats_linear_at_90_degrees(criterion, material):
    training, _ = split_by_name(builtin_materials(), DEFAULT_HOLDOUT)
    n = predict_n(fit_model(training), find_material(builtin_materials(), material))
    p = params(0.05, 0.4, 0.6, n)
    F = 0.6 * (math.pi / 2) ** n
    truth = sampled(step_response(p, F, 4.0, 1e-3))
    rng = np.random.default_rng(90)
    traces = [MeasuredTrace(truth.times, truth.angles + rng.normal(0, 1.0, truth.angles.size))
              for _ in range(7)]
    report = compare(p, F, traces, setpoint=90.0)
    criterion(f"C9 synthetic 90 deg setpoint, {material} (nonlinear < linear)",
              report.rms_nonlinear < report.rms_linear,
              f"rms_nonlinear {report.rms_nonlinear:.2f} deg, rms_linear {report.rms_linear:.2f} deg")
