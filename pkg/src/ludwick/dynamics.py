"""Bending dynamics of a soft pneumatic actuator.

The actuator is treated as a cantilever with a power-law spring::

    M * theta'' + C * theta' + K * theta**p(theta) = F

where ``p(theta)`` is 1 below the threshold ``eta`` and ``n`` above it,
shifted by the uncertainty ``delta_n``. Strain is approximated by the
bending angle itself, so ``eta`` is compared directly against ``theta`` in
radians.

The angle is confined to ``[0, pi]``. When a step carries it past ``pi`` (tip
meets base) the state is projected to ``(pi, 0)`` and held there while the
applied force still overcomes the spring, ``F >= K * pi**p``; once it no
longer does, integration resumes from rest at ``pi``. Steps that end below
zero are projected to ``(0, 0)`` in the same way.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import BracketError, DomainError, InstabilityError, ValidationError
from .materials import effective_power

DEFAULT_DT = 1e-3

# Velocities beyond this mean the step size is too large for the stiffness.
OMEGA_LIMIT = 1e6

MPA_TO_PA = 1e6


def spring_constant(E, I, L0):
    """Bending stiffness ``2 E I / L0**2`` of the beam, with E given in MPa."""
    if not (E > 0 and I > 0 and L0 > 0):
        raise DomainError(f"E, I and L0 must all be > 0, got ({E}, {I}, {L0})")
    return 2.0 * E * MPA_TO_PA * I / L0**2


@dataclass(frozen=True)
class ActuatorParams:
    """Physical parameters of one actuator.

    Give either ``spring_k`` directly or the beam triple
    ``youngs_modulus`` (MPa), ``second_moment`` (m^4) and ``rest_length`` (m),
    from which ``spring_k`` is derived.
    """

    mass: float
    damping: float
    power: float
    spring_k: Optional[float] = None
    youngs_modulus: Optional[float] = None
    second_moment: Optional[float] = None
    rest_length: Optional[float] = None
    eta: Optional[float] = None
    delta_n: float = 0.0

    def __post_init__(self):
        if self.spring_k is None:
            beam = (self.youngs_modulus, self.second_moment, self.rest_length)
            if any(v is None for v in beam):
                raise ValidationError(
                    "spring_k or all of youngs_modulus, second_moment, rest_length required"
                )
            object.__setattr__(self, "spring_k", spring_constant(*beam))
        if not self.mass > 0:
            raise ValidationError(f"mass must be > 0, got {self.mass}")
        if not self.damping >= 0:
            raise ValidationError(f"damping must be >= 0, got {self.damping}")
        if not self.spring_k > 0:
            raise ValidationError(f"spring_k must be > 0, got {self.spring_k}")
        if not self.power > 0:
            raise ValidationError(f"power must be > 0, got {self.power}")
        if self.eta is not None and not self.eta > 0:
            raise ValidationError(f"eta must be > 0, got {self.eta}")
        lowest = min(self.power, 1.0) if self.eta is not None else self.power
        if not lowest + self.delta_n > 0:
            raise ValidationError(
                f"exponent {lowest} + delta_n {self.delta_n} must stay positive"
            )

    def exponent(self, theta):
        """Spring exponent at a given angle, including ``delta_n``."""
        if self.eta is None:
            return self.power + self.delta_n
        return effective_power(theta, self.eta, self.power) + self.delta_n

    def linearized(self):
        """Same actuator with a plain linear spring."""
        return replace(self, power=1.0, eta=None, delta_n=0.0)


@dataclass(frozen=True)
class BendingGeometry:
    radius: float
    rest_length: float
    angle: float

    @property
    def arc_length(self):
        return self.radius * self.angle


def strain_from_angle(geometry, exact=False):
    """Axial strain of the bent actuator.

    With ``exact=True`` this is ``(R / L0) * theta - 1``. Otherwise the
    strain is taken to be the angle, which is what the simulator uses.
    """
    g = geometry
    if not (g.radius > 0 and g.rest_length > 0 and g.angle >= 0):
        raise DomainError("radius and rest_length must be > 0 and angle >= 0")
    if exact:
        return g.radius / g.rest_length * g.angle - 1.0
    return g.angle


def restoring_torque(params, theta):
    if theta < 0:
        raise DomainError(f"theta must be >= 0, got {theta}")
    return params.spring_k * theta ** params.exponent(theta)


def torque_function(params):
    """Spring torque as a fast scalar closure, the form the integrator calls.

    Agrees with ``restoring_torque`` for ``theta >= 0`` and is extended as an
    odd function below zero, where Runge-Kutta stages can briefly land.
    """
    K = params.spring_k
    p_hi = params.power + params.delta_n
    if params.eta is None:
        eta, p_lo = -math.inf, p_hi
    else:
        eta, p_lo = params.eta, 1.0 + params.delta_n

    def spring(th):
        if th < 0:
            a = -th
            return -K * a ** (p_lo if a <= eta else p_hi)
        return K * th ** (p_lo if th <= eta else p_hi)

    return spring


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    angles: np.ndarray
    velocities: np.ndarray
    input_force: float

    def __post_init__(self):
        n = len(self.times)
        if n < 2 or len(self.angles) != n or len(self.velocities) != n:
            raise ValidationError("trajectory series must share a length >= 2")


def _check_run(t_end, dt, theta0):
    if not t_end > 0:
        raise ValidationError(f"t_end must be > 0, got {t_end}")
    if not dt > 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    if not 0 <= theta0 <= math.pi:
        raise ValidationError(f"theta0 must lie in [0, pi], got {theta0}")


def step_response(params, force, t_end, dt=DEFAULT_DT, theta0=0.0, omega0=0.0, t0=0.0):
    """Integrate the actuator from ``(theta0, omega0)`` under a constant force.

    Classical fixed-step RK4. The run has ``ceil(t_end / dt)`` steps, so the
    last sample lands within one step of ``t0 + t_end``.

    Raises
    ------
    InstabilityError
        The state overflowed; ``dt`` is too large for the parameters.
    """
    _check_run(t_end, dt, theta0)
    steps = max(1, math.ceil(t_end / dt - 1e-9))

    M, C, F = params.mass, params.damping, float(force)
    spring = torque_function(params)
    pi = math.pi
    clamp_torque = spring(pi)

    def accel(th, om):
        return (F - C * om - spring(th)) / M

    times = t0 + dt * np.arange(steps + 1)
    angles = np.empty(steps + 1)
    velocities = np.empty(steps + 1)
    th, om = float(theta0), float(omega0)
    angles[0], velocities[0] = th, om
    half = 0.5 * dt
    clamped = False

    for i in range(1, steps + 1):
        if clamped and F >= clamp_torque:
            angles[i], velocities[i] = pi, 0.0
            continue
        clamped = False
        try:
            k1t, k1w = om, accel(th, om)
            k2t, k2w = om + half * k1w, accel(th + half * k1t, om + half * k1w)
            k3t, k3w = om + half * k2w, accel(th + half * k2t, om + half * k2w)
            k4t, k4w = om + dt * k3w, accel(th + dt * k3t, om + dt * k3w)
        except (OverflowError, ZeroDivisionError) as exc:
            raise InstabilityError(f"state overflow at t={times[i]:.6g} s; reduce dt") from exc
        th = th + dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        om = om + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        if not (math.isfinite(th) and math.isfinite(om)) or abs(om) > OMEGA_LIMIT:
            raise InstabilityError(f"state overflow at t={times[i]:.6g} s; reduce dt")
        if th > pi:
            th, om, clamped = pi, 0.0, True
        elif th < 0.0:
            th, om = 0.0, 0.0
        angles[i], velocities[i] = th, om

    return Trajectory(times, angles, velocities, F)


def linear_step_response(params, force, t_end, dt=DEFAULT_DT, theta0=0.0, omega0=0.0, t0=0.0):
    """Baseline with a linear spring: exponent 1, no switching, no delta_n."""
    return step_response(params.linearized(), force, t_end, dt, theta0, omega0, t0)


def _bisect(g, lo, hi, tol):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def steady_state_angle(params, force, tol=1e-10):
    """Rest angle reached from below under a constant force, capped at pi.

    The spring torque is increasing on each side of ``eta`` but may jump
    there, so the branches are searched in order and the smallest root is
    returned. When the torque jumps over ``F`` at the switch there is no
    root and the switching angle itself is returned.
    """
    if force < 0:
        raise DomainError(f"force must be >= 0, got {force}")
    if force == 0:
        return 0.0
    K = params.spring_k

    def g(p):
        return lambda th: K * th**p - force

    p_hi = params.power + params.delta_n
    lo = 0.0
    eta = params.eta
    if eta is not None and eta < math.pi:
        below = g(1.0 + params.delta_n)
        if below(eta) >= 0:
            return _bisect(below, 0.0, eta, tol)
        if g(p_hi)(eta) >= 0:
            return eta
        lo = eta
    elif eta is not None:
        p_hi = 1.0 + params.delta_n
    upper = g(p_hi)
    if upper(math.pi) <= 0:
        return math.pi
    return _bisect(upper, lo, math.pi, tol)


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_minimize(f, a, b, tol=1e-6):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), evaluations)``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    x = 0.5 * (a + b)
    # the endpoints are candidates too; the interior probes never reach them
    best = min(((f(x), x), (f(a), a), (f(b), b)))
    return best[1], best[0], evals + 3


@dataclass(frozen=True)
class DampingFit:
    damping: float
    rms: float  # rad, residual at the optimum
    evaluations: int


def fit_damping(params, measured, force, c_max=50.0, tol=1e-6, dt=None, omega0=0.0):
    """Damping coefficient that best reproduces a measured step response.

    Golden-section search of the RMS angle error over ``[0, c_max]``. Every
    parameter except ``damping`` is taken from ``params``. The simulation
    starts at the first measured sample; ``dt`` defaults to the smaller of
    ``DEFAULT_DT`` and a fifth of the shortest sampling interval.

    Raises
    ------
    BracketError
        The optimum sits at ``c_max``.
    """
    times = np.asarray(measured.times, dtype=float)
    target = np.asarray(measured.angles, dtype=float)
    if len(times) < 10:
        raise ValidationError(f"need at least 10 measured samples, got {len(times)}")
    if not c_max > 0:
        raise ValidationError(f"c_max must be > 0, got {c_max}")
    if dt is None:
        dt = min(DEFAULT_DT, float(np.min(np.diff(times))) / 5.0)
    span = float(times[-1] - times[0])
    theta0 = float(target[0])

    def cost(c):
        sim = step_response(
            replace(params, damping=c), force, span, dt, theta0, omega0, times[0]
        )
        resampled = np.interp(times, sim.times, sim.angles)
        return float(np.sqrt(np.mean((resampled - target) ** 2)))

    c, rms, evals = golden_section_minimize(cost, 0.0, c_max, tol)
    if c >= c_max - 10 * tol:
        raise BracketError(
            f"damping optimum at the bracket edge c_max={c_max:g}; widen the bracket"
        )
    return DampingFit(c, rms, evals)
