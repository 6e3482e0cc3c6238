"""Flat ``key=value`` actuator configuration files.

Tokens are whitespace separated and may be spread over several lines;
``#`` starts a comment and values containing spaces may be quoted::

    M=0.02 C=0.05 K=0.0068
    n=2.365 F=0.03 t_end=5 dt=1e-3
    # or: E_mpa=0.34 I_m4=1e-10 L0_m=0.1 estimate_n=true material="Dragon Skin 20"

Angles are given in degrees here and converted to radians on load.
"""

import math
import shlex
from dataclasses import dataclass

from .dynamics import DEFAULT_DT, ActuatorParams
from .errors import ValidationError
from .materials import MaterialRecord, builtin_materials, find_material
from .regress import DEFAULT_HOLDOUT, fit_model, predict_n, split_by_name

KNOWN_KEYS = {
    "M", "C", "K", "E_mpa", "I_m4", "L0_m",
    "n", "estimate_n", "material", "mv_cps", "ts_mpa",
    "eta", "delta_n", "F", "dt", "t_end", "theta0_deg", "omega0_degps",
}
BEAM_KEYS = ("E_mpa", "I_m4", "L0_m")
DEFAULT_T_END = 10.0


@dataclass(frozen=True)
class SimulationConfig:
    params: ActuatorParams
    force: float
    t_end: float
    dt: float
    theta0: float  # rad
    omega0: float  # rad/s

    def linearized(self):
        return SimulationConfig(
            self.params.linearized(), self.force, self.t_end, self.dt, self.theta0, self.omega0
        )

    def describe(self):
        """One-line record of every resolved parameter."""
        p = self.params
        fields = [
            ("M", p.mass),
            ("C", p.damping),
            ("K", p.spring_k),
            ("n", p.power),
            ("eta", p.eta),
            ("delta_n", p.delta_n),
            ("F", self.force),
            ("dt", self.dt),
            ("t_end", self.t_end),
            ("theta0_deg", math.degrees(self.theta0)),
            ("omega0_degps", math.degrees(self.omega0)),
        ]
        return " ".join(f"{k}={'none' if v is None else repr(float(v))}" for k, v in fields)


def parse_pairs(text, source="<config>"):
    try:
        tokens = shlex.split(text, comments=True)
    except ValueError as exc:
        raise ValidationError(f"{source}: {exc}") from exc
    pairs = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ValidationError(f"{source}: malformed entry {token!r}, expected key=value")
        if key not in KNOWN_KEYS:
            raise ValidationError(f"{source}: unknown key {key!r}")
        if key in pairs:
            raise ValidationError(f"{source}: key {key!r} given twice")
        pairs[key] = value
    return pairs


def _number(pairs, key, source, default=None):
    if key not in pairs:
        if default is None:
            raise ValidationError(f"{source}: missing required key {key!r}")
        return default
    try:
        value = float(pairs[key])
    except ValueError:
        raise ValidationError(f"{source}: {key}={pairs[key]!r} is not a number") from None
    if not math.isfinite(value):
        raise ValidationError(f"{source}: {key} must be finite")
    return value


def _flag(pairs, key, source):
    value = pairs.get(key, "false").strip().lower()
    if value in ("true", "yes", "1"):
        return True
    if value in ("false", "no", "0"):
        return False
    raise ValidationError(f"{source}: {key}={pairs[key]!r} is not a boolean")


def _estimate_power(pairs, source, material):
    """Predict n from datasheet properties using the default training split."""
    db = builtin_materials()
    if material is not None:
        target = MaterialRecord(
            material.name,
            _number(pairs, "E_mpa", source, material.youngs_modulus),
            _number(pairs, "mv_cps", source, material.mixed_viscosity),
            _number(pairs, "ts_mpa", source, material.tensile_strength),
        )
    else:
        for key in ("E_mpa", "mv_cps", "ts_mpa"):
            if key not in pairs:
                raise ValidationError(
                    f"{source}: estimate_n=true needs material= or key {key!r}"
                )
        target = MaterialRecord(
            "config",
            _number(pairs, "E_mpa", source),
            _number(pairs, "mv_cps", source),
            _number(pairs, "ts_mpa", source),
        )
    training, _ = split_by_name(db, DEFAULT_HOLDOUT)
    return predict_n(fit_model(training), target)


def build_config(pairs, source="<config>"):
    """Validate parsed pairs and resolve them into a ``SimulationConfig``."""
    mass = _number(pairs, "M", source)
    damping = _number(pairs, "C", source)

    has_k = "K" in pairs
    beam_given = [k for k in BEAM_KEYS if k in pairs]
    if has_k and len(beam_given) == 3:
        raise ValidationError(f"{source}: give either K or E_mpa/I_m4/L0_m, not both")
    if not has_k and len(beam_given) != 3:
        raise ValidationError(
            f"{source}: missing required key 'K' (or all of E_mpa, I_m4, L0_m)"
        )

    material = find_material(builtin_materials(), pairs["material"]) if "material" in pairs else None
    if _flag(pairs, "estimate_n", source):
        if "n" in pairs:
            raise ValidationError(f"{source}: give either n or estimate_n=true, not both")
        power = _estimate_power(pairs, source, material)
    else:
        power = _number(pairs, "n", source)

    eta = material.eta if material is not None else None
    if "eta" in pairs:
        eta = _number(pairs, "eta", source)

    spring = dict(spring_k=_number(pairs, "K", source)) if has_k else dict(
        youngs_modulus=_number(pairs, "E_mpa", source),
        second_moment=_number(pairs, "I_m4", source),
        rest_length=_number(pairs, "L0_m", source),
    )
    try:
        params = ActuatorParams(
            mass=mass,
            damping=damping,
            power=power,
            eta=eta,
            delta_n=_number(pairs, "delta_n", source, 0.0),
            **spring,
        )
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from exc

    cfg = SimulationConfig(
        params=params,
        force=_number(pairs, "F", source, 0.0),
        t_end=_number(pairs, "t_end", source, DEFAULT_T_END),
        dt=_number(pairs, "dt", source, DEFAULT_DT),
        theta0=math.radians(_number(pairs, "theta0_deg", source, 0.0)),
        omega0=math.radians(_number(pairs, "omega0_degps", source, 0.0)),
    )
    if not cfg.t_end > 0 or not cfg.dt > 0:
        raise ValidationError(f"{source}: t_end and dt must be > 0")
    if not 0 <= cfg.theta0 <= math.pi:
        raise ValidationError(f"{source}: theta0_deg must lie in [0, 180]")
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from exc
    return build_config(parse_pairs(text, str(path)), str(path))
