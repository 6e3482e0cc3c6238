"""Estimate the Ludwick exponent of a material.

Two routes are provided:

* ``fit_model`` / ``predict_n`` regress the exponent on three datasheet
  properties, Young's modulus, mixed viscosity and tensile strength. The
  predictor has no intercept:

      n = E * x1 + sqrt(MV / 50000) * x2 + sqrt(TS / 10) * x3

* ``fit_n_from_curve`` recovers the exponent from measured stress-strain
  samples when E is known, by a log-log slope through the origin.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError, SingularFitError, ValidationError
from .materials import StrainSample, find_material

MV_NORM = 50000.0
TS_NORM = 10.0

# Condition numbers of A^T A above this are treated as singular.
MAX_CONDITION = 1e12

# Held-out materials of the reference split.
DEFAULT_HOLDOUT = ("Dragon Skin FX-Pro", "Dragon Skin 20")


@dataclass(frozen=True)
class DesignRow:
    e_term: float
    mv_term: float
    ts_term: float

    def as_tuple(self):
        return (self.e_term, self.mv_term, self.ts_term)


@dataclass(frozen=True)
class PowerLawModel:
    x1: float
    x2: float
    x3: float
    mv_norm: float = MV_NORM
    ts_norm: float = TS_NORM

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x1, self.x2, self.x3)):
            raise ValidationError("model coefficients must be finite")
        if self.mv_norm != MV_NORM or self.ts_norm != TS_NORM:
            raise ValidationError(
                f"normalizations are fixed at mv_norm={MV_NORM:g}, ts_norm={TS_NORM:g}"
            )

    @property
    def coefficients(self):
        return np.array([self.x1, self.x2, self.x3])

    def to_text(self):
        return (
            f"x1={self.x1!r} x2={self.x2!r} x3={self.x3!r} "
            f"mv_norm={self.mv_norm:g} ts_norm={self.ts_norm:g}"
        )

    @classmethod
    def from_text(cls, text):
        fields = {}
        for token in text.split():
            key, sep, value = token.partition("=")
            if not sep:
                raise ValidationError(f"malformed model token {token!r}")
            fields[key] = float(value)
        missing = {"x1", "x2", "x3"} - fields.keys()
        if missing:
            raise ValidationError(f"model text lacks {sorted(missing)}")
        return cls(**fields)


def design_row(material):
    """Predictor triple for one material: E unscaled, MV and TS normalized and square-rooted."""
    E, mv, ts = material.youngs_modulus, material.mixed_viscosity, material.tensile_strength
    if not (E > 0 and mv > 0 and ts > 0):
        raise DomainError(f"{material.name}: material properties must be positive")
    return DesignRow(E, math.sqrt(mv / MV_NORM), math.sqrt(ts / TS_NORM))


def design_matrix(materials):
    return np.array([design_row(m).as_tuple() for m in materials], dtype=float)


def fit_model(training):
    """Least-squares fit of the three coefficients through the normal equations.

    Parameters
    ----------
    training : sequence of MaterialRecord
        At least three records, each with a known fractional power.

    Raises
    ------
    InsufficientDataError
        Fewer than three records.
    SingularFitError
        ``A^T A`` has condition number above ``MAX_CONDITION``.
    """
    training = list(training)
    if len(training) < 3:
        raise InsufficientDataError(
            f"need at least 3 training materials, got {len(training)}"
        )
    A = design_matrix(training)
    y = np.array([m.require_power() for m in training], dtype=float)
    AtA = A.T @ A
    Aty = A.T @ y
    cond = np.linalg.cond(AtA)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularFitError(f"normal matrix is singular (condition {cond:.3g})")
    x = np.linalg.solve(AtA, Aty)
    return PowerLawModel(float(x[0]), float(x[1]), float(x[2]))


def predict_n(model, material):
    row = design_row(material)
    return row.e_term * model.x1 + row.mv_term * model.x2 + row.ts_term * model.x3


def split_by_name(materials, holdout_names):
    """Partition records into (training, holdout); holdout keeps the given order."""
    holdout = [find_material(materials, name) for name in holdout_names]
    held = {id(m) for m in holdout}
    training = [m for m in materials if id(m) not in held]
    return training, holdout


def fit_n_from_curve(samples, E):
    """Exponent of ``sigma = E * eps**n`` from stress-strain samples, E fixed.

    Minimizes ``sum((ln sigma - ln E - n ln eps)**2)`` over samples with
    positive strain and stress, which gives
    ``n = sum(ln eps * (ln sigma - ln E)) / sum(ln eps**2)``.
    Samples at unit strain carry no information about n and drop out of
    the slope on their own.
    """
    if not E > 0:
        raise DomainError(f"E must be > 0, got {E}")
    usable = [s for s in samples if s.strain > 0 and s.stress > 0]
    if len(usable) < 2:
        raise InsufficientDataError(
            f"need at least 2 samples with positive strain and stress, got {len(usable)}"
        )
    log_eps = np.log([s.strain for s in usable])
    log_ratio = np.log([s.stress for s in usable]) - math.log(E)
    denom = float(np.dot(log_eps, log_eps))
    if denom == 0.0:
        raise InsufficientDataError("all strains equal 1; exponent is undetermined")
    n = float(np.dot(log_eps, log_ratio)) / denom
    if not n > 0:
        raise ValidationError(f"fitted exponent {n:.6g} is not positive")
    return n


def read_curve_csv(path):
    """Read ``strain,stress_mpa`` samples."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
            "strain",
            "stress_mpa",
        ]:
            raise ValidationError(f"{path}: expected header strain,stress_mpa")
        samples = []
        for lineno, row in enumerate(reader, start=2):
            try:
                samples.append(StrainSample(float(row["strain"]), float(row["stress_mpa"])))
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"{path}, line {lineno}: {exc}") from exc
    return samples
