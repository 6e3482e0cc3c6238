"""Stress-strain laws for soft materials and the builtin material table.

Stresses are in MPa, viscosities in cps. Strain is engineering strain
(L - L0) / L0 and must be non-negative; compression is not modelled.

The parameter-varying law switches from Hooke to Ludwick once the strain
passes the threshold ``eta``. Unless ``eta == 1`` the stress jumps at the
switch, from ``E * eta`` to ``E * eta**n``; that jump is kept as is.
"""

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .errors import DomainError, UnknownMaterialError, ValidationError

CSV_FIELDS = (
    "name",
    "youngs_modulus_mpa",
    "mixed_viscosity_cps",
    "tensile_strength_mpa",
    "fractional_power",
    "eta",
)


@dataclass(frozen=True)
class MaterialRecord:
    name: str
    youngs_modulus: float
    mixed_viscosity: float
    tensile_strength: float
    fractional_power: Optional[float] = None
    eta: Optional[float] = None

    def __post_init__(self):
        for field in ("youngs_modulus", "mixed_viscosity", "tensile_strength"):
            value = getattr(self, field)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{self.name}: {field} must be > 0, got {value}")
        if self.fractional_power is not None and not self.fractional_power > 0:
            raise DomainError(f"{self.name}: fractional_power must be > 0")
        if self.eta is not None and not self.eta > 0:
            raise DomainError(f"{self.name}: eta must be > 0")

    def require_power(self):
        """Return the fractional power, raising if the record has none."""
        if self.fractional_power is None:
            raise ValidationError(f"{self.name}: no fractional power known")
        return self.fractional_power


@dataclass(frozen=True)
class StrainSample:
    strain: float
    stress: float

    def __post_init__(self):
        if self.strain < 0 or self.stress < 0:
            raise DomainError(
                f"strain and stress must be >= 0, got ({self.strain}, {self.stress})"
            )


def _check_strain(strain):
    if strain < 0:
        raise DomainError(f"strain must be >= 0, got {strain}")


def hooke_stress(E, strain):
    """Linear law ``E * strain``."""
    if not E > 0:
        raise DomainError(f"E must be > 0, got {E}")
    _check_strain(strain)
    return E * strain


def ludwick_stress(E, n, strain):
    """Power law ``E * strain**n``."""
    if not E > 0:
        raise DomainError(f"E must be > 0, got {E}")
    if not n > 0:
        raise DomainError(f"n must be > 0, got {n}")
    _check_strain(strain)
    return E * strain**n


def effective_power(strain, eta, n):
    """Exponent of the parameter-varying law: 1 up to and including eta, n above."""
    if not eta > 0:
        raise DomainError(f"eta must be > 0, got {eta}")
    if not n > 0:
        raise DomainError(f"n must be > 0, got {n}")
    _check_strain(strain)
    return 1.0 if strain <= eta else n


def varying_stress(E, n, eta, strain):
    """Hooke below the threshold, Ludwick above it.

    ``eta=None`` means the material never switches and the pure power law
    applies at every strain.
    """
    if eta is None or strain > eta:
        return ludwick_stress(E, n, strain)
    effective_power(strain, eta, n)  # validates eta and n
    return hooke_stress(E, strain)


def _optional_float(text):
    text = text.strip()
    return float(text) if text else None


def parse_materials_csv(text, source="<string>"):
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_FIELDS:
        raise ValidationError(
            f"{source}: expected header {','.join(CSV_FIELDS)}, got {reader.fieldnames}"
        )
    records = []
    for lineno, row in enumerate(reader, start=2):
        try:
            records.append(
                MaterialRecord(
                    name=row["name"].strip(),
                    youngs_modulus=float(row["youngs_modulus_mpa"]),
                    mixed_viscosity=float(row["mixed_viscosity_cps"]),
                    tensile_strength=float(row["tensile_strength_mpa"]),
                    fractional_power=_optional_float(row["fractional_power"] or ""),
                    eta=_optional_float(row["eta"] or ""),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{source}, line {lineno}: {exc}") from exc
    return records


def load_materials(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_materials_csv(fh.read(), source=str(path))


def builtin_materials():
    """The ten silicones shipped with the package, in table order."""
    text = resources.files("ludwick").joinpath("data/materials.csv").read_text("utf-8")
    return parse_materials_csv(text, source="builtin materials")


def materials_to_csv(records):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow(
            [
                r.name,
                repr(r.youngs_modulus),
                repr(r.mixed_viscosity),
                repr(r.tensile_strength),
                "" if r.fractional_power is None else repr(r.fractional_power),
                "" if r.eta is None else repr(r.eta),
            ]
        )
    return out.getvalue()


def _normalize(name):
    return " ".join(name.split()).casefold()


def find_material(records, name):
    """Look up a record by name, ignoring case and repeated whitespace."""
    key = _normalize(name)
    for r in records:
        if _normalize(r.name) == key:
            return r
    raise UnknownMaterialError(name)
