"""Power-law material models and nonlinear bending dynamics for soft pneumatic actuators."""

from .dynamics import (
    ActuatorParams,
    BendingGeometry,
    DampingFit,
    Trajectory,
    fit_damping,
    linear_step_response,
    restoring_torque,
    spring_constant,
    steady_state_angle,
    step_response,
    strain_from_angle,
)
from .errors import LudwickError, NumericalError, ValidationError
from .harness import ComparisonReport, MeasuredTrace, compare, mean_trace, rms_error
from .materials import (
    MaterialRecord,
    StrainSample,
    builtin_materials,
    effective_power,
    hooke_stress,
    ludwick_stress,
    varying_stress,
)
from .regress import PowerLawModel, design_row, fit_model, fit_n_from_curve, predict_n

__version__ = "0.1.0"
