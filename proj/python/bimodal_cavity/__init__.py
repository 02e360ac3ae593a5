"""Bimodal-cavity detuning simulator.

Thin Python layer over the compiled core. Times are in microseconds and angular
frequencies in rad/us.
"""

from ._core import (
    ConvergenceError,
    ExperimentParams,
    FitError,
    FitKind,
    InvalidParams,
    IoError,
    Model,
    ProfileShape,
    SwitchShape,
    Timeline,
    angular_to_khz,
    default_intervals,
    fit_cosine,
    ideal_probability,
    khz_to_angular,
    run_full,
    run_probe,
    run_source,
    sample_probability,
    schmidt_coefficients,
    sweep_switch_time,
    u1_resonant,
    u2_resonant,
    u3_free,
    u4_probe_mode1,
    u_cross,
    u_minus,
    u_plus,
    unitarity_defect,
    unwrap_phase,
)


def params(model="stepwise", t_switch=0.0, omega_khz=47.0, delta_khz=128.3, lambda_coupling=None, **extra):
    """Build ExperimentParams from ordinary frequencies in kHz.

    ``lambda_coupling`` defaults to 4 * Omega, the value that makes the peak
    mode-mode coupling equal Omega for the raised-cosine switch.
    """
    p = ExperimentParams()
    p.model = Model.__members__[model] if isinstance(model, str) else model
    p.t_switch = t_switch
    p.omega = khz_to_angular(omega_khz)
    p.delta = khz_to_angular(delta_khz)
    p.lambda_coupling = 4.0 * p.omega if lambda_coupling is None else lambda_coupling
    for key, value in extra.items():
        setattr(p, key, value)
    p.validate()
    return p


__all__ = [name for name in dir() if not name.startswith("_")]
