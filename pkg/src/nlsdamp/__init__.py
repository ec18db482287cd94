"""Pseudospectral laboratory for the damped L2-critical focusing Schrodinger equation."""

from .diagnostics import (
    BalanceReport,
    DiagnosticsRow,
    TrajectoryRecorder,
    balance_report,
    compute_row,
    concentration_mass,
    energy_balance_residual,
    gn_ratio,
    gradient_window_rule,
    mass_balance_residual,
    mass_envelope_check,
    momentum_balance_residual,
    sharp_gn_constant,
)
from .evolution import BlowupReport, EvolutionState, SimConfig, StopReason, evolve, strang_step
from .ground_state import (
    ConvergenceError,
    GroundState,
    closed_form_q_1d,
    pohozaev_residuals,
    solve_ground_state,
)
from .scenarios import (
    DampingSpec,
    InitialSpec,
    ScenarioConfig,
    TheoremCheckReport,
    build_damping,
    build_initial,
    catalog,
    ensure_ground_state,
    load_scenario_config,
    run_scenario,
    run_suite,
)
from .spectral import (
    ComplexField,
    ConfigurationError,
    DampingProfile,
    FieldNorms,
    Grid,
    SamplingError,
    norms,
    sample,
    spectral_multiply,
)

__version__ = "0.1.0"

__all__ = [
    "BalanceReport",
    "BlowupReport",
    "ComplexField",
    "ConfigurationError",
    "ConvergenceError",
    "DampingProfile",
    "DampingSpec",
    "DiagnosticsRow",
    "EvolutionState",
    "FieldNorms",
    "GroundState",
    "Grid",
    "InitialSpec",
    "SamplingError",
    "ScenarioConfig",
    "SimConfig",
    "StopReason",
    "TheoremCheckReport",
    "TrajectoryRecorder",
    "balance_report",
    "build_damping",
    "build_initial",
    "catalog",
    "closed_form_q_1d",
    "compute_row",
    "concentration_mass",
    "energy_balance_residual",
    "ensure_ground_state",
    "evolve",
    "gn_ratio",
    "gradient_window_rule",
    "load_scenario_config",
    "mass_balance_residual",
    "mass_envelope_check",
    "momentum_balance_residual",
    "norms",
    "pohozaev_residuals",
    "run_scenario",
    "run_suite",
    "sample",
    "sharp_gn_constant",
    "solve_ground_state",
    "spectral_multiply",
    "strang_step",
    "__version__",
]
