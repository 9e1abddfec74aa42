"""Fourier pseudospectral solver for the 2D Serre-Green-Naghdi equations.

The water column is described by its depth ``h`` and a velocity field
``v = grad(phi)`` that stays a gradient for all time, so the state carries
no spurious vorticity.  Each right-hand side evaluation solves one linear
elliptic problem for an auxiliary scalar and everything else is pointwise
arithmetic plus FFTs on a periodic rectangle.
"""

from .analysis import (
    CrestLocation,
    RadialFit,
    diff_line_wave,
    fit_radial_collapse,
    fit_speed,
    infimum_series,
    locate_crest,
    nelder_mead,
    polar_velocity,
    radial_collapse_residuals,
)
from .dynamics import (
    Diagnostics,
    PhysicalParams,
    State,
    StepStats,
    compute_rhs,
    conserved_quantities,
    curl_deviation,
    recover_velocity,
    rk4_step,
)
from .elliptic import GmresConfig, GmresStats, SigmaOperator, solve_sigma
from .errors import (
    CavitationError,
    ConfigurationError,
    FitError,
    GmresError,
    ParameterError,
    SnapshotFormatError,
)
from .harness import (
    ExperimentConfig,
    RunSummary,
    export_diagnostics,
    initial_state,
    load_config,
    preset_config,
    run_experiment,
)
from .initdata import (
    SolitaryWaveParams,
    crossing_waves,
    gaussian_hump,
    gaussian_perturbed_wave,
    line_wave_2d,
    rest_state,
    solitary_wave_profile,
)
from .snapshot import read_snapshot, write_snapshot
from .spectral import Grid, derivative, integrate, krasny_filter, make_grid

__version__ = "0.1.0"

__all__ = [
    "CavitationError",
    "ConfigurationError",
    "CrestLocation",
    "Diagnostics",
    "ExperimentConfig",
    "FitError",
    "GmresConfig",
    "GmresError",
    "GmresStats",
    "Grid",
    "ParameterError",
    "PhysicalParams",
    "RadialFit",
    "RunSummary",
    "SigmaOperator",
    "SnapshotFormatError",
    "SolitaryWaveParams",
    "State",
    "StepStats",
    "compute_rhs",
    "conserved_quantities",
    "crossing_waves",
    "curl_deviation",
    "derivative",
    "diff_line_wave",
    "export_diagnostics",
    "fit_radial_collapse",
    "fit_speed",
    "gaussian_hump",
    "gaussian_perturbed_wave",
    "infimum_series",
    "initial_state",
    "integrate",
    "krasny_filter",
    "line_wave_2d",
    "load_config",
    "locate_crest",
    "make_grid",
    "nelder_mead",
    "polar_velocity",
    "preset_config",
    "radial_collapse_residuals",
    "read_snapshot",
    "recover_velocity",
    "rest_state",
    "rk4_step",
    "run_experiment",
    "solitary_wave_profile",
    "solve_sigma",
    "write_snapshot",
]
