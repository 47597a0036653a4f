"""Isothermal slip of a quantum Fermi gas over a specular-diffuse wall.

The half-space kinetic problem with a velocity-dependent collision
frequency is reduced to a Fredholm equation for a spectral density and
solved as a power series in the wall accommodation coefficient.  The
package exposes the kernel moments, the series solver, velocity profiles
by inverse cosine transforms, the Fermi-statistics prefactor, and an
independent discrete-ordinates cross-check.
"""
from .errors import (
    DivergenceDetected,
    FitUnstable,
    InvalidAccommodation,
    KramersError,
    MaxItersExceeded,
    NonConvergence,
    OscillatoryNonConvergence,
    RegularityCheckFailed,
    TailTooLarge,
)
from .fermi import ReducedChemicalPotential, fermi_log_moment, kv_prefactor
from .kernels import (
    KernelValue,
    MAX_MOMENT_ORDER,
    QuadratureSpec,
    L_array,
    T_array,
    eval_J,
    eval_L,
    eval_S,
    eval_T,
    eval_phi0,
    moment_at_zero,
    phi0_array,
)
from .oracle import (
    OracleConfig,
    OracleSolution,
    bc_residual,
    extract_slip,
    solve_halfspace,
)
from .profiles import (
    ProfileRequest,
    VelocityProfile,
    assemble_density,
    cosine_transform,
    distribution_slice,
    kv_star,
    profile_H,
    uc_component,
    velocity_profile,
    wall_velocity,
)
from .series import (
    KGrid,
    SeriesCoefficients,
    SlipSolution,
    SpectralDensity,
    V0_EXACT,
    build_E0,
    default_grid,
    next_E,
    next_V,
    semi_infinite_integral,
    slip_coefficient,
    slip_velocity,
    solve_series,
    solve_slip,
    spectral_Phi,
)

__version__ = "1.0.0"

__all__ = [
    "DivergenceDetected", "FitUnstable", "InvalidAccommodation",
    "KramersError", "MaxItersExceeded", "NonConvergence",
    "OscillatoryNonConvergence", "RegularityCheckFailed", "TailTooLarge",
    "ReducedChemicalPotential", "fermi_log_moment", "kv_prefactor",
    "KernelValue", "MAX_MOMENT_ORDER", "QuadratureSpec", "L_array",
    "T_array", "eval_J", "eval_L", "eval_S", "eval_T", "eval_phi0",
    "moment_at_zero", "phi0_array",
    "OracleConfig", "OracleSolution", "bc_residual", "extract_slip",
    "solve_halfspace",
    "ProfileRequest", "VelocityProfile", "assemble_density",
    "cosine_transform", "distribution_slice", "kv_star", "profile_H",
    "uc_component", "velocity_profile", "wall_velocity",
    "KGrid", "SeriesCoefficients", "SlipSolution", "SpectralDensity",
    "V0_EXACT", "build_E0", "default_grid", "next_E", "next_V",
    "semi_infinite_integral", "slip_coefficient", "slip_velocity",
    "solve_series", "solve_slip", "spectral_Phi",
]
