"""Axial Fourier machinery: fiber modes, membership tests and the FBG transform."""

from waveguide_calderon.spectral.fbg import (
    fbg_forward,
    fbg_inverse,
    fbg_norm_squared,
    uniform_theta_grid,
)
from waveguide_calderon.spectral.fiber import (
    FiberContext,
    ModeExpansion,
    discrete_cross_laplacian,
    fiber_derivative,
    fiber_project,
    fiber_synthesize,
    mode_operator_apply,
)
from waveguide_calderon.spectral.membership import CellFunction, quasi_periodic_membership

__all__ = [
    "CellFunction",
    "FiberContext",
    "ModeExpansion",
    "discrete_cross_laplacian",
    "fbg_forward",
    "fbg_inverse",
    "fbg_norm_squared",
    "fiber_derivative",
    "fiber_project",
    "fiber_synthesize",
    "mode_operator_apply",
    "quasi_periodic_membership",
    "uniform_theta_grid",
]
