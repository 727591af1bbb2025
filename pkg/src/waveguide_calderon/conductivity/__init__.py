"""Conductivity equation: Liouville transform, admissibility and Σ_a stability."""

from waveguide_calderon.conductivity.field import (
    ConductivityField,
    build_conductivity,
    bump_shape,
    conductivity_function,
    normal_derivative,
)
from waveguide_calderon.conductivity.liouville import (
    admissibility_check,
    discrete_liouville_samples,
    liouville_potential,
    liouville_samples,
)
from waveguide_calderon.conductivity.sigma import (
    SigmaOperator,
    boundary_multiplier,
    check_compatibility,
    sigma_difference_norm,
    sigma_from_lambda,
)
from waveguide_calderon.conductivity.stability import (
    alpha_fields,
    conductivity_ladder,
    conductivity_stability,
)

__all__ = [
    "ConductivityField",
    "SigmaOperator",
    "admissibility_check",
    "alpha_fields",
    "boundary_multiplier",
    "build_conductivity",
    "bump_shape",
    "check_compatibility",
    "conductivity_function",
    "conductivity_ladder",
    "conductivity_stability",
    "discrete_liouville_samples",
    "liouville_potential",
    "liouville_samples",
    "normal_derivative",
    "sigma_difference_norm",
    "sigma_from_lambda",
]
