"""Complex geometric optics solutions and the Carleman check."""

from waveguide_calderon.cgo.carleman import (
    carleman_empirical,
    carleman_ratio,
    random_dirichlet_fields,
)
from waveguide_calderon.cgo.ladder import decay_ladder, trace_growth_ratios, trace_norm
from waveguide_calderon.cgo.params import (
    CGOParams,
    check_invariants,
    make_cgo_params,
    params_for_tau,
)
from waveguide_calderon.cgo.smooth import FourierBox, solve_cgo_smooth
from waveguide_calderon.cgo.solution import CGOSolution
from waveguide_calderon.cgo.vanishing import full_dirichlet_objective, solve_cgo_vanishing

__all__ = [
    "CGOParams",
    "CGOSolution",
    "FourierBox",
    "carleman_empirical",
    "carleman_ratio",
    "check_invariants",
    "decay_ladder",
    "full_dirichlet_objective",
    "make_cgo_params",
    "params_for_tau",
    "random_dirichlet_fields",
    "solve_cgo_smooth",
    "solve_cgo_vanishing",
    "trace_growth_ratios",
    "trace_norm",
]
