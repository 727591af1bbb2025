"""Fibered forward problem, partial DN maps and their difference norms."""

from waveguide_calderon.forward.dnmap import (
    DNMapMetadata,
    PartialDNMap,
    SimulatedDNData,
    assemble_partial_dn,
    compute_gram,
    dn_difference_norm,
    dn_sup_over_fibers,
    full_boundary_dn,
)
from waveguide_calderon.forward.potential import PotentialField, bump
from waveguide_calderon.forward.solver import DirichletData, FiberOperator, solve_fibered_bvp

__all__ = [
    "DNMapMetadata",
    "DirichletData",
    "FiberOperator",
    "PartialDNMap",
    "PotentialField",
    "SimulatedDNData",
    "assemble_partial_dn",
    "bump",
    "compute_gram",
    "dn_difference_norm",
    "dn_sup_over_fibers",
    "full_boundary_dn",
    "solve_fibered_bvp",
]
