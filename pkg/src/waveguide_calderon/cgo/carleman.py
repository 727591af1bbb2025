"""Empirical check of the boundary Carleman inequality with weight e^{−τξ·x′}."""

from __future__ import annotations

import logging

import numpy as np

from waveguide_calderon.errors import SpectralError
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.forward.solver import FiberOperator
from waveguide_calderon.geometry.faces import unit_vector
from waveguide_calderon.geometry.poincare import dirichlet_eigenpairs
from waveguide_calderon.models import CarlemanRow, CarlemanTable
from waveguide_calderon.spectral.fiber import FiberContext, ModeExpansion

logger = logging.getLogger(__name__)

TRACE_TOLERANCE = 1e-12


def _weighted_mode_norm(mesh, weight: np.ndarray, fields: np.ndarray) -> float:
    mass = mesh.weighted_mass(weight)
    return float(np.real(np.einsum("kn,kn->", fields.conj(), (mass @ fields.T).T)))


def carleman_terms(
    operator: FiberOperator, w: ModeExpansion, xi: np.ndarray, tau: float
) -> tuple[float, float]:
    """Right and left sides of the weighted inequality for one field."""
    ctx = w.ctx
    mesh = ctx.mesh
    coefficients = w.coefficients
    scale = max(float(np.abs(coefficients).max()), 1e-300)
    if np.abs(w.boundary_trace()).max() > TRACE_TOLERANCE * scale:
        raise SpectralError("Carleman test fields must vanish on the lateral boundary")

    column = coefficients.reshape(-1, 1)
    load = (operator.matrix @ column).reshape(ctx.n_modes, mesh.n_nodes)
    inner = mesh.interior_nodes
    applied = np.zeros_like(load)
    applied[:, inner] = load[:, inner] / mesh.lumped_mass[inner][None, :]
    flux = operator.flux_many(column, applied.reshape(-1, 1)).reshape(ctx.n_modes, mesh.n_boundary)

    height = mesh.vertices @ xi
    weight = np.exp(-2.0 * tau * (height - height.min()))
    interior_rhs = _weighted_mode_norm(mesh, weight, applied)
    interior_lhs = _weighted_mode_norm(mesh, weight, coefficients)

    dots = mesh.edge_normals @ xi
    node_weight = weight[mesh.boundary_nodes]
    energy = node_weight * np.sum(np.abs(flux) ** 2, axis=0)
    per_edge = 0.5 * mesh.edge_lengths * np.abs(dots) * (energy + np.roll(energy, -1))
    shadow = float(per_edge[dots <= 0].sum())
    lit = float(per_edge[dots > 0].sum())
    return interior_rhs + tau * shadow, interior_lhs + tau * lit


def carleman_ratio(operator: FiberOperator, w: ModeExpansion, xi: np.ndarray, tau: float) -> float:
    rhs, lhs = carleman_terms(operator, w, xi, tau)
    return rhs / lhs


def random_dirichlet_fields(
    ctx: FiberContext, count: int, seed: int = 0, eigenmodes: int = 6
) -> list[ModeExpansion]:
    """Seeded θ-quasi-periodic fields with zero lateral trace."""
    _, basis = dirichlet_eigenpairs(ctx.mesh, eigenmodes)
    rng = np.random.default_rng(seed)
    fields = []
    for _ in range(count):
        mix = rng.standard_normal((ctx.n_modes, eigenmodes)) + 1j * rng.standard_normal(
            (ctx.n_modes, eigenmodes)
        )
        fields.append(ModeExpansion(mix @ basis.T, ctx))
    return fields


def carleman_empirical(
    potential: PotentialField,
    xi: tuple[float, float] | np.ndarray,
    theta: float,
    taus: list[float],
    fields: list[ModeExpansion],
) -> CarlemanTable:
    """Ratios RHS/LHS for every (field, τ) and the per-τ floor."""
    direction = unit_vector(xi)
    if not fields:
        raise ValueError("at least one test field is required")
    ctx = fields[0].ctx
    if ctx.theta != theta:
        raise SpectralError("test fields live on a different fiber")
    operator = FiberOperator(potential, ctx, check=False)
    rows = []
    for tau in taus:
        for index, field in enumerate(fields):
            rows.append(
                CarlemanRow(
                    tau=tau,
                    field_index=index,
                    ratio=carleman_ratio(operator, field, direction, tau),
                )
            )
    floors = {tau: min(r.ratio for r in rows if r.tau == tau) for tau in taus}
    logger.info("Carleman floors: %s", ", ".join(f"τ={t:g}: {v:.3g}" for t, v in floors.items()))
    return CarlemanTable(rows=rows, floors=floors)
