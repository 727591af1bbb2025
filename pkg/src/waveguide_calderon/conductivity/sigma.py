"""Conductivity DN maps Σ_a expressed through the Liouville-transformed Λ_{V_a}."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve

from waveguide_calderon.conductivity.field import ConductivityField, normal_derivative
from waveguide_calderon.conductivity.liouville import liouville_potential
from waveguide_calderon.errors import CompatibilityError, DNMapMismatchError
from waveguide_calderon.forward.dnmap import (
    PartialDNMap,
    assemble_partial_dn,
    compute_gram,
    dn_difference_norm,
    largest_generalized_eigenvalue,
)
from waveguide_calderon.geometry.faces import FaceSet
from waveguide_calderon.models import SigmaDifferenceReport
from waveguide_calderon.spectral.fiber import FiberContext

logger = logging.getLogger(__name__)

COMPATIBILITY_TOLERANCE = 1e-10


def boundary_multiplier(ctx: FiberContext, samples: np.ndarray) -> sp.csr_matrix:
    """Multiplication by a periodic boundary function on the mode window.

    ``samples`` holds the function on ``ctx.x1_grid`` × boundary loop. Block
    (n, n′) is the diagonal of its axial Fourier coefficient n − n′.
    """
    nm, nb = ctx.n_modes, ctx.mesh.n_boundary
    samples = np.asarray(samples)
    if samples.shape != (ctx.n_x1, nb):
        raise ValueError(f"multiplier samples must have shape {(ctx.n_x1, nb)}")
    spectrum = np.fft.fft(samples, axis=0) / ctx.n_x1
    blocks = [
        [sp.diags(spectrum[(a - b) % ctx.n_x1]) for b in range(nm)] for a in range(nm)
    ]
    return sp.bmat(blocks, format="csr")


def _rows(ctx: FiberContext, positions: np.ndarray) -> np.ndarray:
    return (np.arange(ctx.n_modes)[:, None] * ctx.mesh.n_boundary + positions[None, :]).ravel()


@dataclass(frozen=True, eq=False)
class SigmaOperator:
    """Matrix of Σ_a: hat-function inputs on F′ → conormal fluxes on G′.

    ``root_in`` is multiplication by a^{1/2} on the input rows; the input space
    a^{-1/2}(H_c(F̌)) is normed by ‖a^{1/2} f‖ in H_c(F̌).
    """

    matrix: np.ndarray
    root_in: np.ndarray
    dn: PartialDNMap

    def apply(self, coefficients: np.ndarray) -> np.ndarray:
        return self.matrix @ coefficients


def sigma_from_lambda(
    a: ConductivityField,
    ctx: FiberContext,
    input_face: FaceSet,
    output_face: FaceSet,
    *,
    dn: PartialDNMap | None = None,
    gram: np.ndarray | None = None,
) -> SigmaOperator:
    """Σ_a f = a^{1/2} Λ_{V_a}(a^{1/2} f) − a^{1/2}(∂_ν a^{1/2}) f on Ǧ."""
    if a.mesh is not ctx.mesh:
        raise DNMapMismatchError("conductivity and fiber context use different meshes")
    if dn is None:
        dn = assemble_partial_dn(liouville_potential(a), ctx, input_face, output_face, gram=gram)
    rows_in = _rows(ctx, dn.input_positions)
    rows_out = _rows(ctx, dn.output_positions)
    grid = ctx.x1_grid
    root = a.boundary_samples(grid, a.sqrt)
    root_normal = normal_derivative(a, a.sqrt, grid)

    multiplier = boundary_multiplier(ctx, root)
    d_in = multiplier[rows_in][:, rows_in]
    d_out = multiplier[rows_out][:, rows_out]
    correction = boundary_multiplier(ctx, root * root_normal)[rows_out][:, rows_in]
    matrix = d_out @ (dn.matrix @ d_in.toarray()) - correction.toarray()
    return SigmaOperator(np.asarray(matrix), d_in.toarray(), dn)


def _intersection_positions(input_face: FaceSet, output_face: FaceSet) -> np.ndarray:
    both = input_face.mask & output_face.mask
    return np.flatnonzero(both | np.roll(both, 1))


def check_compatibility(
    first: ConductivityField,
    second: ConductivityField,
    ctx: FiberContext,
    input_face: FaceSet,
    output_face: FaceSet,
    tolerance: float = COMPATIBILITY_TOLERANCE,
) -> None:
    """a₁ = a₂ on ∂Ω and ∂_ν a₁ = ∂_ν a₂ on F ∩ G, on boundary samples."""
    grid = ctx.x1_grid
    gap = float(np.abs(first.boundary_samples(grid) - second.boundary_samples(grid)).max())
    if gap > tolerance:
        raise CompatibilityError("trace", f"a₁ and a₂ differ by {gap:.3e} on the boundary")
    positions = _intersection_positions(input_face, output_face)
    if len(positions):
        d1 = normal_derivative(first, first.func, grid)[:, positions]
        d2 = normal_derivative(second, second.func, grid)[:, positions]
        gap = float(np.abs(d1 - d2).max())
        if gap > tolerance:
            raise CompatibilityError(
                "normal-derivative", f"∂_ν a₁ and ∂_ν a₂ differ by {gap:.3e} on F ∩ G"
            )


def sigma_difference_norm(
    first: ConductivityField,
    second: ConductivityField,
    ctx: FiberContext,
    input_face: FaceSet,
    output_face: FaceSet,
    *,
    tolerance: float = COMPATIBILITY_TOLERANCE,
) -> SigmaDifferenceReport:
    """‖Σ_{a₁} − Σ_{a₂}‖ from a₁^{-1/2}(H_c(F̌)) into L²(Ǧ), with ‖Λ_{V₁} − Λ_{V₂}‖."""
    check_compatibility(first, second, ctx, input_face, output_face, tolerance)
    gram = compute_gram(ctx, input_face)
    s1 = sigma_from_lambda(first, ctx, input_face, output_face, gram=gram)
    s2 = sigma_from_lambda(second, ctx, input_face, output_face, gram=gram)
    diff = s1.matrix - s2.matrix
    sigma_norm = 0.0
    if np.any(diff):
        scaled = solve(s1.root_in.T, diff.T).T
        h = scaled.conj().T @ (s1.dn.output_weights[:, None] * scaled)
        h = 0.5 * (h + h.conj().T)
        sigma_norm = math.sqrt(max(largest_generalized_eigenvalue(h, gram), 0.0))
    lambda_norm = dn_difference_norm(s1.dn, s2.dn)
    a_star = min(first.a_star, second.a_star)
    logger.info("‖Σ₁ − Σ₂‖ = %.4e, ‖Λ₁ − Λ₂‖ = %.4e", sigma_norm, lambda_norm)
    return SigmaDifferenceReport(sigma_norm=sigma_norm, lambda_norm=lambda_norm, a_star=a_star)
