"""H¹ stability chain for conductivity differences."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.sparse.linalg import splu

from waveguide_calderon.conductivity.field import ConductivityField, ConductivityFunction
from waveguide_calderon.conductivity.liouville import (
    admissibility_check,
    discrete_liouville_samples,
    liouville_potential,
    liouville_samples,
)
from waveguide_calderon.conductivity.sigma import COMPATIBILITY_TOLERANCE, sigma_difference_norm
from waveguide_calderon.forward.solver import FiberOperator
from waveguide_calderon.geometry.faces import BoundaryPartition
from waveguide_calderon.models import (
    ConductivityLadderReport,
    ConductivityLadderRow,
    ConductivityStabilityReport,
)
from waveguide_calderon.parallel import parallel_map
from waveguide_calderon.recon.modulus import stability_modulus
from waveguide_calderon.recon.norms import h1_norm, h_minus1_norm
from waveguide_calderon.spectral.fiber import FiberContext, ModeExpansion, fiber_project

logger = logging.getLogger(__name__)

ALPHA_RESIDUAL_TOLERANCE = 1e-8
_OVERSAMPLING = 4


def _project(samples_at, ctx: FiberContext) -> ModeExpansion:
    n = _OVERSAMPLING * ctx.n_x1
    return fiber_project(samples_at(np.arange(n) / n), ctx)


def alpha_fields(
    first: ConductivityField, second: ConductivityField, K: int
) -> tuple[ModeExpansion, ModeExpansion, float]:
    """α = a₁^{1/2} − a₂^{1/2} directly and as the periodic solution of
    (−Δ + V₁)α = −a₂^{1/2}(V₁ − V₂) with α = 0 on Γ̌.

    Both potentials are the Galerkin-consistent ones, and the source load is
    the exact P1 product ∫(V₁ − V₂) a₂^{1/2} φ on the same axial grid, so the
    two fields differ only by axial truncation of V₁.

    Returns ``(direct, solved, residual)``.
    """
    ctx = FiberContext(0.0, K, first.mesh)
    mesh = ctx.mesh
    n = _OVERSAMPLING * ctx.n_x1
    x1 = np.arange(n) / n
    root = second.sqrt_samples(x1)
    direct = fiber_project(first.sqrt_samples(x1) - root, ctx)
    difference = discrete_liouville_samples(first, n) - discrete_liouville_samples(second, n)
    load = np.stack([-(mesh.weighted_mass(difference[j]) @ root[j]) for j in range(n)])
    source = fiber_project(splu(mesh.mass.tocsc()).solve(np.ascontiguousarray(load.T)).T, ctx)
    operator = FiberOperator(liouville_potential(first, discrete=True), ctx)
    solved = operator.solve(None, source)
    residual = operator.residual_norm(solved, source) if np.any(source.coefficients) else 0.0
    return direct, solved, residual


def conductivity_stability(
    first: ConductivityField,
    second: ConductivityField,
    partition: BoundaryPartition,
    *,
    K: int = 2,
    theta: float = 0.0,
    gamma_star: float = 1e-6,
    tolerance: float = COMPATIBILITY_TOLERANCE,
    residual_tolerance: float = ALPHA_RESIDUAL_TOLERANCE,
) -> ConductivityStabilityReport:
    """Compare ‖a₁ − a₂‖_{H¹(Ω̌)} with Φ(a*^{-1/2}‖Σ₁ − Σ₂‖) and check the α factorization."""
    mesh = first.mesh
    direct, solved, residual = alpha_fields(first, second, K)
    if residual > residual_tolerance:
        logger.warning(
            "α-equation residual %.3e above tolerance %.1e", residual, residual_tolerance
        )
    alpha_direct = h1_norm(direct)
    alpha_solved = h1_norm(solved)
    agreement = h1_norm(direct - solved) / alpha_direct if alpha_direct > 0 else 0.0

    difference = _project(lambda x1: first.samples(x1) - second.samples(x1), direct.ctx)
    h1_difference = h1_norm(difference)
    a_star = min(first.a_star, second.a_star)
    factor_bound = 2.0 * first.bound_plus * alpha_direct / math.sqrt(a_star)

    dual = h_minus1_norm(
        lambda x1: liouville_samples(first, x1) - liouville_samples(second, x1), mesh, periodic=True
    )
    dual_ratio = alpha_solved / dual if dual > 0 else 0.0

    ctx = FiberContext(theta, K, mesh)
    sigma = sigma_difference_norm(
        first, second, ctx, partition.input_face, partition.output_face, tolerance=tolerance
    )
    phi = stability_modulus(sigma.sigma_norm / math.sqrt(a_star), gamma_star)
    if phi == 0.0:
        ratio = 0.0 if h1_difference == 0.0 else math.inf
    else:
        ratio = h1_difference / phi
    logger.info(
        "conductivity pair %s/%s: ‖a₁ − a₂‖_H¹ = %.4e, ‖Σ₁ − Σ₂‖ = %.4e, Φ = %.4e",
        first.name,
        second.name,
        h1_difference,
        sigma.sigma_norm,
        phi,
    )
    return ConductivityStabilityReport(
        h1_difference=h1_difference,
        alpha_direct=alpha_direct,
        alpha_solved=alpha_solved,
        alpha_agreement=agreement,
        alpha_residual=residual,
        factor_bound=factor_bound,
        dual_ratio=dual_ratio,
        sigma_norm=sigma.sigma_norm,
        phi=phi,
        ratio=ratio,
    )


def conductivity_ladder(
    first: ConductivityField,
    shape: ConductivityFunction,
    exponents: Sequence[int],
    partition: BoundaryPartition,
    *,
    K: int = 2,
    theta: float = 0.0,
    gamma_star: float = 1e-6,
    workers: int = 1,
) -> ConductivityLadderReport:
    """Fit C in ‖a₁ − a₂‖_{H¹} ≤ C·Φ(a*^{-1/2}‖Σ₁ − Σ₂‖) over a₂ = a₁ + 2^e·shape."""
    members: list[tuple[float, ConductivityField]] = []
    skipped: list[float] = []
    for e in sorted(exponents):
        s = 2.0**e
        member = first.perturbed(shape, s)
        if not admissibility_check(member).admissible:
            logger.warning("skipping s=%.3g: conductivity not admissible", s)
            skipped.append(s)
            continue
        members.append((s, member))

    def one(item: tuple[float, ConductivityField]) -> ConductivityLadderRow:
        s, member = item
        report = conductivity_stability(
            first, member, partition, K=K, theta=theta, gamma_star=gamma_star
        )
        return ConductivityLadderRow(
            s=s,
            h1_difference=report.h1_difference,
            sigma_norm=report.sigma_norm,
            phi=report.phi,
            ratio=report.ratio,
            dual_ratio=report.dual_ratio,
        )

    rows = parallel_map(one, members, workers)
    finite = [r.ratio for r in rows if math.isfinite(r.ratio)]
    positive = [ratio for ratio in finite if ratio > 0]
    fitted = math.inf if len(finite) < len(rows) else max(finite, default=0.0)
    spread = max(positive) / min(positive) if positive else 1.0
    return ConductivityLadderReport(
        rows=rows, fitted_constant=fitted, spread=spread, skipped=skipped
    )
