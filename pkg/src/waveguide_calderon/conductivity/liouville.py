"""Liouville transform a ↦ V_a = a^{-1/2} Δ a^{1/2} and conductivity admissibility."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.sparse.linalg import splu

from waveguide_calderon.conductivity.field import (
    AXIAL_SAMPLES,
    ConductivityField,
    gradient,
    hessian_norm,
    laplacian,
)
from waveguide_calderon.errors import SolverError
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.models import AdmissibilityReport
from waveguide_calderon.spectral.fiber import discrete_cross_laplacian

logger = logging.getLogger(__name__)

LIOUVILLE_BANDWIDTH = 4
PERIODICITY_TOLERANCE = 1e-12


def _sqrt_of(a: ConductivityField):
    return lambda x1, x2, x3: np.sqrt(a(x1, x2, x3))


def liouville_samples(a: ConductivityField, x1: np.ndarray) -> np.ndarray:
    """V_a at axial positions ``x1`` and every mesh node."""
    v = a.mesh.vertices
    x1 = np.asarray(x1, dtype=float)[:, None]
    x2, x3 = v[None, :, 0], v[None, :, 1]
    root = _sqrt_of(a)
    return laplacian(root, x1, x2, x3) / root(x1, x2, x3)


def discrete_liouville_samples(a: ConductivityField, n: int) -> np.ndarray:
    """V_a on the axial grid x₁ = j/n, matched to the P1 Galerkin operator.

    Interior values are chosen so that the interpolated a^{1/2} satisfies the
    discrete equation K s + M[V]s − M ∂₁²s = 0 on every interior row, with
    ∂₁² taken spectrally on the grid. Boundary values are the pointwise ones.
    """
    mesh = a.mesh
    x1 = np.arange(n) / n
    inner, outer = mesh.interior_nodes, mesh.boundary_nodes
    out = liouville_samples(a, x1)
    root = a.sqrt_samples(x1)
    wavenumbers = 2.0 * math.pi * np.fft.fftfreq(n, d=1.0 / n)
    axial = np.real(np.fft.ifft(-(wavenumbers**2)[:, None] * np.fft.fft(root, axis=0), axis=0))
    target = mesh.mass @ (discrete_cross_laplacian(mesh, root) + axial).T
    rows = 1 if a.x1_independent else n
    for j in range(rows):
        weighted = mesh.weighted_mass(root[j])
        rhs = target[inner, j] - weighted[inner][:, outer] @ out[j, outer]
        try:
            out[j, inner] = splu(weighted[inner][:, inner].tocsc()).solve(rhs)
        except RuntimeError as exc:
            raise SolverError(f"{a.name}: weighted mass of a^(1/2) is singular") from exc
    if rows == 1:
        out[1:] = out[0]
    return out


def liouville_potential(
    a: ConductivityField, bandwidth: int | None = None, *, discrete: bool = False
) -> PotentialField:
    """V_a sampled on the mesh, declared with the conductivity's M₋.

    ``discrete`` selects the values consistent with the Galerkin operator (see
    ``discrete_liouville_samples``) instead of pointwise ones. A negative part
    above M₋ is logged, not raised; ``admissibility_check`` reports it.
    """
    if bandwidth is None:
        bandwidth = 0 if a.x1_independent else LIOUVILLE_BANDWIDTH
    n = 4 * bandwidth + 4
    if discrete:
        samples = discrete_liouville_samples(a, n)
    else:
        samples = liouville_samples(a, np.arange(n) / n)
    field = PotentialField.from_samples(a.mesh, samples, bandwidth, name=f"V[{a.name}]")
    if field.negative_part_norm > a.bound_minus:
        logger.warning(
            "%s: ‖max(0, −V_a)‖_∞ = %.4g exceeds M₋ = %.4g",
            a.name,
            field.negative_part_norm,
            a.bound_minus,
        )
    return field.with_bounds(field.sup_norm, a.bound_minus)


def admissibility_check(
    a: ConductivityField, *, poincare: float | None = None, axial_samples: int = AXIAL_SAMPLES
) -> AdmissibilityReport:
    """Evaluate every admissibility and smallness condition on grid samples."""
    mesh = a.mesh
    v = mesh.vertices
    x1 = (np.arange(axial_samples) / axial_samples)[:, None]
    x2, x3 = v[None, :, 0], v[None, :, 1]

    values = a(x1, x2, x3)
    shifted = a(x1 + 1.0, x2, x3)
    periodic = bool(
        np.abs(shifted - values).max() <= PERIODICITY_TOLERANCE * max(1.0, np.abs(values).max())
    )
    grad = np.sqrt(sum(g**2 for g in gradient(a.func, x1, x2, x3)))
    hess = hessian_norm(a.func, x1, x2, x3)
    sup = float(np.abs(values).max())
    w1 = max(sup, float(grad.max()))
    w2 = max(w1, float(hess.max()))
    lap = float(np.abs(laplacian(a.func, x1, x2, x3)).max())
    negative = float(np.maximum(0.0, -liouville_samples(a, x1[:, 0])).max())
    c_omega = mesh.poincare_constant if poincare is None else poincare

    m_minus, a_star = a.bound_minus, a.a_star
    report = AdmissibilityReport(
        periodic=periodic,
        floor=bool(values.min() >= a_star),
        w1_bound=w1 <= a.bound_plus,
        negative_part=negative <= m_minus,
        poincare_gap=m_minus < c_omega,
        smallness_w1=w1**2 + 2 * a_star * lap <= 4 * m_minus * a_star**2,
        smallness_w2=w2 <= 4 * m_minus / (math.sqrt(4 * m_minus + 1) + 1) * a_star,
        min_value=float(values.min()),
        w1_norm=w1,
        w2_norm=w2,
        laplacian_sup=lap,
        negative_part_sup=negative,
    )
    logger.info("admissibility of %s: %s", a.name, "ok" if report.admissible else "violated")
    return report
