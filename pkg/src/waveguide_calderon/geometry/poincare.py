"""Dirichlet eigenpairs of the cross-section and the Poincaré constant C_ω."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from waveguide_calderon.errors import SolverError
from waveguide_calderon.geometry.mesh import CrossSectionMesh, CrossSectionSpec, build_mesh
from waveguide_calderon.models import PoincareEstimate

logger = logging.getLogger(__name__)


def dirichlet_eigenpairs(mesh: CrossSectionMesh, count: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Smallest Dirichlet-Laplacian eigenpairs on the mesh.

    Eigenvectors are returned as full nodal fields (zero on the boundary),
    normalized in the mass inner product.
    """
    inner = mesh.interior_nodes
    stiff = mesh.stiffness[inner][:, inner].tocsc()
    mass = mesh.mass[inner][:, inner].tocsc()
    try:
        values, vectors = eigsh(stiff, k=count, M=mass, sigma=0.0, which="LM")
    except ArpackNoConvergence as exc:
        residual = None
        if len(exc.eigenvalues):
            lam, vec = exc.eigenvalues[0], exc.eigenvectors[:, 0]
            residual = float(np.linalg.norm(stiff @ vec - lam * (mass @ vec)))
        raise SolverError("Dirichlet eigensolve did not converge", residual=residual) from exc
    order = np.argsort(values)
    values, vectors = values[order], vectors[:, order]
    fields = np.zeros((mesh.n_nodes, count))
    fields[inner] = vectors
    for j in range(count):
        norm = math.sqrt(float(fields[:, j] @ (mesh.mass @ fields[:, j])))
        sign = 1.0 if fields[inner, j].sum() >= 0 else -1.0
        fields[:, j] *= sign / norm
    return values, fields


def poincare_constant(mesh: CrossSectionMesh) -> float:
    """C_ω as the square root of the first discrete Dirichlet eigenvalue."""
    values, _ = dirichlet_eigenpairs(mesh, 1)
    value = math.sqrt(float(values[0]))
    logger.debug("poincare constant %.6f on %d nodes", value, mesh.n_nodes)
    return value


def poincare_constant_converged(spec: CrossSectionSpec) -> PoincareEstimate:
    """C_ω at h and h/2 together with a Richardson-extrapolated value."""
    coarse = poincare_constant(build_mesh(spec))
    fine_spec = spec.model_copy(
        update={
            "h": spec.h / 2,
            "boundary_points": spec.boundary_points * 2 if spec.boundary_points else None,
        }
    )
    fine = poincare_constant(build_mesh(fine_spec))
    return PoincareEstimate(
        h=spec.h,
        value=coarse,
        refined_value=fine,
        extrapolated_value=fine + (fine - coarse) / 3.0,
        change=abs(fine - coarse),
    )
