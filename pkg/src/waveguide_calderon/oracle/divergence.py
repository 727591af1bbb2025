"""Independent P1 solver for −div(a∇u) = 0 on one fiber, and a dense eigensolve."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np
from scipy.linalg import eigh, lu_factor, lu_solve

from waveguide_calderon.geometry.mesh import CrossSectionMesh

logger = logging.getLogger(__name__)

CellFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

_LOCAL_MASS = (np.ones((3, 3)) + np.eye(3)) / 12.0


def _local_gradients(corners: np.ndarray) -> tuple[np.ndarray, float]:
    """Gradients of the three hat functions and the triangle area."""
    matrix = np.column_stack([np.ones(3), corners])
    inverse = np.linalg.inv(matrix)
    area = 0.5 * abs(np.linalg.det(matrix))
    return inverse[1:].T, area


def _element_matrices(
    mesh: CrossSectionMesh, weights: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Dense ∫w∇φᵢ·∇φⱼ and ∫wφᵢφⱼ with one centroid weight per triangle."""
    n = mesh.n_nodes
    stiffness = np.zeros((n, n), dtype=complex)
    mass = np.zeros((n, n), dtype=complex)
    for t, triangle in enumerate(mesh.triangles):
        grads, area = _local_gradients(mesh.vertices[triangle])
        local_k = weights[t] * area * (grads @ grads.T)
        local_m = weights[t] * area * _LOCAL_MASS
        for a in range(3):
            for b in range(3):
                stiffness[triangle[a], triangle[b]] += local_k[a, b]
                mass[triangle[a], triangle[b]] += local_m[a, b]
    return stiffness, mass


def _edge_mass(mesh: CrossSectionMesh) -> np.ndarray:
    nb = mesh.n_boundary
    out = np.zeros((nb, nb))
    for i, (p, q) in enumerate(mesh.boundary_edges):
        length = float(np.linalg.norm(mesh.vertices[q] - mesh.vertices[p]))
        j = (i + 1) % nb
        out[i, i] += length / 3.0
        out[j, j] += length / 3.0
        out[i, j] += length / 6.0
        out[j, i] += length / 6.0
    return out


def _fiber_matrix(
    mesh: CrossSectionMesh, a: CellFunction, theta: float, K: int, center: int, axial: int
) -> np.ndarray:
    """Mode-major block matrix of ∫a(∂₁u∂₁v̄ + ∇′u·∇′v̄) on the window."""
    corners = mesh.vertices[mesh.triangles]
    centroids = corners.mean(axis=1)
    x1 = (np.arange(axial) / axial)[:, None]
    samples = np.broadcast_to(
        np.asarray(a(x1, centroids[None, :, 0], centroids[None, :, 1]), dtype=float),
        (axial, len(centroids)),
    )
    spectrum = np.fft.fft(samples, axis=0) / axial
    modes = np.arange(center - K, center + K + 1)
    omegas = theta + 2.0 * math.pi * modes
    nm, n = len(modes), mesh.n_nodes
    cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    full = np.zeros((nm * n, nm * n), dtype=complex)
    for r in range(nm):
        for c in range(nm):
            shift = int(modes[r] - modes[c])
            if shift not in cache:
                cache[shift] = _element_matrices(mesh, spectrum[shift % axial])
            stiffness, mass = cache[shift]
            block = stiffness + omegas[r] * omegas[c] * mass
            full[r * n : (r + 1) * n, c * n : (c + 1) * n] = block
    return full


def divergence_form_solve(
    mesh: CrossSectionMesh,
    a: CellFunction,
    theta: float,
    K: int,
    traces: np.ndarray,
    *,
    center: int = 0,
    axial: int = 32,
) -> tuple[np.ndarray, np.ndarray]:
    """Solve −div(a∇u) = 0 for boundary traces ``(n_modes·n_boundary, ncols)``.

    Returns nodal solutions ``(n_modes·n_nodes, ncols)`` and the conormal
    fluxes a∂_νu ``(n_modes·n_boundary, ncols)``.
    """
    matrix = _fiber_matrix(mesh, a, theta, K, center, axial)
    nm, n, nb = 2 * K + 1, mesh.n_nodes, mesh.n_boundary
    offsets = (np.arange(nm) * n)[:, None]
    boundary = (offsets + mesh.boundary_nodes[None, :]).ravel()
    interior = (offsets + mesh.interior_nodes[None, :]).ravel()
    traces = np.asarray(traces, dtype=complex)
    factor = lu_factor(matrix[np.ix_(interior, interior)])
    solutions = np.zeros((nm * n, traces.shape[1]), dtype=complex)
    solutions[boundary] = traces
    solutions[interior] = lu_solve(factor, -matrix[np.ix_(interior, boundary)] @ traces)
    residual = matrix[boundary] @ solutions
    edge = _edge_mass(mesh)
    flux = np.zeros_like(residual)
    for mode in range(nm):
        rows = slice(mode * nb, (mode + 1) * nb)
        flux[rows] = np.linalg.solve(edge, residual[rows])
    logger.debug("divergence-form oracle: %d unknowns", len(interior))
    return solutions, flux


def divergence_form_dn(
    mesh: CrossSectionMesh,
    a: CellFunction,
    theta: float,
    K: int,
    input_positions: np.ndarray,
    output_positions: np.ndarray,
    *,
    center: int = 0,
) -> np.ndarray:
    """Conormal DN matrix of Σ_a from hat inputs on F′ to fluxes on G′."""
    nm, nb = 2 * K + 1, mesh.n_boundary
    inputs = (np.arange(nm)[:, None] * nb + np.asarray(input_positions)[None, :]).ravel()
    outputs = (np.arange(nm)[:, None] * nb + np.asarray(output_positions)[None, :]).ravel()
    traces = np.zeros((nm * nb, len(inputs)), dtype=complex)
    traces[inputs, np.arange(len(inputs))] = 1.0
    _, flux = divergence_form_solve(mesh, a, theta, K, traces, center=center)
    return flux[outputs]


def dense_poincare_constant(mesh: CrossSectionMesh) -> float:
    """√λ₁ of the Dirichlet Laplacian by a dense generalized eigensolve."""
    ones = np.ones(len(mesh.triangles))
    stiffness, mass = _element_matrices(mesh, ones)
    inner = mesh.interior_nodes
    values = eigh(
        stiffness.real[np.ix_(inner, inner)],
        mass.real[np.ix_(inner, inner)],
        eigvals_only=True,
        subset_by_index=[0, 0],
    )
    return math.sqrt(float(values[0]))
