"""P1 finite element matrices on a triangulated cross-section."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

_MASS_PATTERN = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0


def triangle_geometry(
    vertices: np.ndarray, triangles: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Areas and barycentric gradient coefficients.

    Returns ``(area, b, c)`` with ``grad λ_i = (b_i, c_i) / (2 area)`` on each triangle.
    """
    p = vertices[triangles]
    x, y = p[:, :, 0], p[:, :, 1]
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    return area, b, c


def _scatter(triangles: np.ndarray, local: np.ndarray, n: int) -> sp.csr_matrix:
    rows = np.repeat(triangles, 3, axis=1).ravel()
    cols = np.tile(triangles, (1, 3)).ravel()
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def stiffness_matrix(vertices: np.ndarray, triangles: np.ndarray) -> sp.csr_matrix:
    """Stiffness matrix of ∫ ∇φ_i · ∇φ_j."""
    area, b, c = triangle_geometry(vertices, triangles)
    local = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (
        4.0 * area[:, None, None]
    )
    return _scatter(triangles, local, len(vertices))


def mass_matrix(
    vertices: np.ndarray, triangles: np.ndarray, weight: np.ndarray | None = None
) -> sp.csr_matrix:
    """Consistent mass matrix, optionally weighted by a nodal P1 field.

    The weighted form integrates the product of three P1 functions exactly, so the
    result is the Galerkin matrix of ``∫ w φ_i φ_j`` for the interpolated weight.
    """
    area, _, _ = triangle_geometry(vertices, triangles)
    if weight is None:
        local = area[:, None, None] * _MASS_PATTERN[None, :, :]
        return _scatter(triangles, local, len(vertices))
    w = np.asarray(weight)[triangles]
    total = w.sum(axis=1)
    local = (w[:, :, None] + w[:, None, :] + total[:, None, None]) / 60.0
    diag = (2.0 * w + total[:, None]) / 30.0
    idx = np.arange(3)
    local[:, idx, idx] = diag
    local = local * area[:, None, None]
    return _scatter(triangles, local, len(vertices))


def convection_matrices(
    vertices: np.ndarray, triangles: np.ndarray
) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Matrices of ``∫ φ_i ∂_x φ_j`` and ``∫ φ_i ∂_y φ_j``."""
    _, b, c = triangle_geometry(vertices, triangles)
    ones = np.ones((len(triangles), 3, 1))
    cx = ones * b[:, None, :] / 6.0
    cy = ones * c[:, None, :] / 6.0
    return _scatter(triangles, cx, len(vertices)), _scatter(triangles, cy, len(vertices))


def boundary_mass_matrix(vertices: np.ndarray, edges: np.ndarray) -> sp.csr_matrix:
    """Consistent P1 mass matrix on the boundary edges, sized to all nodes."""
    lengths = np.linalg.norm(vertices[edges[:, 1]] - vertices[edges[:, 0]], axis=1)
    local = lengths[:, None, None] * np.array([[2.0, 1.0], [1.0, 2.0]])[None] / 6.0
    rows = np.repeat(edges, 2, axis=1).ravel()
    cols = np.tile(edges, (1, 2)).ravel()
    n = len(vertices)
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()
