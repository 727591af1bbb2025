"""Dense seven-point finite-difference solver on the quasi-periodic cell."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from waveguide_calderon.errors import SolverError

logger = logging.getLogger(__name__)

MAX_POINTS_PER_AXIS = 40

CellFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
Inside = Callable[[np.ndarray, np.ndarray], np.ndarray]


def disk_inside(radius: float = 1.0) -> Inside:
    return lambda x2, x3: x2**2 + x3**2 < radius**2


def square_inside(side: float = 1.0) -> Inside:
    half = 0.5 * side
    return lambda x2, x3: (np.abs(x2) < half) & (np.abs(x3) < half)


@dataclass(frozen=True)
class DenseGrid:
    """Uniform grid x₁ = j/n₁ times a square transverse grid covering ω.

    Transverse points with ``inside`` true are unknowns; their outside
    neighbours carry the Dirichlet data.
    """

    n1: int
    n: int
    half_width: float
    inside: Inside

    def __post_init__(self) -> None:
        if max(self.n1, self.n) > MAX_POINTS_PER_AXIS:
            raise ValueError(f"oracle grids are limited to {MAX_POINTS_PER_AXIS} points per axis")
        if not self.mask.any():
            raise ValueError("no grid point lies inside the cross-section")

    @property
    def h1(self) -> float:
        return 1.0 / self.n1

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @cached_property
    def x1(self) -> np.ndarray:
        return np.arange(self.n1) / self.n1

    @cached_property
    def x2(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    @cached_property
    def mask(self) -> np.ndarray:
        """Transverse unknowns, shape ``(n, n)`` indexed ``[i2, i3]``."""
        x2, x3 = np.meshgrid(self.x2, self.x2, indexing="ij")
        inside = np.asarray(self.inside(x2, x3), dtype=bool)
        inside[0, :] = inside[-1, :] = inside[:, 0] = inside[:, -1] = False
        return inside

    def coordinates(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.meshgrid(self.x1, self.x2, self.x2, indexing="ij")


@dataclass(frozen=True)
class FDSolution:
    grid: DenseGrid
    values: np.ndarray

    def interior_values(self) -> np.ndarray:
        """Values at unknown points, shape ``(n1, n_inside)``."""
        return self.values[:, self.grid.mask]


def fd_solve(
    grid: DenseGrid,
    potential: CellFunction,
    theta: float,
    boundary: CellFunction,
    source: CellFunction | None = None,
) -> FDSolution:
    """Solve (−Δ + V)u = source with u(x₁ + 1) = e^{iθ}u(x₁) and u = g outside ω.

    ``boundary`` is evaluated at the first grid points outside ω, which
    requires g to be defined in a neighbourhood of the boundary.
    """
    x1, x2, x3 = grid.coordinates()
    n1, n = grid.n1, grid.n
    mask = grid.mask
    index = -np.ones((n1, n, n), dtype=int)
    count = int(mask.sum())
    index[:, mask] = np.arange(n1 * count).reshape(n1, count)
    v = np.broadcast_to(np.asarray(potential(x1, x2, x3), dtype=float), x1.shape)
    g = np.broadcast_to(np.asarray(boundary(x1, x2, x3), dtype=complex), x1.shape)
    f = (
        np.zeros(x1.shape, dtype=complex)
        if source is None
        else np.broadcast_to(np.asarray(source(x1, x2, x3), dtype=complex), x1.shape)
    )

    inv1, inv = 1.0 / grid.h1**2, 1.0 / grid.h**2
    rows, cols, data = [], [], []
    rhs = np.zeros(n1 * count, dtype=complex)
    phase = np.exp(1j * theta)
    for j, i2, i3 in zip(*np.nonzero(index >= 0), strict=True):
        p = index[j, i2, i3]
        rows.append(p)
        cols.append(p)
        data.append(2 * inv1 + 4 * inv + v[j, i2, i3])
        rhs[p] += f[j, i2, i3]
        for dj, factor in ((1, phase if j == n1 - 1 else 1.0), (-1, 1 / phase if j == 0 else 1.0)):
            rows.append(p)
            cols.append(index[(j + dj) % n1, i2, i3])
            data.append(-inv1 * factor)
        for a, b in ((i2 + 1, i3), (i2 - 1, i3), (i2, i3 + 1), (i2, i3 - 1)):
            q = index[j, a, b]
            if q >= 0:
                rows.append(p)
                cols.append(q)
                data.append(-inv)
            else:
                rhs[p] += inv * g[j, a, b]
    matrix = sp.csr_matrix((data, (rows, cols)), shape=(n1 * count, n1 * count), dtype=complex)
    try:
        solution = spsolve(matrix.tocsc(), rhs)
    except RuntimeError as exc:
        raise SolverError("finite-difference system is singular") from exc
    if not np.all(np.isfinite(solution)):
        raise SolverError("finite-difference system is singular")
    values = np.array(g, dtype=complex)
    values[:, mask] = solution.reshape(n1, count)
    logger.debug("fd_solve: %d unknowns, θ=%.3f", n1 * count, theta)
    return FDSolution(grid, values)


def dense_grid_for_disk(radius: float, n: int, n1: int | None = None) -> DenseGrid:
    """Grid whose outer ring lies just outside a disk of ``radius``."""
    half = radius * (1.0 + 2.5 / (n - 1))
    return DenseGrid(n1 or n, n, half, disk_inside(radius))


def relative_l2(first: np.ndarray, second: np.ndarray) -> float:
    scale = float(np.linalg.norm(second))
    return float(np.linalg.norm(first - second)) / scale if scale > 0 else math.inf
