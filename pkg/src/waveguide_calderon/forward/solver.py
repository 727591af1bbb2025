"""Galerkin solver for the fibered quasi-periodic Schrödinger problem."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, onenormest, splu

from waveguide_calderon.errors import DNMapMismatchError, GeometryError, SolverError
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.geometry.faces import FaceSet
from waveguide_calderon.spectral.fiber import FiberContext, ModeExpansion

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DirichletData:
    """Boundary trace per axial mode, indexed by boundary loop position."""

    coefficients: np.ndarray
    ctx: FiberContext
    face: FaceSet | None = None

    def __post_init__(self) -> None:
        expected = (self.ctx.n_modes, self.ctx.mesh.n_boundary)
        if self.coefficients.shape != expected:
            raise ValueError(f"Dirichlet coefficients must have shape {expected}")
        if self.face is not None:
            outside = np.ones(self.ctx.mesh.n_boundary, dtype=bool)
            outside[self.face.inner_nodes] = False
            if np.any(self.coefficients[:, outside] != 0):
                raise GeometryError("Dirichlet data is not supported on the input face")

    @classmethod
    def zeros(cls, ctx: FiberContext) -> DirichletData:
        return cls(np.zeros((ctx.n_modes, ctx.mesh.n_boundary), dtype=complex), ctx)

    @classmethod
    def from_function(
        cls, ctx: FiberContext, func, face: FaceSet | None = None
    ) -> DirichletData:
        """Project ``func(x₁, x₂, x₃)`` on the boundary nodes onto the window modes."""
        from waveguide_calderon.spectral.fiber import fiber_project

        mesh = ctx.mesh
        x1 = ctx.x1_grid[:, None]
        nodes = mesh.vertices[mesh.boundary_nodes]
        values = np.zeros((ctx.n_x1, mesh.n_nodes), dtype=complex)
        values[:, mesh.boundary_nodes] = func(x1, nodes[None, :, 0], nodes[None, :, 1])
        coeffs = fiber_project(values, ctx).coefficients[:, mesh.boundary_nodes]
        if face is not None:
            keep = np.zeros(mesh.n_boundary, dtype=bool)
            keep[face.inner_nodes] = True
            coeffs[:, ~keep] = 0.0
        return cls(coeffs, ctx, face)


def _solve_real_factor(lu, rhs: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(rhs):
        return lu.solve(np.ascontiguousarray(rhs.real)) + 1j * lu.solve(
            np.ascontiguousarray(rhs.imag)
        )
    return lu.solve(np.ascontiguousarray(rhs))


class FiberOperator:
    """Assembled and factorized block system for one potential on one fiber.

    Row block n, column block n′ couples modes through V̂_{n−n′}; the diagonal
    blocks carry K + ωₙ² M. Unknowns are ordered mode-major.
    """

    def __init__(self, potential: PotentialField, ctx: FiberContext, *, check: bool = True) -> None:
        if potential.mesh is not ctx.mesh:
            raise DNMapMismatchError("potential and fiber context use different meshes")
        if check:
            potential.check_admissible()
        self.potential = potential
        self.ctx = ctx
        mesh = ctx.mesh
        n, nm = mesh.n_nodes, ctx.n_modes
        started = time.perf_counter()

        coupling = {}
        for m in range(-min(potential.bandwidth, nm - 1), min(potential.bandwidth, nm - 1) + 1):
            field = potential.mode(m)
            if np.any(field != 0):
                coupling[m] = mesh.weighted_mass(field)
        blocks: list[list[sp.spmatrix | None]] = [[None] * nm for _ in range(nm)]
        for a in range(nm):
            for b in range(nm):
                block = coupling.get(a - b)
                if a == b:
                    diag = mesh.stiffness + ctx.frequencies[a] ** 2 * mesh.mass
                    block = diag if block is None else diag + block
                blocks[a][b] = block
        self.matrix = sp.bmat(blocks, format="csr").astype(complex)

        offsets = (np.arange(nm) * n)[:, None]
        self.interior = (offsets + mesh.interior_nodes[None, :]).ravel()
        self.boundary = (offsets + mesh.boundary_nodes[None, :]).ravel()
        self._a_ii = self.matrix[self.interior][:, self.interior].tocsc()
        self._a_ib = self.matrix[self.interior][:, self.boundary].tocsc()
        self._a_bx = self.matrix[self.boundary]
        try:
            self._lu = splu(self._a_ii)
        except RuntimeError as exc:
            raise SolverError(
                "fiber system is singular (0 may lie in the spectrum)",
                condition_estimate=float("inf"),
            ) from exc
        bn = mesh.boundary_nodes
        self._boundary_lu = splu(mesh.boundary_mass[bn][:, bn].tocsc())
        self._mass_blocks = sp.block_diag([mesh.mass] * nm, format="csr")
        logger.debug(
            "fiber operator θ=%.4f window %d±%d: %d unknowns, factorized in %.2fs",
            ctx.theta,
            ctx.center,
            ctx.K,
            len(self.interior),
            time.perf_counter() - started,
        )

    def condition_estimate(self) -> float:
        """1-norm condition estimate of the interior block."""
        size = self._a_ii.shape[0]
        inverse = LinearOperator(
            (size, size),
            matvec=self._lu.solve,
            rmatvec=lambda x: self._lu.solve(x, trans="H"),
            dtype=complex,
        )
        return float(onenormest(self._a_ii) * onenormest(inverse))

    def solve_many(self, traces: np.ndarray, sources: np.ndarray | None = None) -> np.ndarray:
        """Solve for many boundary traces at once.

        ``traces`` has shape ``(n_modes * n_boundary, ncols)``; ``sources`` (optional)
        has shape ``(n_modes * n_nodes, ncols)``. Returns full nodal coefficients.
        """
        traces = np.asarray(traces, dtype=complex)
        rhs = -(self._a_ib @ traces)
        if sources is not None:
            rhs = rhs + (self._mass_blocks @ sources)[self.interior]
        interior = self._lu.solve(np.ascontiguousarray(rhs))
        if not np.all(np.isfinite(interior)):
            raise SolverError(
                "fiber solve produced non-finite values",
                condition_estimate=self.condition_estimate(),
            )
        out = np.zeros((self.matrix.shape[0], traces.shape[1]), dtype=complex)
        out[self.interior] = interior
        out[self.boundary] = traces
        return out

    def flux_many(self, solutions: np.ndarray, sources: np.ndarray | None = None) -> np.ndarray:
        """Variational normal derivative at boundary nodes for each column."""
        residual = self._a_bx @ solutions
        if sources is not None:
            residual = residual - (self._mass_blocks @ sources)[self.boundary]
        nm, nb = self.ctx.n_modes, self.ctx.mesh.n_boundary
        per_mode = residual.reshape(nm, nb, -1).transpose(1, 0, 2).reshape(nb, -1)
        flux = _solve_real_factor(self._boundary_lu, per_mode)
        return flux.reshape(nb, nm, -1).transpose(1, 0, 2).reshape(nm * nb, -1)

    def solve(
        self, trace: DirichletData | None = None, source: ModeExpansion | None = None
    ) -> ModeExpansion:
        ctx = self.ctx
        if trace is not None and not trace.ctx.same_fiber(ctx):
            raise DNMapMismatchError("Dirichlet data belongs to a different fiber")
        column = (
            np.zeros((ctx.n_modes * ctx.mesh.n_boundary, 1), dtype=complex)
            if trace is None
            else trace.coefficients.reshape(-1, 1)
        )
        src = None if source is None else source.coefficients.reshape(-1, 1)
        full = self.solve_many(column, src)
        return ModeExpansion(full.reshape(ctx.n_modes, ctx.mesh.n_nodes), ctx)

    def flux(self, solution: ModeExpansion, source: ModeExpansion | None = None) -> np.ndarray:
        """Normal derivative per mode at boundary loop positions."""
        src = None if source is None else source.coefficients.reshape(-1, 1)
        flux = self.flux_many(solution.coefficients.reshape(-1, 1), src)
        return flux.reshape(self.ctx.n_modes, self.ctx.mesh.n_boundary)

    def residual_norm(self, solution: ModeExpansion, source: ModeExpansion | None = None) -> float:
        """Relative interior residual of (−Δ + V)v = source."""
        u = solution.coefficients.reshape(-1)
        full = self.matrix @ u
        lhs = full[self.interior]
        rhs = np.zeros_like(lhs)
        if source is not None:
            rhs = (self._mass_blocks @ source.coefficients.reshape(-1))[self.interior]
        scale = max(float(np.abs(full).max()), float(np.abs(rhs).max()), 1e-300)
        return float(np.abs(lhs - rhs).max() / scale)


def solve_fibered_bvp(
    potential: PotentialField,
    ctx: FiberContext,
    trace: DirichletData | None = None,
    source: ModeExpansion | None = None,
) -> ModeExpansion:
    """Solve (−Δ + V)v = source on the cell with v = g on Γ̌ and θ-quasi-periodic ends."""
    return FiberOperator(potential, ctx).solve(trace, source)
