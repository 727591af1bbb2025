"""Partial Dirichlet-to-Neumann maps, their Gram matrices and difference norms."""

from __future__ import annotations

import hashlib
import logging
import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh

from waveguide_calderon.errors import DNMapMismatchError
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.forward.solver import FiberOperator
from waveguide_calderon.geometry.faces import BoundaryPartition, FaceSet
from waveguide_calderon.models import DNSupResult, FiberNorm
from waveguide_calderon.parallel import parallel_map
from waveguide_calderon.spectral.fiber import FiberContext

logger = logging.getLogger(__name__)

NORM_CONVENTION = "input:L2-harmonic-lift;output:L2-lumped-edge"
DENSE_EIGEN_LIMIT = 2000
_COLUMN_CHUNK = 256
# factorized fiber operator pairs kept per SimulatedDNData, least recently used first out
OPERATOR_CACHE_SIZE = 8


def _face_hash(face: FaceSet) -> str:
    return hashlib.sha256(np.packbits(face.mask).tobytes()).hexdigest()[:12]


@dataclass(frozen=True)
class DNMapMetadata:
    """Identity of a DN map: fiber, window, mesh, faces and potential."""

    theta: float
    K: int
    center: int
    mesh_hash: str
    input_face: str
    output_face: str
    potential_hash: str
    norm_convention: str = NORM_CONVENTION

    def compatible(self, other: DNMapMetadata) -> bool:
        return (
            self.theta == other.theta
            and self.K == other.K
            and self.center == other.center
            and self.mesh_hash == other.mesh_hash
            and self.input_face == other.input_face
            and self.output_face == other.output_face
            and self.norm_convention == other.norm_convention
        )

    def as_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


@dataclass(frozen=True, eq=False)
class PartialDNMap:
    """Matrix of Λ_{V,θ}: hat-function inputs on F′ × modes → fluxes on G′ × modes.

    Columns and rows are ordered mode-major. ``gram`` defines the input norm
    (L² norm of the harmonic lift); ``output_weights`` the L²(Ǧ) quadrature.
    """

    matrix: np.ndarray
    gram: np.ndarray
    output_weights: np.ndarray
    input_positions: np.ndarray
    output_positions: np.ndarray
    metadata: DNMapMetadata

    @property
    def n_inputs(self) -> int:
        return self.matrix.shape[1]

    def apply(self, coefficients: np.ndarray) -> np.ndarray:
        return self.matrix @ coefficients

    def input_norm(self, coefficients: np.ndarray) -> float:
        c = np.asarray(coefficients)
        return math.sqrt(max(float(np.real(c.conj() @ self.gram @ c)), 0.0))

    def output_norm(self, values: np.ndarray) -> float:
        return math.sqrt(float(np.sum(self.output_weights * np.abs(values) ** 2)))


def _input_traces(ctx: FiberContext, positions: np.ndarray) -> np.ndarray:
    nm, nb = ctx.n_modes, ctx.mesh.n_boundary
    columns = nm * len(positions)
    traces = np.zeros((nm * nb, columns), dtype=complex)
    rows = (np.arange(nm)[:, None] * nb + positions[None, :]).ravel()
    traces[rows, np.arange(columns)] = 1.0
    return traces


def compute_gram(
    ctx: FiberContext, input_face: FaceSet, operator: FiberOperator | None = None
) -> np.ndarray:
    """Gram matrix of the hat-function inputs in the harmonic-lift L² norm."""
    lift = operator or FiberOperator(PotentialField.zeros(ctx.mesh), ctx)
    traces = _input_traces(ctx, input_face.inner_nodes)
    mass = lift._mass_blocks
    columns = traces.shape[1]
    lifts = []
    for start in range(0, columns, _COLUMN_CHUNK):
        lifts.append(lift.solve_many(traces[:, start : start + _COLUMN_CHUNK]))
    stacked = np.concatenate(lifts, axis=1)
    gram = stacked.conj().T @ (mass @ stacked)
    return 0.5 * (gram + gram.conj().T)


def assemble_partial_dn(
    potential: PotentialField,
    ctx: FiberContext,
    input_face: FaceSet,
    output_face: FaceSet,
    *,
    gram: np.ndarray | None = None,
    operator: FiberOperator | None = None,
) -> PartialDNMap:
    """Assemble Λ_{V,θ} column by column against one shared factorization."""
    op = operator or FiberOperator(potential, ctx)
    positions_in = input_face.inner_nodes
    positions_out = output_face.touching_nodes
    nm, nb = ctx.n_modes, ctx.mesh.n_boundary
    traces = _input_traces(ctx, positions_in)
    out_rows = (np.arange(nm)[:, None] * nb + positions_out[None, :]).ravel()

    blocks = []
    for start in range(0, traces.shape[1], _COLUMN_CHUNK):
        chunk = traces[:, start : start + _COLUMN_CHUNK]
        blocks.append(op.flux_many(op.solve_many(chunk))[out_rows])
    matrix = np.concatenate(blocks, axis=1)
    if gram is None:
        gram = compute_gram(ctx, input_face)
    weights = np.tile(output_face.node_weights[positions_out], nm)
    metadata = DNMapMetadata(
        theta=ctx.theta,
        K=ctx.K,
        center=ctx.center,
        mesh_hash=ctx.mesh.mesh_hash,
        input_face=_face_hash(input_face),
        output_face=_face_hash(output_face),
        potential_hash=potential.content_hash,
    )
    logger.debug("assembled DN map %s with %d inputs", metadata.potential_hash, matrix.shape[1])
    return PartialDNMap(matrix, gram, weights, positions_in, positions_out, metadata)


def full_boundary_dn(potential: PotentialField, ctx: FiberContext) -> PartialDNMap:
    """DN map with every boundary node as input and output (diagnostics)."""
    full = BoundaryPartition.full_boundary(ctx.mesh)
    return assemble_partial_dn(potential, ctx, full.input_face, full.output_face)


def largest_generalized_eigenvalue(h: np.ndarray, gram: np.ndarray) -> float:
    """Top eigenvalue of the Hermitian pencil (h, gram), gram positive definite."""
    n = h.shape[0]
    if n <= DENSE_EIGEN_LIMIT:
        top = eigh(h, gram, eigvals_only=True, subset_by_index=[n - 1, n - 1])
        return float(top[0])
    factor = cho_factor(gram)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(n) + 0j
    mu = 0.0
    for _ in range(1000):
        y = cho_solve(factor, h @ x)
        norm = math.sqrt(max(float(np.real(y.conj() @ gram @ y)), 1e-300))
        x = y / norm
        new = float(np.real(x.conj() @ h @ x))
        if abs(new - mu) <= 1e-12 * max(abs(new), 1e-300):
            return new
        mu = new
    logger.warning("power iteration stopped before converging (μ = %.6g)", mu)
    return mu


def dn_difference_norm(first: PartialDNMap, second: PartialDNMap) -> float:
    """Operator norm of Λ₁ − Λ₂ from the harmonic-lift norm into L²(Ǧ)."""
    if not first.metadata.compatible(second.metadata):
        raise DNMapMismatchError("DN maps differ in fiber, mesh, faces or norm convention")
    diff = first.matrix - second.matrix
    if not np.any(diff):
        return 0.0
    h = diff.conj().T @ (first.output_weights[:, None] * diff)
    h = 0.5 * (h + h.conj().T)
    return math.sqrt(max(largest_generalized_eigenvalue(h, first.gram), 0.0))


def dn_sup_over_fibers(
    first: PotentialField,
    second: PotentialField,
    thetas: list[float] | np.ndarray,
    input_face: FaceSet,
    output_face: FaceSet,
    K: int,
    *,
    workers: int = 1,
) -> DNSupResult:
    """sup over the θ-grid of the fiber DN difference norms."""
    thetas = [float(t) for t in thetas]
    if not thetas:
        raise ValueError("θ-grid must not be empty")
    mesh = first.mesh

    def one(theta: float) -> FiberNorm:
        ctx = FiberContext(theta, K, mesh)
        gram = compute_gram(ctx, input_face)
        a = assemble_partial_dn(first, ctx, input_face, output_face, gram=gram)
        b = assemble_partial_dn(second, ctx, input_face, output_face, gram=gram)
        return FiberNorm(theta=theta, gamma=dn_difference_norm(a, b))

    fibers = parallel_map(one, thetas, workers)
    best = max(fibers, key=lambda f: f.gamma)
    return DNSupResult(gamma=best.gamma, theta_max=best.theta, fibers=fibers)


@dataclass(frozen=True, eq=False)
class SimulatedDNData:
    """Boundary measurements (Λ_{V₂} − Λ_{V₁}) simulated from two potentials.

    The data can be applied on any mode window. Factorized operators are kept
    for the OPERATOR_CACHE_SIZE most recently used windows.
    """

    first: PotentialField
    second: PotentialField
    partition: BoundaryPartition
    _operators: OrderedDict[tuple[float, int, int], tuple[FiberOperator, FiberOperator]] = field(
        default_factory=OrderedDict, repr=False
    )
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def mesh(self):
        return self.first.mesh

    def operators(self, ctx: FiberContext) -> tuple[FiberOperator, FiberOperator]:
        key = (ctx.theta, ctx.K, ctx.center)
        with self._lock:
            pair = self._operators.get(key)
            if pair is None:
                pair = (FiberOperator(self.first, ctx), FiberOperator(self.second, ctx))
                self._operators[key] = pair
                while len(self._operators) > OPERATOR_CACHE_SIZE:
                    self._operators.popitem(last=False)
            else:
                self._operators.move_to_end(key)
        return pair

    def solutions(self, ctx: FiberContext, trace: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Solve both problems with the trace ``(n_modes, n_boundary)``."""
        op1, op2 = self.operators(ctx)
        column = np.asarray(trace, dtype=complex).reshape(-1, 1)
        return op1.solve_many(column)[:, 0], op2.solve_many(column)[:, 0]

    def apply(self, ctx: FiberContext, trace: np.ndarray) -> np.ndarray:
        """(Λ_{V₂} − Λ_{V₁}) f at every boundary node, shape ``(n_modes, n_boundary)``."""
        op1, op2 = self.operators(ctx)
        w1, w2 = self.solutions(ctx, trace)
        flux = op2.flux_many(w2[:, None]) - op1.flux_many(w1[:, None])
        return flux.reshape(ctx.n_modes, ctx.mesh.n_boundary)

    def gamma(self, ctx: FiberContext) -> float:
        """‖Λ_{V₁,θ} − Λ_{V₂,θ}‖ on the window of ``ctx``."""
        op1, op2 = self.operators(ctx)
        face_in, face_out = self.partition.input_face, self.partition.output_face
        gram = compute_gram(ctx, face_in)
        a = assemble_partial_dn(self.first, ctx, face_in, face_out, gram=gram, operator=op1)
        b = assemble_partial_dn(self.second, ctx, face_in, face_out, gram=gram, operator=op2)
        return dn_difference_norm(a, b)
