"""Tests for partial DN maps and their difference norms."""

from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.sparse as sp

from waveguide_calderon.errors import DNMapMismatchError
from waveguide_calderon.forward.dnmap import (
    OPERATOR_CACHE_SIZE,
    SimulatedDNData,
    assemble_partial_dn,
    compute_gram,
    dn_difference_norm,
    dn_sup_over_fibers,
    full_boundary_dn,
)
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.geometry.faces import BoundaryPartition
from waveguide_calderon.geometry.mesh import (
    CrossSectionKind,
    CrossSectionMesh,
    CrossSectionSpec,
    build_mesh,
)
from waveguide_calderon.oracle.analytic import disk_dn_analytic
from waveguide_calderon.spectral.fiber import FiberContext


def _pair(
    ctx: FiberContext, first: PotentialField, second: PotentialField, partition: BoundaryPartition
):
    gram = compute_gram(ctx, partition.input_face)
    a = assemble_partial_dn(first, ctx, partition.input_face, partition.output_face, gram=gram)
    b = assemble_partial_dn(second, ctx, partition.input_face, partition.output_face, gram=gram)
    return a, b


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------


def test_matrix_shape(disk_mesh: CrossSectionMesh, partition: BoundaryPartition) -> None:
    ctx = FiberContext(0.0, 1, disk_mesh)
    dn = assemble_partial_dn(
        PotentialField.zeros(disk_mesh), ctx, partition.input_face, partition.output_face
    )
    n_in = len(partition.input_face.inner_nodes)
    n_out = len(partition.output_face.touching_nodes)
    assert dn.matrix.shape == (3 * n_out, 3 * n_in)
    assert dn.n_inputs == 3 * n_in
    assert dn.output_weights.shape == (3 * n_out,)


def test_gram_is_positive_definite(
    disk_mesh: CrossSectionMesh, partition: BoundaryPartition
) -> None:
    gram = compute_gram(FiberContext(0.4, 1, disk_mesh), partition.input_face)
    assert np.allclose(gram, gram.conj().T)
    assert np.linalg.eigvalsh(gram).min() > 0


def test_constants_have_zero_flux(disk_mesh: CrossSectionMesh) -> None:
    """Λ₀ annihilates the constant zero mode on the full boundary at θ = 0."""
    ctx = FiberContext(0.0, 1, disk_mesh)
    dn = full_boundary_dn(PotentialField.zeros(disk_mesh), ctx)
    nb = disk_mesh.n_boundary
    constant = np.zeros(dn.n_inputs, dtype=complex)
    constant[nb : 2 * nb] = 1.0
    assert np.abs(dn.apply(constant)).max() < 1e-9


def test_full_dn_is_self_adjoint(
    disk_mesh: CrossSectionMesh, cos_potential: PotentialField
) -> None:
    """The consistent boundary mass times Λ is Hermitian for real V."""
    ctx = FiberContext(0.7, 1, disk_mesh)
    dn = full_boundary_dn(cos_potential, ctx)
    bn = disk_mesh.boundary_nodes
    bmass = sp.block_diag([disk_mesh.boundary_mass[bn][:, bn]] * ctx.n_modes).toarray()
    weighted = bmass @ dn.matrix
    assert np.allclose(weighted, weighted.conj().T, atol=1e-8 * np.abs(weighted).max())


@pytest.fixture(scope="module")
def resolved_disk_mesh() -> CrossSectionMesh:
    return build_mesh(
        CrossSectionSpec(kind=CrossSectionKind.DISK, radius=1.0, h=0.05, boundary_points=256)
    )


@pytest.mark.slow
def test_disk_dn_matches_bessel_ratios(resolved_disk_mesh: CrossSectionMesh) -> None:
    """Λ_c e^{imφ} = κ I_m′(κ)/I_m(κ) e^{imφ} on the unit disk, mode 0 at θ = 0."""
    mesh = resolved_disk_mesh
    ctx = FiberContext(0.0, 1, mesh)
    dn = full_boundary_dn(PotentialField.constant(mesh, 1.0), ctx)
    nb = mesh.n_boundary
    block = dn.matrix[nb : 2 * nb, nb : 2 * nb]
    bn = mesh.boundary_nodes
    bmass = mesh.boundary_mass[bn][:, bn]
    angles = np.arctan2(mesh.vertices[bn, 1], mesh.vertices[bn, 0])
    for m in range(5):
        wave = np.exp(1j * m * angles)
        weighted = bmass @ wave
        value = np.real(weighted.conj() @ (block @ wave)) / np.real(weighted.conj() @ wave)
        assert value == pytest.approx(disk_dn_analytic(1.0, 1.0, 0, m), rel=0.01)


def test_metadata_records_the_fiber(
    disk_mesh: CrossSectionMesh, partition: BoundaryPartition, unit_potential: PotentialField
) -> None:
    ctx = FiberContext(1.25, 1, disk_mesh)
    dn = assemble_partial_dn(unit_potential, ctx, partition.input_face, partition.output_face)
    meta = dn.metadata.as_dict()
    assert meta["theta"] == 1.25
    assert meta["K"] == 1
    assert meta["mesh_hash"] == disk_mesh.mesh_hash
    assert meta["potential_hash"] == unit_potential.content_hash


# ---------------------------------------------------------------------------
# Difference norms
# ---------------------------------------------------------------------------


class TestDifferenceNorm:
    def test_identical_potentials(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        cos_potential: PotentialField,
    ) -> None:
        a, b = _pair(FiberContext(0.0, 1, disk_mesh), cos_potential, cos_potential, partition)
        assert dn_difference_norm(a, b) == 0.0

    def test_distinct_potentials_are_separated(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        cos_potential: PotentialField,
        unit_potential: PotentialField,
    ) -> None:
        a, b = _pair(FiberContext(0.0, 1, disk_mesh), cos_potential, unit_potential, partition)
        forward = dn_difference_norm(a, b)
        assert forward > 0
        assert dn_difference_norm(b, a) == pytest.approx(forward, rel=1e-10)

    def test_norm_bounds_every_input(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        cos_potential: PotentialField,
        unit_potential: PotentialField,
    ) -> None:
        a, b = _pair(FiberContext(0.5, 1, disk_mesh), cos_potential, unit_potential, partition)
        gamma = dn_difference_norm(a, b)
        rng = np.random.default_rng(11)
        for _ in range(5):
            f = rng.standard_normal(a.n_inputs) + 1j * rng.standard_normal(a.n_inputs)
            ratio = a.output_norm(a.apply(f) - b.apply(f)) / a.input_norm(f)
            assert ratio <= gamma * (1 + 1e-8)

    def test_incompatible_fibers(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        unit_potential: PotentialField,
    ) -> None:
        faces = (partition.input_face, partition.output_face)
        a = assemble_partial_dn(unit_potential, FiberContext(0.0, 1, disk_mesh), *faces)
        b = assemble_partial_dn(unit_potential, FiberContext(1.0, 1, disk_mesh), *faces)
        with pytest.raises(DNMapMismatchError):
            dn_difference_norm(a, b)

    def test_sup_over_fibers(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        cos_potential: PotentialField,
        unit_potential: PotentialField,
    ) -> None:
        thetas = [0.0, math.pi / 2, math.pi]
        result = dn_sup_over_fibers(
            cos_potential, unit_potential, thetas, partition.input_face, partition.output_face, 1
        )
        assert [f.theta for f in result.fibers] == thetas
        assert result.gamma == max(f.gamma for f in result.fibers)
        assert result.theta_max in thetas
        assert result.spread >= 1.0

    def test_sup_independent_of_workers(
        self,
        partition: BoundaryPartition,
        cos_potential: PotentialField,
        unit_potential: PotentialField,
    ) -> None:
        args = (
            cos_potential,
            unit_potential,
            [0.0, 1.0, 2.0],
            partition.input_face,
            partition.output_face,
            1,
        )
        serial = dn_sup_over_fibers(*args)
        threaded = dn_sup_over_fibers(*args, workers=3)
        assert [f.gamma for f in threaded.fibers] == [f.gamma for f in serial.fibers]

    def test_sup_rejects_empty_grid(
        self, partition: BoundaryPartition, unit_potential: PotentialField
    ) -> None:
        with pytest.raises(ValueError, match="empty"):
            dn_sup_over_fibers(
                unit_potential, unit_potential, [], partition.input_face, partition.output_face, 1
            )


# ---------------------------------------------------------------------------
# Simulated measurements
# ---------------------------------------------------------------------------


class TestSimulatedData:
    def test_gamma_matches_direct_assembly(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        cos_potential: PotentialField,
        unit_potential: PotentialField,
    ) -> None:
        ctx = FiberContext(0.0, 1, disk_mesh)
        data = SimulatedDNData(cos_potential, unit_potential, partition)
        a, b = _pair(ctx, cos_potential, unit_potential, partition)
        assert data.gamma(ctx) == pytest.approx(dn_difference_norm(a, b), rel=1e-10)

    def test_apply_is_difference_of_fluxes(
        self,
        disk_mesh: CrossSectionMesh,
        full_partition: BoundaryPartition,
        cos_potential: PotentialField,
        unit_potential: PotentialField,
    ) -> None:
        ctx = FiberContext(0.3, 1, disk_mesh)
        data = SimulatedDNData(cos_potential, unit_potential, full_partition)
        rng = np.random.default_rng(5)
        trace = rng.standard_normal((ctx.n_modes, disk_mesh.n_boundary)) + 0j
        applied = data.apply(ctx, trace)
        first = full_boundary_dn(cos_potential, ctx)
        second = full_boundary_dn(unit_potential, ctx)
        expected = (second.matrix - first.matrix) @ trace.reshape(-1)
        assert applied.shape == trace.shape
        assert np.allclose(applied.reshape(-1), expected, atol=1e-9)

    def test_operators_are_cached(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        unit_potential: PotentialField,
    ) -> None:
        ctx = FiberContext(0.0, 1, disk_mesh)
        data = SimulatedDNData(unit_potential, unit_potential, partition)
        assert data.operators(ctx) is data.operators(FiberContext(0.0, 1, disk_mesh))

    def test_operator_cache_is_bounded(
        self,
        disk_mesh: CrossSectionMesh,
        partition: BoundaryPartition,
        unit_potential: PotentialField,
    ) -> None:
        data = SimulatedDNData(unit_potential, unit_potential, partition)
        first = data.operators(FiberContext(0.0, 1, disk_mesh))
        for step in range(1, OPERATOR_CACHE_SIZE + 3):
            data.operators(FiberContext(0.1 * step, 1, disk_mesh))
        assert len(data._operators) == OPERATOR_CACHE_SIZE
        assert data.operators(FiberContext(0.0, 1, disk_mesh)) is not first
