"""Tests for the finite-difference, quadrature and divergence-form oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest

from waveguide_calderon.conductivity import build_conductivity, sigma_from_lambda
from waveguide_calderon.config import ConductivityKind, ConductivityPreset, ExperimentConfig
from waveguide_calderon.forward.dnmap import assemble_partial_dn
from waveguide_calderon.forward.potential import PotentialField, smooth_random_function
from waveguide_calderon.forward.solver import DirichletData, solve_fibered_bvp
from waveguide_calderon.geometry.faces import BoundaryPartition
from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.oracle.analytic import disk_poincare_constant
from waveguide_calderon.oracle.derived import derived_examples
from waveguide_calderon.oracle.divergence import dense_poincare_constant, divergence_form_dn
from waveguide_calderon.oracle.fd import DenseGrid, dense_grid_for_disk, fd_solve, relative_l2
from waveguide_calderon.oracle.quadrature import (
    cell_integral,
    fourier_coefficient,
    nodal_callable,
    volume_pairing_oracle,
)
from waveguide_calderon.spectral.fiber import FiberContext, fiber_project


def _zero(x1, x2, x3):
    return 0.0 * x1


def _linear(x1, x2, x3):
    return 1.0 + x2 - 0.5 * x3 + 0.0 * x1


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------


class TestDenseGrid:
    def test_size_limit(self) -> None:
        with pytest.raises(ValueError, match="limited"):
            dense_grid_for_disk(1.0, 41)

    def test_empty_cross_section(self) -> None:
        with pytest.raises(ValueError, match="inside"):
            DenseGrid(4, 8, 1.0, lambda x2, x3: x2 > 10.0)

    def test_outer_ring_is_outside(self) -> None:
        grid = dense_grid_for_disk(1.0, 21)
        assert not grid.mask[0].any()
        assert grid.half_width > 1.0


def test_fd_reproduces_linear_fields() -> None:
    grid = dense_grid_for_disk(1.0, 15, 6)
    solution = fd_solve(grid, _zero, 0.0, _linear)
    x1, x2, x3 = grid.coordinates()
    expected = _linear(x1, x2, x3)[:, grid.mask]
    assert relative_l2(solution.interior_values(), expected) < 1e-10


def test_relative_l2_of_zero_reference() -> None:
    assert relative_l2(np.ones(3), np.zeros(3)) == math.inf


def _manufactured(x1, x2, x3):
    return 1.0 + x2 - 0.5 * x3**2 + 0.3 * np.cos(2.0 * math.pi * x1) * x2


def _minus_laplacian(x1, x2, x3):
    return 1.0 + 1.2 * math.pi**2 * np.cos(2.0 * math.pi * x1) * x2


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_fd_agrees_with_galerkin(fine_disk_mesh: CrossSectionMesh, seed: int) -> None:
    """Both discretizations of (−Δ + V)u = f agree for a smooth random V.

    f and the wall data come from a closed-form u, so the staircase wall of the
    grid sees the exact extension and only interior truncation remains.
    """
    shape = smooth_random_function(seed)

    def potential(x1, x2, x3):
        return 1.5 + shape(x1, x2, x3)

    def source(x1, x2, x3):
        return _minus_laplacian(x1, x2, x3) + potential(x1, x2, x3) * _manufactured(x1, x2, x3)

    mesh = fine_disk_mesh
    ctx = FiberContext(0.0, 2, mesh)
    x1 = ctx.x1_grid[:, None]
    load = fiber_project(source(x1, mesh.vertices[None, :, 0], mesh.vertices[None, :, 1]), ctx)
    galerkin = solve_fibered_bvp(
        PotentialField.from_function(mesh, potential, bandwidth=1),
        ctx,
        DirichletData.from_function(ctx, _manufactured),
        load,
    )

    grid = dense_grid_for_disk(1.0, 25, 16)
    fd = fd_solve(grid, potential, 0.0, _manufactured, source).interior_values()
    x2, x3 = np.meshgrid(grid.x2, grid.x2, indexing="ij")
    points = np.stack([x2[grid.mask], x3[grid.mask]], axis=1)
    keep = mesh.contains(points)
    slices = ctx.basis(grid.x1) @ galerkin.coefficients
    reference = np.stack([mesh.interpolator(row)(points[keep]) for row in slices])
    assert relative_l2(fd[:, keep], reference) < 0.02


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


class TestQuadrature:
    def test_area(self, disk_mesh: CrossSectionMesh) -> None:
        area = float(disk_mesh.triangle_areas.sum())
        assert cell_integral(lambda x1, x2, x3: 1.0 + 0.0 * x2, disk_mesh) == pytest.approx(area)

    def test_second_moment_of_square(self, square_mesh: CrossSectionMesh) -> None:
        value = cell_integral(lambda x1, x2, x3: x2**2 + 0.0 * x1, square_mesh)
        assert value == pytest.approx(1.0 / 12.0, rel=1e-12)

    def test_axial_fourier_coefficient(self, square_mesh: CrossSectionMesh) -> None:
        def wave(x1, x2, x3):
            return np.exp(2j * math.pi * x1) + 0.0 * x2

        assert fourier_coefficient(wave, square_mesh, 1, (0.0, 0.0)) == pytest.approx(1.0)
        assert abs(fourier_coefficient(wave, square_mesh, 0, (0.0, 0.0))) < 1e-12

    def test_volume_pairing(self, square_mesh: CrossSectionMesh) -> None:
        one = lambda x1, x2, x3: 1.0 + 0.0 * x2  # noqa: E731
        phase = lambda x1, x2, x3: np.exp(1j * x2) + 0.0 * x1  # noqa: E731
        assert volume_pairing_oracle(one, phase, phase, square_mesh) == pytest.approx(1.0)

    def test_nodal_callable_is_linear_exact(self, disk_mesh: CrossSectionMesh) -> None:
        field = nodal_callable(
            disk_mesh, lambda x1: np.outer(1.0 + x1, disk_mesh.vertices[:, 0])
        )
        values = field(np.array([0.0, 1.0]), np.array([0.1, -0.2]), np.array([0.2, 0.3]))
        assert np.allclose(values, [[0.1, -0.2], [0.2, -0.4]])


# ---------------------------------------------------------------------------
# Divergence form and dense eigensolve
# ---------------------------------------------------------------------------


def test_unit_conductivity_matches_schrodinger_dn(
    disk_mesh: CrossSectionMesh, partition: BoundaryPartition
) -> None:
    ctx = FiberContext(0.4, 1, disk_mesh)
    dn = assemble_partial_dn(
        PotentialField.zeros(disk_mesh), ctx, partition.input_face, partition.output_face
    )
    oracle = divergence_form_dn(
        disk_mesh,
        lambda x1, x2, x3: 1.0 + 0.0 * x1,
        0.4,
        1,
        dn.input_positions,
        dn.output_positions,
    )
    assert np.allclose(oracle, dn.matrix, atol=1e-8 * np.abs(dn.matrix).max())


@pytest.mark.slow
def test_sigma_identity_matches_divergence_form(fine_disk_mesh: CrossSectionMesh) -> None:
    """a^{1/2}Λ_{V_a}a^{1/2} − ½∂_νa agrees with −div(a∇·) on smooth traces."""
    mesh = fine_disk_mesh
    preset = ConductivityPreset(kind=ConductivityKind.EXPONENTIAL, value=1.0, beta=0.5)
    a = build_conductivity(preset, mesh, a_star=0.5, bound_plus=2.0, bound_minus=1.0)
    full = BoundaryPartition.full_boundary(mesh)
    ctx = FiberContext(0.3, 1, mesh)
    sigma = sigma_from_lambda(a, ctx, full.input_face, full.output_face)
    dn = sigma.dn
    oracle = divergence_form_dn(mesh, a.func, 0.3, 1, dn.input_positions, dn.output_positions)

    nodes = mesh.vertices[mesh.boundary_nodes[dn.input_positions]]
    angles = np.arctan2(nodes[:, 1], nodes[:, 0])
    count = len(angles)
    for m in range(1, 4):
        for mode in range(ctx.n_modes):
            trace = np.zeros(ctx.n_modes * count, dtype=complex)
            trace[mode * count : (mode + 1) * count] = np.exp(1j * m * angles)
            expected = oracle @ trace
            gap = dn.output_norm(sigma.apply(trace) - expected)
            assert gap < 0.02 * dn.output_norm(expected)


def test_dense_poincare_matches_sparse(disk_mesh: CrossSectionMesh) -> None:
    assert dense_poincare_constant(disk_mesh) == pytest.approx(
        disk_mesh.poincare_constant, rel=1e-8
    )


# ---------------------------------------------------------------------------
# Derived examples
# ---------------------------------------------------------------------------


def test_derived_examples(experiment: ExperimentConfig) -> None:
    rows = {row.name: row for row in derived_examples(experiment)}
    assert rows["poincare_constant"].value == pytest.approx(disk_poincare_constant())
    for m in range(5):
        assert rows[f"disk_dn[c=0,k=0,m={m}]"].value == m
    assert "disk_dn[c=1,k=0,m=0]" in rows
    assert "disk_fourier_transform[cgo.eta]" in rows
    assert rows["exponential_liouville[beta=1]"].value == 0.25
    assert {"recover_coefficient.re", "recover_coefficient.im"} <= set(rows)
    assert all(row.source for row in rows.values())
