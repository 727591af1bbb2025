"""Tests for conductivities, the Liouville transform and Σ_a."""

from __future__ import annotations

import math

import numpy as np
import pytest

from waveguide_calderon.conductivity import (
    ConductivityField,
    admissibility_check,
    alpha_fields,
    boundary_multiplier,
    build_conductivity,
    bump_shape,
    check_compatibility,
    conductivity_ladder,
    conductivity_stability,
    discrete_liouville_samples,
    liouville_potential,
    liouville_samples,
    normal_derivative,
    sigma_difference_norm,
    sigma_from_lambda,
)
from waveguide_calderon.config import ConductivityKind, ConductivityPreset
from waveguide_calderon.errors import AdmissibilityError, CompatibilityError
from waveguide_calderon.forward.dnmap import assemble_partial_dn
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.geometry.faces import BoundaryPartition
from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.recon.norms import h1_norm
from waveguide_calderon.spectral.fiber import FiberContext

BOUNDS = {"a_star": 0.5, "bound_plus": 2.0, "bound_minus": 1.0}
BUMPED = ConductivityPreset(
    kind=ConductivityKind.BUMP_FAMILY, value=1.0, amplitude=0.03, radius=0.6, axial=True
)
OFFSET = ConductivityPreset(
    kind=ConductivityKind.BUMP_FAMILY, value=1.0, amplitude=1.0, radius=0.5, center=(0.2, 0.1)
)
CONSTANT = ConductivityPreset(kind=ConductivityKind.CONSTANT, value=1.0)
RAISED = ConductivityPreset(kind=ConductivityKind.CONSTANT, value=1.5)
TILTED = ConductivityPreset(kind=ConductivityKind.EXPONENTIAL, value=1.0, beta=0.5)


def _constant(mesh: CrossSectionMesh, value: float, name: str = "a") -> ConductivityField:
    preset = ConductivityPreset(kind=ConductivityKind.CONSTANT, value=value)
    return build_conductivity(preset, mesh, name=name, **BOUNDS)


def _exponential(mesh: CrossSectionMesh, beta: float) -> ConductivityField:
    preset = ConductivityPreset(kind=ConductivityKind.EXPONENTIAL, value=1.0, beta=beta)
    return build_conductivity(preset, mesh, name="exp", **BOUNDS)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


class TestConductivityField:
    def test_floor_must_be_positive(self, disk_mesh: CrossSectionMesh) -> None:
        with pytest.raises(AdmissibilityError, match="a\\*"):
            ConductivityField(lambda x1, x2, x3: 1.0 + 0 * x2, disk_mesh, 0.0, 2.0, 1.0)

    def test_axial_dependence(self, disk_mesh: CrossSectionMesh) -> None:
        assert _constant(disk_mesh, 1.0).x1_independent
        bumped = build_conductivity(BUMPED, disk_mesh, **BOUNDS)
        assert not bumped.x1_independent

    def test_samples(self, disk_mesh: CrossSectionMesh) -> None:
        values = _constant(disk_mesh, 2.0).samples(np.array([0.0, 0.5]))
        assert values.shape == (2, disk_mesh.n_nodes)
        assert np.all(values == 2.0)

    def test_perturbed(self, disk_mesh: CrossSectionMesh) -> None:
        base = _constant(disk_mesh, 1.0)
        member = base.perturbed(bump_shape(BUMPED), 0.5)
        centre = member(np.array(0.0), np.array(0.0), np.array(0.0))
        assert float(centre) == pytest.approx(1.0 + 0.5 * 1.5)
        assert member.a_star == base.a_star

    def test_normal_derivative(self, disk_mesh: CrossSectionMesh) -> None:
        a = _exponential(disk_mesh, 1.0)
        derivative = normal_derivative(a, a.func, np.array([0.0]))[0]
        points = disk_mesh.vertices[disk_mesh.boundary_nodes]
        expected = disk_mesh.node_normals[:, 0] * np.exp(points[:, 0])
        assert np.allclose(derivative, expected, atol=1e-5)


# ---------------------------------------------------------------------------
# Liouville transform and admissibility
# ---------------------------------------------------------------------------


class TestLiouville:
    def test_constant_gives_zero_potential(self, disk_mesh: CrossSectionMesh) -> None:
        potential = liouville_potential(_constant(disk_mesh, 3.0))
        assert potential.bandwidth == 0
        assert potential.sup_norm < 1e-9

    @pytest.mark.parametrize("beta", [1.0, -0.6])
    def test_exponential(self, disk_mesh: CrossSectionMesh, beta: float) -> None:
        samples = liouville_samples(_exponential(disk_mesh, beta), np.array([0.0, 0.5]))
        assert np.allclose(samples, beta**2 / 4.0, rtol=1e-4)

    def test_admissible_constant(self, disk_mesh: CrossSectionMesh) -> None:
        report = admissibility_check(_constant(disk_mesh, 1.0))
        assert report.admissible
        assert report.w1_norm == pytest.approx(1.0)
        assert report.negative_part_sup == pytest.approx(0.0, abs=1e-9)

    def test_floor_violation(self, disk_mesh: CrossSectionMesh) -> None:
        report = admissibility_check(_constant(disk_mesh, 0.3))
        assert not report.floor
        assert not report.admissible

    def test_w1_violation(self, disk_mesh: CrossSectionMesh) -> None:
        report = admissibility_check(_exponential(disk_mesh, 2.0))
        assert not report.w1_bound
        assert report.w1_norm > 2.0


# ---------------------------------------------------------------------------
# Σ_a
# ---------------------------------------------------------------------------


def test_multiplier_of_constant(disk_mesh: CrossSectionMesh) -> None:
    ctx = FiberContext(0.0, 1, disk_mesh)
    multiplier = boundary_multiplier(ctx, np.full((ctx.n_x1, disk_mesh.n_boundary), 2.0))
    assert np.allclose(multiplier.toarray(), 2.0 * np.eye(ctx.n_modes * disk_mesh.n_boundary))


def test_multiplier_shape_checked(disk_mesh: CrossSectionMesh) -> None:
    ctx = FiberContext(0.0, 1, disk_mesh)
    with pytest.raises(ValueError, match="shape"):
        boundary_multiplier(ctx, np.ones((3, disk_mesh.n_boundary)))


def test_sigma_of_constant_scales_lambda(
    disk_mesh: CrossSectionMesh, partition: BoundaryPartition
) -> None:
    ctx = FiberContext(0.5, 1, disk_mesh)
    faces = (partition.input_face, partition.output_face)
    sigma = sigma_from_lambda(_constant(disk_mesh, 2.0), ctx, *faces)
    reference = assemble_partial_dn(PotentialField.zeros(disk_mesh), ctx, *faces)
    assert np.allclose(sigma.matrix, 2.0 * reference.matrix, atol=1e-9)


class TestCompatibility:
    def test_trace_mismatch(
        self, disk_mesh: CrossSectionMesh, full_partition: BoundaryPartition
    ) -> None:
        ctx = FiberContext(0.0, 1, disk_mesh)
        with pytest.raises(CompatibilityError) as info:
            check_compatibility(
                _constant(disk_mesh, 1.0),
                _constant(disk_mesh, 2.0),
                ctx,
                full_partition.input_face,
                full_partition.output_face,
            )
        assert info.value.condition == "trace"

    def test_normal_derivative_mismatch(
        self, disk_mesh: CrossSectionMesh, full_partition: BoundaryPartition
    ) -> None:
        ctx = FiberContext(0.0, 1, disk_mesh)
        bowl = ConductivityField(
            lambda x1, x2, x3: 1.0 + 0.1 * (1.0 - x2**2 - x3**2) + 0.0 * x1,
            disk_mesh,
            **BOUNDS,
        )
        with pytest.raises(CompatibilityError) as info:
            check_compatibility(
                _constant(disk_mesh, 1.0),
                bowl,
                ctx,
                full_partition.input_face,
                full_partition.output_face,
            )
        assert info.value.condition == "normal-derivative"

    def test_interior_bump_is_compatible(
        self, disk_mesh: CrossSectionMesh, partition: BoundaryPartition
    ) -> None:
        ctx = FiberContext(0.0, 1, disk_mesh)
        check_compatibility(
            _constant(disk_mesh, 1.0),
            build_conductivity(BUMPED, disk_mesh, **BOUNDS),
            ctx,
            partition.input_face,
            partition.output_face,
        )


@pytest.mark.parametrize(
    ("base", "shape", "s"),
    [
        (CONSTANT, BUMPED, 0.03),
        (RAISED, OFFSET, 0.2),
        (TILTED, BUMPED, 0.05),
        (TILTED, OFFSET, -0.1),
    ],
)
def test_sigma_difference_bounds_lambda_difference(
    disk_mesh: CrossSectionMesh,
    partition: BoundaryPartition,
    base: ConductivityPreset,
    shape: ConductivityPreset,
    s: float,
) -> None:
    first = build_conductivity(base, disk_mesh, **BOUNDS)
    report = sigma_difference_norm(
        first,
        first.perturbed(bump_shape(shape), s),
        FiberContext(0.0, 1, disk_mesh),
        partition.input_face,
        partition.output_face,
    )
    assert report.sigma_norm > 0
    assert report.inequality_holds


# ---------------------------------------------------------------------------
# Stability chain
# ---------------------------------------------------------------------------


def test_alpha_of_identical_pair(disk_mesh: CrossSectionMesh) -> None:
    a = _constant(disk_mesh, 1.0)
    direct, solved, residual = alpha_fields(a, a, 1)
    assert not np.any(direct.coefficients)
    assert not np.any(solved.coefficients)
    assert residual == 0.0


@pytest.mark.slow
def test_alpha_factorization(fine_disk_mesh: CrossSectionMesh) -> None:
    first = _constant(fine_disk_mesh, 1.0)
    second = build_conductivity(BUMPED, fine_disk_mesh, **BOUNDS)
    for K in (1, 3):
        direct, solved, residual = alpha_fields(first, second, K)
        assert residual < 1e-8
        assert h1_norm(direct - solved) / h1_norm(direct) < 0.02


def test_discrete_liouville_annihilates_root(disk_mesh: CrossSectionMesh) -> None:
    a = build_conductivity(BUMPED, disk_mesh, **BOUNDS)
    n = 16
    x1 = np.arange(n) / n
    values = discrete_liouville_samples(a, n)
    root = a.sqrt_samples(x1)
    wavenumbers = 2 * np.pi * np.fft.fftfreq(n, 1.0 / n)
    spectrum = -(wavenumbers**2)[:, None] * np.fft.fft(root, axis=0)
    second = np.real(np.fft.ifft(spectrum, axis=0))
    inner = disk_mesh.interior_nodes
    for j in range(n):
        rows = (
            disk_mesh.stiffness @ root[j]
            + disk_mesh.weighted_mass(values[j]) @ root[j]
            - disk_mesh.mass @ second[j]
        )
        assert np.abs(rows[inner]).max() < 1e-10


def test_discrete_liouville_of_constant(disk_mesh: CrossSectionMesh) -> None:
    values = discrete_liouville_samples(_constant(disk_mesh, 2.0), 8)
    assert np.abs(values).max() < 1e-10


@pytest.mark.slow
def test_stability_chain(disk_mesh: CrossSectionMesh, partition: BoundaryPartition) -> None:
    report = conductivity_stability(
        _constant(disk_mesh, 1.0),
        build_conductivity(BUMPED, disk_mesh, **BOUNDS),
        partition,
        K=1,
    )
    assert report.factor_holds
    assert report.alpha_agreement < 0.02
    assert report.h1_difference > 0
    assert math.isfinite(report.ratio)
    assert report.alpha_residual < 1e-8


@pytest.mark.slow
def test_ladder(disk_mesh: CrossSectionMesh, partition: BoundaryPartition) -> None:
    report = conductivity_ladder(
        _constant(disk_mesh, 1.0), bump_shape(BUMPED), [-9, -8], partition, K=1
    )
    assert [row.s for row in report.rows] == [2.0**-9, 2.0**-8]
    assert report.rows[0].h1_difference < report.rows[1].h1_difference
    assert report.fitted_constant == max(row.ratio for row in report.rows)
