"""Tests for frequency grids, accessibility and coefficient recovery."""

from __future__ import annotations

import math

import numpy as np
import pytest

from waveguide_calderon.cgo.params import make_cgo_params, params_for_tau
from waveguide_calderon.cgo.smooth import solve_cgo_smooth
from waveguide_calderon.cgo.vanishing import solve_cgo_vanishing
from waveguide_calderon.config import PotentialKind, PotentialPreset
from waveguide_calderon.errors import AccessibilityError
from waveguide_calderon.forward.dnmap import SimulatedDNData
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.forward.presets import build_potential, preset_function
from waveguide_calderon.geometry.faces import BoundaryPartition
from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.oracle.quadrature import fourier_coefficient
from waveguide_calderon.recon.fourier import (
    FrequencyGrid,
    SynthesizedField,
    accessible,
    coverage,
    estimate_fourier_coefficient,
    estimate_with_params,
    usable_sectors,
)
from waveguide_calderon.recon.pairing import pairing_from_boundary

ETA = (0.0, 2.0 * math.pi)
XI0 = np.array([1.0, 0.0])


class TestFrequencyGrid:
    def test_frequencies(self) -> None:
        grid = FrequencyGrid(ks=[1, 0], box_side=2.5, max_index=1)
        frequencies = grid.frequencies()
        assert len(frequencies) == 18
        assert frequencies[0] == (0, pytest.approx((-2 * math.pi / 2.5, -2 * math.pi / 2.5)))
        assert {k for k, _ in frequencies} == {0, 1}

    def test_accessible(self) -> None:
        assert accessible((0.0, 1.0), XI0, 0.5)
        assert accessible((0.0, -3.0), XI0, 0.5)
        assert not accessible((1.0, 0.0), XI0, 0.5)
        assert not accessible((0.0, 0.0), XI0, 0.5)

    def test_coverage(self) -> None:
        grid = FrequencyGrid(ks=[0, 1], box_side=2.5, max_index=1)
        report = coverage(grid, [(XI0, 0.5)])
        assert report.total == 18
        assert report.covered == 4
        assert len(report.gaps) == 14
        assert report.gap_fraction == pytest.approx(14 / 18)

    def test_more_directions_cover_more(self) -> None:
        grid = FrequencyGrid(ks=[0], box_side=2.5, max_index=1)
        one = coverage(grid, [(XI0, 0.5)])
        two = coverage(grid, [(XI0, 0.5), (np.array([0.0, 1.0]), 0.5)])
        assert two.covered > one.covered


def test_synthesized_constant(disk_mesh: CrossSectionMesh) -> None:
    field = SynthesizedField(disk_mesh, 2.0, [(0, (0.0, 0.0))], np.array([4.0 + 0j]))
    assert np.allclose(field.samples(np.array([0.0, 0.3])), 1.0)


def test_usable_sectors(
    cos_potential: PotentialField, unit_potential: PotentialField, partition: BoundaryPartition
) -> None:
    data = SimulatedDNData(cos_potential, unit_potential, partition)
    sectors = usable_sectors(data, [(1.0, 0.0)])
    assert len(sectors) == 1
    direction, eps = sectors[0]
    assert np.allclose(direction, XI0)
    assert eps > 0


def test_sector_is_checked(
    cos_potential: PotentialField, unit_potential: PotentialField, partition: BoundaryPartition
) -> None:
    data = SimulatedDNData(cos_potential, unit_potential, partition)
    params = params_for_tau(0, (2.0 * math.pi, 0.0), 0.0, 25.0)
    with pytest.raises(AccessibilityError, match="accessible"):
        estimate_with_params(data, params, XI0, partition.epsilon, K=1, grid=16)


def test_identical_potentials_pair_to_zero(
    cos_potential: PotentialField, partition: BoundaryPartition
) -> None:
    data = SimulatedDNData(cos_potential, cos_potential, partition)
    params = params_for_tau(0, ETA, 0.0, 25.0, xi0=XI0)
    u1 = solve_cgo_smooth(cos_potential, params, K=1, grid=16)
    u2 = solve_cgo_vanishing(cos_potential, params, partition.epsilon, K=1)
    result = pairing_from_boundary(data, u2, u1, partition.epsilon)
    assert result.observed == 0 and result.unobserved == 0 and result.volume == 0
    sample = estimate_with_params(data, params, XI0, partition.epsilon, K=1, grid=16)
    assert abs(complex(sample.estimate_real, sample.estimate_imag)) < 1e-6


def test_pairing_rejects_mismatched_parameters(
    cos_potential: PotentialField, unit_potential: PotentialField, partition: BoundaryPartition
) -> None:
    data = SimulatedDNData(cos_potential, unit_potential, partition)
    u1 = solve_cgo_smooth(cos_potential, params_for_tau(0, ETA, 0.0, 25.0, xi0=XI0), K=1, grid=16)
    params = params_for_tau(0, ETA, 0.0, 50.0, xi0=XI0)
    u2 = solve_cgo_vanishing(unit_potential, params, partition.epsilon, K=1)
    with pytest.raises(ValueError, match="different parameters"):
        pairing_from_boundary(data, u2, u1, partition.epsilon)


@pytest.fixture(scope="module")
def bump_data(
    layered_disk_mesh: CrossSectionMesh, layered_partition: BoundaryPartition
) -> tuple[SimulatedDNData, PotentialPreset]:
    """V₁ = 1 + ½cos(2πx₁)b(x′) with a C² bump of radius 0.6, V₂ = 1."""
    preset = PotentialPreset(kind=PotentialKind.COS_BUMP, value=1.0, amplitude=0.5, radius=0.6)
    first = build_potential(preset, layered_disk_mesh, name="base")
    second = PotentialField.constant(layered_disk_mesh, 1.0, name="one")
    return SimulatedDNData(first, second, layered_partition), preset


@pytest.mark.slow
def test_pairing_matches_volume_integral(
    bump_data: tuple[SimulatedDNData, PotentialPreset]
) -> None:
    """Observed plus unobserved boundary parts reproduce ∫(V₁ − V₂)u₂ū₁."""
    data, _ = bump_data
    eps = data.partition.epsilon
    params = make_cgo_params(1, (0.0, 2.0), 0.3, 0.0, xi0=XI0)
    u1 = solve_cgo_smooth(data.first, params, K=2, grid=48, tau_floor=10.0)
    u2 = solve_cgo_vanishing(data.second, params, eps, K=2, tau_floor=10.0)
    result = pairing_from_boundary(data, u2, u1, eps)
    assert result.consistency < 0.1
    assert abs(result.unobserved) < 0.1 * abs(result.observed)


@pytest.mark.slow
def test_recovers_bump_coefficient(bump_data: tuple[SimulatedDNData, PotentialPreset]) -> None:
    """k = 1, η = (0, 2) at τ ≈ 31 lands within 10% of the quadrature value."""
    data, preset = bump_data
    func = preset_function(preset)
    exact = fourier_coefficient(
        lambda x1, x2, x3: func(x1, x2, x3) - 1.0, data.mesh, 1, (0.0, 2.0)
    )
    sample = estimate_fourier_coefficient(
        data, 1, (0.0, 2.0), 0.3, 0.0, XI0, data.partition.epsilon, K=2, tau_floor=10.0
    )
    estimate = complex(sample.estimate_real, sample.estimate_imag)
    assert sample.tau == pytest.approx(31.2, abs=0.1)
    assert abs(estimate - exact) <= 0.1 * abs(exact)


@pytest.mark.slow
def test_estimate_records_parameters(
    cos_potential: PotentialField, unit_potential: PotentialField, partition: BoundaryPartition
) -> None:
    data = SimulatedDNData(cos_potential, unit_potential, partition)
    params = params_for_tau(0, ETA, 0.0, 25.0, xi0=XI0)
    sample = estimate_with_params(data, params, XI0, partition.epsilon, K=1, grid=16, gamma=1e-3)
    assert sample.tau == params.tau
    assert sample.remainder_term == pytest.approx(1.0 / params.tau)
    assert sample.data_term is not None and sample.data_term > 0
    assert np.isfinite(sample.estimate_real)
