"""Tests for the stability modulus, the cell norms and the τ budget."""

from __future__ import annotations

import math

import numpy as np
import pytest

from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.recon.budget import ErrorBudget, fit_error_budget, optimal_tau, tau_policy
from waveguide_calderon.recon.modulus import stability_modulus, stability_modulus_array
from waveguide_calderon.recon.norms import h1_norm, h_minus1_norm
from waveguide_calderon.spectral.fiber import FiberContext, ModeExpansion

GAMMA_STAR = 1e-6


# ---------------------------------------------------------------------------
# Stability modulus
# ---------------------------------------------------------------------------


class TestStabilityModulus:
    def test_zero(self) -> None:
        assert stability_modulus(0.0, GAMMA_STAR) == 0.0

    def test_linear_branch(self) -> None:
        assert stability_modulus(1e-3, GAMMA_STAR) == 1e-3
        assert stability_modulus(GAMMA_STAR, GAMMA_STAR) == GAMMA_STAR

    def test_loglog_branch(self) -> None:
        expected = 1.0 / math.log(math.log(1e8))
        assert stability_modulus(1e-8, GAMMA_STAR) == pytest.approx(expected)

    def test_loglog_branch_decreases_slowly(self) -> None:
        values = stability_modulus_array(np.array([1e-300, 1e-100, 1e-20, 1e-8]), GAMMA_STAR)
        assert np.all(np.diff(values) > 0)
        assert values[0] > 0.1

    @pytest.mark.parametrize("gamma_star", [0.0, 0.1, -1e-3])
    def test_gamma_star_range(self, gamma_star: float) -> None:
        with pytest.raises(ValueError, match="γ\\*"):
            stability_modulus(1e-3, gamma_star)

    def test_negative_gamma(self) -> None:
        with pytest.raises(ValueError, match="non-negative"):
            stability_modulus(-1.0, GAMMA_STAR)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def _constant_field(mesh: CrossSectionMesh, value: complex):
    return lambda x1: np.full((len(x1), mesh.n_nodes), value, dtype=complex)


class TestNegativeNorm:
    def test_zero_field(self, disk_mesh: CrossSectionMesh) -> None:
        assert h_minus1_norm(_constant_field(disk_mesh, 0.0), disk_mesh) == 0.0

    def test_homogeneous(self, disk_mesh: CrossSectionMesh) -> None:
        one = h_minus1_norm(_constant_field(disk_mesh, 1.0), disk_mesh, samples=64, modes=8)
        two = h_minus1_norm(_constant_field(disk_mesh, 2.0j), disk_mesh, samples=64, modes=8)
        assert two == pytest.approx(2.0 * one, rel=1e-10)

    @pytest.mark.parametrize("periodic", [False, True])
    def test_below_l2_norm(self, disk_mesh: CrossSectionMesh, periodic: bool) -> None:
        area = float(disk_mesh.triangle_areas.sum())
        value = h_minus1_norm(
            _constant_field(disk_mesh, 1.0), disk_mesh, periodic=periodic, samples=64, modes=8
        )
        assert 0.0 < value < math.sqrt(area)

    def test_oscillation_lowers_the_norm(self, disk_mesh: CrossSectionMesh) -> None:
        def wave(frequency: int):
            return lambda x1: np.cos(2 * math.pi * frequency * x1)[:, None] * np.ones(
                disk_mesh.n_nodes
            )

        slow = h_minus1_norm(wave(1), disk_mesh, periodic=True, samples=64, modes=8)
        fast = h_minus1_norm(wave(4), disk_mesh, periodic=True, samples=64, modes=8)
        assert fast < slow


def test_h1_norm_dominates_l2(disk_mesh: CrossSectionMesh) -> None:
    ctx = FiberContext(0.5, 1, disk_mesh)
    rng = np.random.default_rng(2)
    expansion = ModeExpansion(
        rng.standard_normal((ctx.n_modes, disk_mesh.n_nodes)) + 0j, ctx
    )
    assert h1_norm(expansion) >= expansion.l2_norm()


def test_h1_norm_of_constant(disk_mesh: CrossSectionMesh) -> None:
    ctx = FiberContext(0.0, 1, disk_mesh)
    constant = ModeExpansion.single_mode(ctx, 0, np.ones(disk_mesh.n_nodes))
    assert h1_norm(constant) == pytest.approx(constant.l2_norm())


# ---------------------------------------------------------------------------
# Error budget and τ policy
# ---------------------------------------------------------------------------


class TestBudget:
    def test_bound(self) -> None:
        budget = ErrorBudget(a=2.0, b=1.0, c=0.5, gamma=1e-3)
        assert budget.bound(4.0) == pytest.approx(0.5 + math.exp(2.0) * 1e-3)

    def test_fit_is_an_envelope(self) -> None:
        taus = [10.0, 20.0, 30.0, 40.0]
        errors = [0.1 + 1e-5 * math.exp(0.2 * t) for t in taus]
        budget = fit_error_budget(taus, errors, 1e-5)
        for tau, error in zip(taus, errors, strict=True):
            assert budget.bound(tau) >= error * (1 - 1e-9)

    def test_fit_without_data_error(self) -> None:
        budget = fit_error_budget([10.0, 20.0], [0.3, 0.1], 0.0)
        assert budget.a == pytest.approx(3.0)
        assert budget.b == 0.0

    def test_optimal_tau_balances_terms(self) -> None:
        a, b, c, gamma = 1.0, 1.0, 1.0, 1e-6
        tau = optimal_tau(gamma, a, b, c)
        assert a / tau**2 == pytest.approx(b * c * gamma * math.exp(c * tau), rel=1e-6)

    def test_optimal_tau_without_data_error(self) -> None:
        assert optimal_tau(0.0, 1.0, 1.0, 1.0) == math.inf


class TestTauPolicy:
    def test_exact_data(self) -> None:
        assert tau_policy(0.0, 10.0, 1.0) == 10.0
        assert tau_policy(0.0, 10.0, 1.0, tau_max=60.0) == 60.0

    def test_large_gamma(self) -> None:
        assert tau_policy(0.5, 10.0, 1.0, tau_max=60.0) == 10.0

    def test_small_gamma(self) -> None:
        assert tau_policy(1e-10, 10.0, 0.1) == 32.0
        assert tau_policy(1e-10, 10.0, 0.1, tau_max=20.0) == 20.0

    def test_floor_wins(self) -> None:
        assert tau_policy(1e-10, 50.0, 1.0) == 50.0
