"""Tests for CGO parameter construction."""

from __future__ import annotations

import math

import numpy as np
import pytest

from waveguide_calderon.cgo.params import check_invariants, make_cgo_params, params_for_tau
from waveguide_calderon.errors import CGOParameterError

ETA = (0.0, 2.0 * math.pi)


class TestMakeParams:
    def test_derived_quantities(self) -> None:
        params = make_cgo_params(0, ETA, 0.3, 0.0, xi0=(1.0, 0.0))
        assert np.allclose(params.xi, [1.0, 0.0])
        assert np.allclose(params.ell, [2.0 * math.pi, 0.0, 0.0])
        assert params.tau == pytest.approx(math.pi * math.sqrt(5.0))
        assert params.n1 == 1
        assert params.n2 == 1

    def test_pair_reproduces_frequency(self) -> None:
        params = make_cgo_params(1, (1.0, 2.0), 1.7, 0.4)
        pair = params.zeta1 + params.zeta2.conj()
        assert np.allclose(pair, 1j * np.array([2.0 * math.pi, 1.0, 2.0]))

    @pytest.mark.parametrize("k", [0, 1, -2, 3])
    def test_identities_hold(self, k: int) -> None:
        params = make_cgo_params(k, (0.5, -1.5), 2.3, 1.1)
        defects = check_invariants(params)
        assert max(defects.values()) <= 1e-12
        assert 2.0 * math.pi * params.r < params.tau <= params.tau_upper_bound

    def test_identities_hold_on_random_draws(self) -> None:
        rng = np.random.default_rng(20240611)
        worst = 0.0
        for _ in range(10_000):
            k = int(rng.integers(-5, 6))
            radius, angle = rng.uniform(0.1, 20.0), rng.uniform(0.0, 2.0 * math.pi)
            eta = (radius * math.cos(angle), radius * math.sin(angle))
            params = make_cgo_params(k, eta, rng.uniform(1.0, 50.0), rng.uniform(0.0, 6.28))
            worst = max(worst, max(check_invariants(params).values()))
            assert 2.0 * math.pi * params.r < params.tau <= params.tau_upper_bound * (1 + 1e-12)
        assert worst <= 1e-12

    def test_isotropic_vectors(self) -> None:
        params = make_cgo_params(2, ETA, 0.8, 2.0)
        for zeta in (params.zeta1, params.zeta2):
            assert abs(complex(zeta @ zeta)) < 1e-9 * params.tau**2

    def test_xi_sign_follows_hint(self) -> None:
        towards = make_cgo_params(0, ETA, 0.3, 0.0, xi0=(1.0, 0.0))
        away = make_cgo_params(0, ETA, 0.3, 0.0, xi0=(-1.0, 0.0))
        assert np.allclose(towards.xi, -away.xi)

    def test_explicit_xi(self) -> None:
        params = make_cgo_params(0, ETA, 0.3, 0.0, xi=(-1.0, 0.0))
        assert np.allclose(params.xi, [-1.0, 0.0])

    def test_as_dict(self) -> None:
        payload = make_cgo_params(0, ETA, 0.3, 0.0).as_dict()
        assert payload["tau"] == pytest.approx(math.pi * math.sqrt(5.0))
        assert len(payload["zeta1"]) == 3


class TestInvalidParams:
    def test_zero_eta(self) -> None:
        with pytest.raises(CGOParameterError, match="nonzero"):
            make_cgo_params(0, (0.0, 0.0), 0.3, 0.0)

    def test_nonpositive_r(self) -> None:
        with pytest.raises(CGOParameterError, match="positive"):
            make_cgo_params(0, ETA, 0.0, 0.0)

    def test_theta_range(self) -> None:
        with pytest.raises(CGOParameterError, match="θ"):
            make_cgo_params(0, ETA, 0.3, 2.0 * math.pi)

    def test_xi_not_orthogonal(self) -> None:
        with pytest.raises(CGOParameterError, match="orthogonal"):
            make_cgo_params(0, ETA, 0.3, 0.0, xi=(0.0, 1.0))

    def test_xi_not_unit(self) -> None:
        with pytest.raises(CGOParameterError, match="unit"):
            make_cgo_params(0, ETA, 0.3, 0.0, xi=(2.0, 0.0))


def test_params_for_tau_reaches_target() -> None:
    params = params_for_tau(0, ETA, 0.0, 25.0, xi0=(1.0, 0.0))
    assert params.tau >= 25.0
    assert params.r == 3.5
    assert params.tau == pytest.approx(math.sqrt(math.pi**2 + 64.0 * math.pi**2))


def test_params_for_tau_is_minimal() -> None:
    params = params_for_tau(1, (1.0, 1.0), 0.5, 40.0)
    smaller = make_cgo_params(1, (1.0, 1.0), params.r - 1.0, 0.5) if params.r > 1 else None
    assert smaller is None or smaller.tau < 40.0
