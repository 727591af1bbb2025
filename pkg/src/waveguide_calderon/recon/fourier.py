"""Fourier coefficients of V₁ − V₂ from boundary data, and their synthesis."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from waveguide_calderon.cgo.params import CGOParams, make_cgo_params, params_for_tau
from waveguide_calderon.cgo.smooth import solve_cgo_smooth
from waveguide_calderon.cgo.vanishing import solve_cgo_vanishing
from waveguide_calderon.errors import AccessibilityError, GeometryError
from waveguide_calderon.forward.dnmap import SimulatedDNData
from waveguide_calderon.geometry.faces import choose_epsilon, unit_vector
from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.models import CoverageReport, FrequencySample
from waveguide_calderon.parallel import parallel_map
from waveguide_calderon.recon.budget import tau_policy
from waveguide_calderon.recon.pairing import pairing_from_boundary

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
Frequency = tuple[int, tuple[float, float]]


def _check_sector(params: CGOParams, xi0: np.ndarray, epsilon: float) -> None:
    if float(np.linalg.norm(params.xi - xi0)) > epsilon + 1e-12:
        raise AccessibilityError(
            f"η = ({params.eta[0]:.4g}, {params.eta[1]:.4g}) lies outside the accessible sector "
            f"|ξ − ξ₀| ≤ {epsilon:g} around ξ₀ = ({xi0[0]:.4g}, {xi0[1]:.4g})"
        )


def estimate_with_params(
    data: SimulatedDNData,
    params: CGOParams,
    xi0: tuple[float, float] | np.ndarray,
    epsilon: float,
    *,
    K: int = 3,
    grid: int = 48,
    tau_floor: float = 1.0,
    gamma: float | None = None,
) -> FrequencySample:
    """Fourier-coefficient estimate for an explicit parameter set."""
    direction = unit_vector(xi0, "ξ₀")
    _check_sector(params, direction, epsilon)
    u1 = solve_cgo_smooth(data.first, params, K=K, grid=grid, tau_floor=tau_floor)
    u2 = solve_cgo_vanishing(data.second, params, epsilon, K=K, tau_floor=tau_floor)
    pairing = pairing_from_boundary(data, u2, u1, epsilon)
    c_omega = data.mesh.c_omega
    data_term = None if gamma is None else math.exp(2.0 * c_omega * params.tau) * gamma
    logger.info(
        "coefficient k=%d η=(%.3g, %.3g) at τ=%.3g: %.4e%+.4ej",
        params.k,
        params.eta[0],
        params.eta[1],
        params.tau,
        pairing.observed.real,
        pairing.observed.imag,
    )
    return FrequencySample(
        k=params.k,
        eta=(float(params.eta[0]), float(params.eta[1])),
        tau=params.tau,
        r=params.r,
        theta=params.theta,
        estimate_real=pairing.observed.real,
        estimate_imag=pairing.observed.imag,
        remainder_term=1.0 / params.tau,
        data_term=data_term,
        unobserved_abs=abs(pairing.unobserved),
    )


def estimate_fourier_coefficient(
    data: SimulatedDNData,
    k: int,
    eta: tuple[float, float],
    r: float,
    theta: float,
    xi0: tuple[float, float] | np.ndarray,
    epsilon: float,
    **kwargs,
) -> FrequencySample:
    """Estimate ∫_{Ω̌}(V₁ − V₂) e^{−i(2πkx₁ + η·x′)} dx from the DN difference."""
    params = make_cgo_params(k, eta, r, theta, xi0=xi0)
    return estimate_with_params(data, params, xi0, epsilon, **kwargs)


@dataclass(frozen=True)
class FrequencyGrid:
    """Axial indices k and the lattice η = 2π(a, b)/L, |a|, |b| ≤ max_index."""

    ks: Sequence[int]
    box_side: float
    max_index: int

    def frequencies(self) -> list[Frequency]:
        step = TWO_PI / self.box_side
        span = range(-self.max_index, self.max_index + 1)
        return [
            (int(k), (step * a, step * b))
            for k, a, b in itertools.product(sorted(self.ks), span, span)
        ]


def accessible(eta: tuple[float, float], xi0: np.ndarray, epsilon: float) -> bool:
    """True when some unit ξ ⊥ η lies within ε of ξ₀."""
    vector = np.asarray(eta, dtype=float)
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        return False
    xi = np.array([-vector[1], vector[0]]) / norm
    return min(np.linalg.norm(xi - xi0), np.linalg.norm(-xi - xi0)) <= epsilon + 1e-12


def coverage(grid: FrequencyGrid, directions: Sequence[tuple[np.ndarray, float]]) -> CoverageReport:
    """Grid frequencies reached by the directions ``(ξ₀, ε)``; the rest are gaps."""
    frequencies = grid.frequencies()
    gaps = [
        (k, eta[0], eta[1])
        for k, eta in frequencies
        if not any(accessible(eta, np.asarray(xi0), eps) for xi0, eps in directions)
    ]
    return CoverageReport(total=len(frequencies), covered=len(frequencies) - len(gaps), gaps=gaps)


def usable_sectors(
    data: SimulatedDNData, directions: Sequence[tuple[float, float]]
) -> list[tuple[np.ndarray, float]]:
    """(ξ₀, ε) for every direction whose ε-inclusions hold for the data's faces."""
    partition = data.partition
    sectors = []
    for candidate in directions:
        direction = unit_vector(candidate, "ξ₀")
        try:
            eps = choose_epsilon(data.mesh, partition.input_face, partition.output_face, direction)
        except GeometryError:
            logger.warning("direction ξ₀ = (%.3g, %.3g) is not usable with these faces", *direction)
            continue
        sectors.append((direction, eps))
    return sectors


@dataclass(frozen=True)
class SynthesizedField:
    """W(x) = L⁻² Σ c e^{i(2πkx₁ + η·x′)} on the mesh nodes."""

    mesh: CrossSectionMesh
    box_side: float
    frequencies: list[Frequency]
    coefficients: np.ndarray

    def samples(self, x1: np.ndarray) -> np.ndarray:
        x1 = np.asarray(x1, dtype=float)
        out = np.zeros((len(x1), self.mesh.n_nodes), dtype=complex)
        for (k, eta), c in zip(self.frequencies, self.coefficients, strict=True):
            transverse = np.exp(1j * (self.mesh.vertices @ np.asarray(eta)))
            out += c * np.exp(TWO_PI * 1j * k * x1)[:, None] * transverse[None, :]
        return out / self.box_side**2

    __call__ = samples


@dataclass(frozen=True)
class Reconstruction:
    field: SynthesizedField
    samples: list[FrequencySample]
    coverage: CoverageReport


def reconstruct_difference(
    data: SimulatedDNData,
    grid: FrequencyGrid,
    directions: Sequence[tuple[float, float]],
    *,
    gamma: float = 0.0,
    tau_floor: float = 10.0,
    tau_max: float = 60.0,
    c_hat: float = 1.0,
    theta: float = 0.0,
    K: int = 3,
    box_grid: int = 48,
    workers: int = 1,
) -> Reconstruction:
    """Estimate every accessible grid coefficient and synthesize W ≈ V₁ − V₂."""
    sectors = usable_sectors(data, directions)
    report = coverage(grid, sectors)
    jobs: list[tuple[Frequency, np.ndarray, float]] = []
    for k, eta in grid.frequencies():
        for xi0, eps in sectors:
            if accessible(eta, xi0, eps):
                jobs.append(((k, eta), xi0, eps))
                break
    if not jobs:
        raise ValueError("no grid frequency lies in an accessible sector")
    tau = tau_policy(gamma, tau_floor, c_hat, tau_max=tau_max)

    def one(job: tuple[Frequency, np.ndarray, float]) -> FrequencySample:
        (k, eta), xi0, eps = job
        params = params_for_tau(k, eta, theta, tau, xi0=xi0)
        return estimate_with_params(
            data, params, xi0, eps, K=K, grid=box_grid, tau_floor=min(tau_floor, tau),
            gamma=gamma or None,
        )

    samples = parallel_map(one, jobs, workers)
    field = SynthesizedField(
        data.mesh,
        grid.box_side,
        [job[0] for job in jobs],
        np.array([s.estimate for s in samples]),
    )
    logger.info("reconstructed %d of %d grid coefficients", len(jobs), report.total)
    return Reconstruction(field=field, samples=samples, coverage=report)


def sector_truncated_field(
    truth: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    mesh: CrossSectionMesh,
    grid: FrequencyGrid,
    frequencies: list[Frequency],
) -> SynthesizedField:
    """Synthesis of the exact coefficients of ``truth`` on the same frequencies."""
    from waveguide_calderon.oracle.quadrature import fourier_coefficient

    coefficients = np.array([fourier_coefficient(truth, mesh, k, eta) for k, eta in frequencies])
    return SynthesizedField(mesh, grid.box_side, list(frequencies), coefficients)
