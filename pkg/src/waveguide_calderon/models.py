"""Report models shared by the numerical modules and the CLI."""

from __future__ import annotations

from enum import StrEnum
from typing import Any

from pydantic import BaseModel, Field


class CGOKind(StrEnum):
    """Remainder family of a CGO solution."""

    SMOOTH = "smooth"
    VANISHING = "vanishing"


class PoincareEstimate(BaseModel):
    """Poincaré constant at two resolutions."""

    h: float = Field(description="Coarse mesh size")
    value: float = Field(description="C_ω at mesh size h")
    refined_value: float = Field(description="C_ω at mesh size h/2")
    extrapolated_value: float = Field(description="Richardson extrapolation of the two values")
    change: float = Field(description="|C_ω(h/2) − C_ω(h)|")


class MembershipReport(BaseModel):
    """Outcome of the quasi-periodic membership test."""

    member: bool = Field(description="Both tests passed")
    trace_defect: float = Field(description="Relative defect of v(1) − e^{iθ}v(0)")
    derivative_defect: float = Field(description="Relative defect of ∂₁v(1) − e^{iθ}∂₁v(0)")
    mode_residual: float = Field(description="Relative residual of the mode-wise identity")
    trace_test: bool = Field(description="Verdict of the trace test")
    mode_test: bool = Field(description="Verdict of the mode-residual test")

    @property
    def tests_agree(self) -> bool:
        return self.trace_test == self.mode_test


class FiberNorm(BaseModel):
    """DN difference norm on one fiber."""

    theta: float = Field(description="Quasi-momentum")
    gamma: float = Field(description="‖Λ₁ − Λ₂‖ on this fiber")


class DNSupResult(BaseModel):
    """Supremum of the DN difference norm over a θ-grid."""

    gamma: float = Field(description="Largest fiber norm")
    theta_max: float = Field(description="Fiber attaining the maximum")
    fibers: list[FiberNorm] = Field(default_factory=list, description="Per-fiber norms")

    @property
    def spread(self) -> float:
        """max/min ratio of the fiber norms (1 means flat in θ)."""
        values = [f.gamma for f in self.fibers if f.gamma > 0]
        return max(values) / min(values) if values else 1.0


class LadderRow(BaseModel):
    """One τ-ladder entry of a CGO remainder."""

    tau: float = Field(description="CGO decay parameter τ")
    r: float = Field(description="Radius parameter r used to reach τ")
    norm: float = Field(description="‖v‖_{L²(Ω̌)} of the remainder")
    residual: float = Field(description="Relative residual of the remainder solve")
    trace_norm: float | None = Field(default=None, description="‖T₀u‖ on the cell boundary")


class DecayLadder(BaseModel):
    """A τ-ladder with its fitted log-log slope."""

    kind: CGOKind = Field(description="Remainder family")
    rows: list[LadderRow] = Field(description="Ladder entries in τ order")
    slope: float = Field(description="Least-squares slope of log‖v‖ against log τ")


class CarlemanRow(BaseModel):
    """Carleman quotient for one test field at one τ."""

    tau: float = Field(description="Carleman weight parameter")
    field_index: int = Field(description="Index of the test field")
    ratio: float = Field(description="Right side over left side of the weighted inequality")


class CarlemanTable(BaseModel):
    """Carleman quotients over a τ-ladder."""

    rows: list[CarlemanRow] = Field(description="All (field, τ) quotients")
    floors: dict[float, float] = Field(description="Minimum quotient per τ")

    @property
    def floor_nondecreasing(self) -> bool:
        values = [self.floors[t] for t in sorted(self.floors)]
        return all(b >= a * (1 - 1e-12) for a, b in zip(values, values[1:], strict=False))


class FrequencySample(BaseModel):
    """Estimated Fourier coefficient of V₁ − V₂ at one frequency."""

    k: int = Field(description="Axial frequency index")
    eta: tuple[float, float] = Field(description="Transverse frequency η")
    tau: float = Field(description="CGO parameter τ")
    r: float = Field(description="CGO parameter r")
    theta: float = Field(description="Quasi-momentum of the fiber")
    estimate_real: float = Field(description="Real part of the estimate")
    estimate_imag: float = Field(description="Imaginary part of the estimate")
    remainder_term: float = Field(description="1/τ budget term")
    data_term: float | None = Field(default=None, description="e^{C′τ}γ budget term")
    unobserved_abs: float | None = Field(
        default=None, description="|unobserved boundary part| (simulation-only diagnostic)"
    )

    @property
    def estimate(self) -> complex:
        return complex(self.estimate_real, self.estimate_imag)


class CoverageReport(BaseModel):
    """Which grid frequencies the configured directions reach."""

    total: int = Field(description="Number of grid frequencies")
    covered: int = Field(description="Frequencies inside some accessible sector")
    gaps: list[tuple[int, float, float]] = Field(
        default_factory=list, description="Unsampled (k, η₁, η₂)"
    )

    @property
    def gap_fraction(self) -> float:
        return 1.0 - self.covered / self.total if self.total else 1.0


class StabilityRecord(BaseModel):
    """One member of a perturbation ladder."""

    s: float = Field(description="Perturbation scale")
    gamma: float = Field(description="DN difference norm")
    delta: float = Field(description="H⁻¹ norm of the potential difference")
    phi: float = Field(description="Stability modulus Φ(γ)")
    ratio: float = Field(description="δ / Φ(γ), 0 when both vanish")


class StabilityReport(BaseModel):
    """Empirical stability curve with its fitted constant."""

    records: list[StabilityRecord] = Field(description="Ladder members in s order")
    gamma_star: float = Field(description="Branch point γ* of Φ")
    fitted_constant: float = Field(description="Smallest C with δ ≤ C·Φ(γ) on the ladder")
    worst_ratio: float = Field(description="Largest δ/Φ(γ)")
    spread: float = Field(description="max/min of the positive ratios")
    skipped: list[float] = Field(default_factory=list, description="Inadmissible members")
    metadata: dict[str, Any] = Field(default_factory=dict, description="Sector and grid settings")

    @property
    def gamma_monotone(self) -> bool:
        g = [r.gamma for r in self.records]
        return all(b >= a for a, b in zip(g, g[1:], strict=False))

    @property
    def delta_monotone(self) -> bool:
        d = [r.delta for r in self.records]
        return all(b >= a for a, b in zip(d, d[1:], strict=False))


class AdmissibilityReport(BaseModel):
    """Per-condition admissibility of a conductivity."""

    periodic: bool = Field(description="a(x₁ + 1, ·) = a(x₁, ·) on samples")
    floor: bool = Field(description="a ≥ a* on samples")
    w1_bound: bool = Field(description="‖a‖_{W^{1,∞}} ≤ M₊")
    negative_part: bool = Field(description="‖max(0, −V_a)‖_∞ ≤ M₋")
    poincare_gap: bool = Field(description="M₋ < C_ω")
    smallness_w1: bool = Field(description="‖a‖²_{W^{1,∞}} + 2a*‖Δa‖_∞ ≤ 4M₋a*²")
    smallness_w2: bool = Field(description="‖a‖_{W^{2,∞}} ≤ 4M₋/((4M₋+1)^{1/2}+1)·a*")
    min_value: float = Field(description="Smallest sampled value of a")
    w1_norm: float = Field(description="Sampled ‖a‖_{W^{1,∞}}")
    w2_norm: float = Field(description="Sampled ‖a‖_{W^{2,∞}}")
    laplacian_sup: float = Field(description="Sampled ‖Δa‖_∞")
    negative_part_sup: float = Field(description="Sampled ‖max(0, −V_a)‖_∞")

    @property
    def admissible(self) -> bool:
        return self.periodic and self.floor and self.w1_bound and self.negative_part


class SigmaDifferenceReport(BaseModel):
    """Norms of Σ₁ − Σ₂ and Λ₁ − Λ₂ for a compatible conductivity pair."""

    sigma_norm: float = Field(description="‖Σ_{a₁} − Σ_{a₂}‖")
    lambda_norm: float = Field(description="‖Λ_{V₁} − Λ_{V₂}‖")
    a_star: float = Field(description="Conductivity floor a*")

    @property
    def inequality_holds(self) -> bool:
        bound = self.a_star**-0.5 * self.sigma_norm
        return self.lambda_norm <= bound * (1 + 1e-10) + 1e-14


class ConductivityStabilityReport(BaseModel):
    """H¹ stability chain for one conductivity pair."""

    h1_difference: float = Field(description="‖a₁ − a₂‖_{H¹(Ω̌)}")
    alpha_direct: float = Field(description="‖a₁^{1/2} − a₂^{1/2}‖_{H¹} from the fields")
    alpha_solved: float = Field(description="‖α‖_{H¹} from the α-equation solve")
    alpha_agreement: float = Field(description="Relative gap between the two α norms")
    alpha_residual: float = Field(description="Relative residual of the α-equation solve")
    factor_bound: float = Field(description="2a*^{-1/2} M₊ ‖α‖_{H¹}")
    dual_ratio: float = Field(description="‖α‖_{H¹} / ‖V₁ − V₂‖ in the periodic dual norm")
    sigma_norm: float = Field(description="‖Σ₁ − Σ₂‖")
    phi: float = Field(description="Φ(a*^{-1/2}‖Σ₁ − Σ₂‖)")
    ratio: float = Field(description="‖a₁ − a₂‖_{H¹} / Φ, 0 when both vanish")

    @property
    def factor_holds(self) -> bool:
        return self.h1_difference <= self.factor_bound * (1 + 1e-6) + 1e-14


class ConductivityLadderRow(BaseModel):
    s: float = Field(description="Bump amplitude")
    h1_difference: float = Field(description="‖a₁ − a₂‖_{H¹(Ω̌)}")
    sigma_norm: float = Field(description="‖Σ₁ − Σ₂‖")
    phi: float = Field(description="Φ(a*^{-1/2}‖Σ₁ − Σ₂‖)")
    ratio: float = Field(description="‖a₁ − a₂‖_{H¹} / Φ")
    dual_ratio: float = Field(description="‖α‖_{H¹} / ‖V₁ − V₂‖ in the periodic dual norm")


class ConductivityLadderReport(BaseModel):
    """Fitted constant of the conductivity stability estimate across a bump ladder."""

    rows: list[ConductivityLadderRow] = Field(description="Ladder members in s order")
    fitted_constant: float = Field(description="Smallest C with ‖a₁ − a₂‖_{H¹} ≤ C·Φ")
    spread: float = Field(description="max/min of the positive ratios")
    skipped: list[float] = Field(default_factory=list, description="Inadmissible members")


class DerivedExample(BaseModel):
    """One reference value minted by an independent oracle."""

    name: str = Field(description="What the value is")
    value: float = Field(description="Reference value")
    source: str = Field(description="Oracle that produced it")
