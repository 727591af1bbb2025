"""Recovery of V₁ − V₂ from partial DN data and the stability experiment."""

from waveguide_calderon.recon.budget import ErrorBudget, fit_error_budget, optimal_tau, tau_policy
from waveguide_calderon.recon.fourier import (
    FrequencyGrid,
    Reconstruction,
    SynthesizedField,
    accessible,
    coverage,
    estimate_fourier_coefficient,
    estimate_with_params,
    reconstruct_difference,
    sector_truncated_field,
)
from waveguide_calderon.recon.modulus import (
    GAMMA_STAR_LIMIT,
    stability_modulus,
    stability_modulus_array,
)
from waveguide_calderon.recon.norms import h1_norm, h_minus1_norm
from waveguide_calderon.recon.pairing import PairingResult, pairing_from_boundary
from waveguide_calderon.recon.stability import (
    ladder_member,
    run_stability_experiment,
    stability_record,
)

__all__ = [
    "GAMMA_STAR_LIMIT",
    "ErrorBudget",
    "FrequencyGrid",
    "PairingResult",
    "Reconstruction",
    "SynthesizedField",
    "accessible",
    "coverage",
    "estimate_fourier_coefficient",
    "estimate_with_params",
    "fit_error_budget",
    "h1_norm",
    "h_minus1_norm",
    "ladder_member",
    "optimal_tau",
    "pairing_from_boundary",
    "reconstruct_difference",
    "run_stability_experiment",
    "sector_truncated_field",
    "stability_modulus",
    "stability_modulus_array",
    "stability_record",
    "tau_policy",
]
