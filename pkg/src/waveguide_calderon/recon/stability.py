"""Empirical check of δ ≤ C·Φ(γ) along a ladder of perturbed potentials."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from waveguide_calderon.errors import AdmissibilityError
from waveguide_calderon.forward.dnmap import dn_sup_over_fibers
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.geometry.faces import BoundaryPartition
from waveguide_calderon.models import StabilityRecord, StabilityReport
from waveguide_calderon.parallel import parallel_map
from waveguide_calderon.recon.modulus import stability_modulus
from waveguide_calderon.recon.norms import h_minus1_norm

logger = logging.getLogger(__name__)


def ladder_member(base: PotentialField, perturbation: PotentialField, s: float) -> PotentialField:
    """V₂ = V₁ + s·W, carrying V₁'s declared bounds."""
    member = (base + perturbation.scaled(s)).with_bounds(base.bound_plus, base.bound_minus)
    return PotentialField(
        member.modes, member.mesh, member.bound_plus, member.bound_minus, f"s={s:g}"
    )


def stability_record(
    base: PotentialField,
    member: PotentialField,
    s: float,
    partition: BoundaryPartition,
    thetas: Sequence[float],
    K: int,
    gamma_star: float,
) -> StabilityRecord:
    gamma = dn_sup_over_fibers(
        base, member, thetas, partition.input_face, partition.output_face, K
    ).gamma
    difference = base - member
    delta = h_minus1_norm(difference.samples, base.mesh)
    phi = stability_modulus(gamma, gamma_star)
    if phi == 0.0:
        ratio = 0.0 if delta == 0.0 else float("inf")
    else:
        ratio = delta / phi
    logger.info("s=%.3g: γ=%.4e δ=%.4e Φ=%.4e ratio=%.4g", s, gamma, delta, phi, ratio)
    return StabilityRecord(s=s, gamma=gamma, delta=delta, phi=phi, ratio=ratio)


def run_stability_experiment(
    base: PotentialField,
    perturbation: PotentialField,
    exponents: Sequence[float],
    partition: BoundaryPartition,
    thetas: Sequence[float],
    K: int,
    gamma_star: float,
    *,
    include_zero: bool = True,
    workers: int = 1,
) -> StabilityReport:
    """Sweep s ∈ {0} ∪ {2^e} and record γ, δ and Φ(γ) for each member.

    Members outside the admissible class of V₁ are skipped.
    """
    scales = ([0.0] if include_zero else []) + sorted(2.0**e for e in exponents)
    members: list[tuple[float, PotentialField]] = []
    skipped: list[float] = []
    for s in scales:
        member = ladder_member(base, perturbation, s)
        try:
            member.check_admissible()
        except AdmissibilityError as exc:
            logger.warning("skipping s=%.3g: %s", s, exc)
            skipped.append(s)
            continue
        members.append((s, member))

    thetas = [float(t) for t in thetas]
    records = parallel_map(
        lambda item: stability_record(base, item[1], item[0], partition, thetas, K, gamma_star),
        members,
        workers,
    )
    finite = [r.ratio for r in records if np.isfinite(r.ratio)]
    positive = [ratio for ratio in finite if ratio > 0]
    worst = max(finite, default=0.0)
    spread = max(positive) / min(positive) if positive else 1.0
    if any(not np.isfinite(r.ratio) for r in records):
        logger.warning("some members have δ > 0 with γ = 0; the DN data misses the perturbation")
        worst = float("inf")
    return StabilityReport(
        records=records,
        gamma_star=gamma_star,
        fitted_constant=worst,
        worst_ratio=worst,
        spread=spread,
        skipped=skipped,
        metadata={
            "thetas": thetas,
            "K": K,
            "xi0": [float(v) for v in partition.xi0],
            "epsilon": partition.epsilon,
            "base": base.name,
            "perturbation": perturbation.name,
        },
    )
