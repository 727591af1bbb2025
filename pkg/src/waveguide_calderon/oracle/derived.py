"""Table of reference values minted from the oracles for a configuration."""

from __future__ import annotations

import logging

from waveguide_calderon.config import ExperimentConfig
from waveguide_calderon.forward.presets import preset_function
from waveguide_calderon.geometry.mesh import CrossSectionKind, build_mesh
from waveguide_calderon.models import DerivedExample
from waveguide_calderon.oracle.analytic import (
    bessel_ratio_series,
    disk_dn_analytic,
    disk_fourier_transform,
    disk_poincare_constant,
    exponential_liouville,
    square_poincare_constant,
)
from waveguide_calderon.oracle.divergence import dense_poincare_constant
from waveguide_calderon.oracle.quadrature import fourier_coefficient

logger = logging.getLogger(__name__)

MAX_ANGULAR_MODE = 4


def derived_examples(config: ExperimentConfig) -> list[DerivedExample]:
    """Reference values for the configured cross-section and presets."""
    spec = config.cross_section
    rows: list[DerivedExample] = []
    mesh = build_mesh(spec)

    if spec.kind == CrossSectionKind.DISK:
        radius = spec.radius
        rows.append(
            DerivedExample(
                name="poincare_constant",
                value=disk_poincare_constant(radius),
                source="bessel_zero",
            )
        )
        for m in range(MAX_ANGULAR_MODE + 1):
            rows.append(
                DerivedExample(
                    name=f"disk_dn[c=0,k=0,m={m}]",
                    value=disk_dn_analytic(0.0, radius, 0, m),
                    source="harmonic_polynomial",
                )
            )
        rows.append(
            DerivedExample(
                name="disk_dn[c=1,k=0,m=0]",
                value=bessel_ratio_series(0, radius),
                source="bessel_series",
            )
        )
        rows.append(
            DerivedExample(
                name="disk_fourier_transform[cgo.eta]",
                value=disk_fourier_transform(radius, config.cgo.eta),
                source="bessel_j1",
            )
        )
    else:
        rows.append(
            DerivedExample(
                name="poincare_constant",
                value=dense_poincare_constant(mesh),
                source="dense_eigensolve",
            )
        )
    rows += [
        DerivedExample(
            name="unit_square_poincare_constant",
            value=square_poincare_constant(),
            source="closed_form",
        ),
        DerivedExample(
            name="exponential_liouville[beta=1]",
            value=exponential_liouville(1.0),
            source="symbolic",
        ),
    ]

    first = preset_function(config.potentials[config.recover.first], config.seed)
    second = preset_function(config.potentials[config.recover.second], config.seed)
    coefficient = fourier_coefficient(
        lambda x1, x2, x3: first(x1, x2, x3) - second(x1, x2, x3),
        mesh,
        config.recover.k,
        config.recover.eta,
    )
    rows += [
        DerivedExample(name="recover_coefficient.re", value=coefficient.real, source="quadrature"),
        DerivedExample(name="recover_coefficient.im", value=coefficient.imag, source="quadrature"),
    ]
    logger.info("minted %d derived examples", len(rows))
    return rows
