"""Independent reference implementations for cross-checking the main modules."""

from waveguide_calderon.oracle.analytic import (
    bessel_ratio_series,
    disk_dn_analytic,
    disk_fourier_transform,
    disk_poincare_constant,
    exponential_liouville,
    square_poincare_constant,
)
from waveguide_calderon.oracle.derived import derived_examples
from waveguide_calderon.oracle.divergence import (
    dense_poincare_constant,
    divergence_form_dn,
    divergence_form_solve,
)
from waveguide_calderon.oracle.fd import (
    DenseGrid,
    FDSolution,
    dense_grid_for_disk,
    disk_inside,
    fd_solve,
    relative_l2,
    square_inside,
)
from waveguide_calderon.oracle.quadrature import (
    cell_integral,
    fourier_coefficient,
    nodal_callable,
    triangle_rule,
    volume_pairing_oracle,
)

__all__ = [
    "DenseGrid",
    "FDSolution",
    "bessel_ratio_series",
    "cell_integral",
    "dense_grid_for_disk",
    "dense_poincare_constant",
    "derived_examples",
    "disk_dn_analytic",
    "disk_fourier_transform",
    "disk_inside",
    "disk_poincare_constant",
    "divergence_form_dn",
    "divergence_form_solve",
    "exponential_liouville",
    "fd_solve",
    "fourier_coefficient",
    "nodal_callable",
    "relative_l2",
    "square_inside",
    "square_poincare_constant",
    "triangle_rule",
    "volume_pairing_oracle",
]
