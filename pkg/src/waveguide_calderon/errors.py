"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CalderonError(Exception):
    """Base class for every error raised by the toolkit."""


class GeometryError(CalderonError, ValueError):
    """Invalid cross-section, mesh or face configuration."""


class SpectralError(CalderonError, ValueError):
    """Axial grid too coarse or inconsistent field data."""


class AdmissibilityError(CalderonError, ValueError):
    """A potential or conductivity outside its admissible class."""


class DNMapMismatchError(CalderonError, ValueError):
    """Two DN maps with different fiber, mesh or face metadata."""


class CGOParameterError(CalderonError, ValueError):
    """Invalid CGO parameters or a τ below the configured floor."""


class AccessibilityError(CalderonError, ValueError):
    """Frequency outside the accessible sector of a direction."""


class CompatibilityError(CalderonError, ValueError):
    """Conductivity pair violating a boundary compatibility condition."""

    def __init__(self, condition: str, message: str) -> None:
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class SolverError(CalderonError, RuntimeError):
    """A linear or eigen solver failed."""

    def __init__(
        self,
        message: str,
        *,
        condition_estimate: float | None = None,
        residual: float | None = None,
    ) -> None:
        details = []
        if condition_estimate is not None:
            details.append(f"condition estimate {condition_estimate:.3e}")
        if residual is not None:
            details.append(f"residual {residual:.3e}")
        super().__init__(message + (f" ({', '.join(details)})" if details else ""))
        self.condition_estimate = condition_estimate
        self.residual = residual


class CheckFailedError(CalderonError, AssertionError):
    """An empirical acceptance check did not hold."""
