"""Floquet-Bloch-Gel'fand transform of compactly supported axial data."""

from __future__ import annotations

import numpy as np


def fbg_forward(
    slices: list[np.ndarray],
    thetas: np.ndarray,
    offsets: list[int] | None = None,
) -> np.ndarray:
    """(Uf)_θ = Σₙ e^{−inθ} fₙ with fₙ = f(x₁ + n, ·).

    ``offsets`` gives the cell index n of each slice (default 0, 1, …). The
    result has shape ``(len(thetas), *slice_shape)``; an empty slice list gives
    one zero per θ.
    """
    thetas = np.asarray(thetas, dtype=float)
    if not slices:
        return np.zeros(len(thetas), dtype=complex)
    index = np.arange(len(slices)) if offsets is None else np.asarray(offsets)
    stacked = np.stack([np.asarray(s) for s in slices])
    phases = np.exp(-1j * np.outer(thetas, index))
    return np.tensordot(phases, stacked, axes=(1, 0))


def fbg_inverse(
    transformed: np.ndarray, thetas: np.ndarray, offsets: list[int] | np.ndarray
) -> np.ndarray:
    """Recover fₙ = N_θ⁻¹ Σ_θ e^{inθ} (Uf)_θ on a uniform θ-grid."""
    thetas = np.asarray(thetas, dtype=float)
    phases = np.exp(1j * np.outer(np.asarray(offsets), thetas)) / len(thetas)
    return np.tensordot(phases, transformed, axes=(1, 0))


def fbg_norm_squared(transformed: np.ndarray, mass: np.ndarray | None = None) -> float:
    """Discrete ∫ ‖(Uf)_θ‖² dθ/2π over a uniform θ-grid."""
    flat = transformed.reshape(len(transformed), -1)
    if mass is None:
        return float(np.sum(np.abs(flat) ** 2) / len(transformed))
    return float(np.real(np.einsum("tn,tn->", flat.conj(), (mass @ flat.T).T)) / len(flat))


def uniform_theta_grid(count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(count) / count
