"""Initial deviation density matrices.

The ensemble density matrix is ``rho = E/16 + rho_dev``.  Only ``rho_dev`` is
ever built; its thermal prefactor hbar*sum(omega)/(2 k_B T) is fixed to 1,
since the dynamics are linear and the prefactor only rescales every entry.
"""

from __future__ import annotations

import numpy as np

from .operators import SpinSystemConfig

ACTIVE_DIM = 4
HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10

# Diagonal of rho_dev for the twelve passive states |4> .. |15>.
PASSIVE_DIAGONAL = (-0.5, 0.5, 0.5, 0.5, 0.5, -0.5, -0.5, -0.5, -1.0, 0.0, 0.0, 0.0)


def _check_active(active: np.ndarray) -> np.ndarray:
    active = np.asarray(active, dtype=complex)
    if active.shape != (ACTIVE_DIM, ACTIVE_DIM):
        raise ValueError(f"active block must be 4x4, got shape {active.shape}")
    residue = np.abs(active - active.conj().T).max()
    if residue > HERMITIAN_TOL:
        raise ValueError(f"active block is not Hermitian (residue {residue:.3g})")
    trace = np.trace(active).real
    if abs(trace - 1.0) > NORM_TOL:
        raise ValueError(f"active block diagonal must sum to 1, got {trace!r}")
    return active


def digital_active(k: int) -> np.ndarray:
    """Active block with all weight on basis state ``|k>``, k in 0..3."""
    if not 0 <= k < ACTIVE_DIM:
        raise ValueError(f"active state index must be in 0..3, got {k}")
    active = np.zeros((ACTIVE_DIM, ACTIVE_DIM), dtype=complex)
    active[k, k] = 1.0
    return active


def embed_superposition(c) -> np.ndarray:
    """Active block ``r_nk = conj(c_n) * c_k`` for amplitudes of the two-spin
    state ``sum_n c_n |n>``.

    Raises
    ------
    ValueError
        If ``c`` does not have four entries or is not normalized.
    """
    c = np.asarray(c, dtype=complex).reshape(-1)
    if c.shape != (ACTIVE_DIM,):
        raise ValueError(f"expected 4 amplitudes, got {c.size}")
    norm = float(np.sum(np.abs(c) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"amplitudes are not normalized: sum |c|^2 = {norm!r}")
    return np.outer(c.conj(), c)


def thermal_deviation(cfg: SpinSystemConfig, active: np.ndarray) -> np.ndarray:
    """Deviation matrix with ``active`` on indices 0-3 and the fixed thermal
    diagonal on the passive states."""
    if cfg.n_spins != 4:
        raise ValueError(
            f"the thermal deviation pattern is defined for 4 spins, got {cfg.n_spins}"
        )
    active = _check_active(active)
    rho = np.diag(np.concatenate([np.zeros(ACTIVE_DIM), PASSIVE_DIAGONAL])).astype(complex)
    rho[:ACTIVE_DIM, :ACTIVE_DIM] = active
    return rho
