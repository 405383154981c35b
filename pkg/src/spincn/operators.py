"""Spin operators and the rotating-frame Ising Hamiltonian.

Conventions
-----------
- Frequencies are dimensionless angular frequencies and hbar = 1, so the
  Hamiltonian returned here is H/hbar.
- Basis states are labelled by a decimal index ``n``; bit ``a`` of ``n`` is
  the state of spin ``a`` and the most significant bit is spin ``N-1``.
  For four spins ``|b3 b2 b1 b0>`` maps to ``8*b3 + 4*b2 + 2*b1 + b0``.
- Single-spin state 0 is the ground state (I^z = +1/2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

AXES = ("x", "y", "z", "plus")

_SINGLE = {
    "x": np.array([[0, 0.5], [0.5, 0]], dtype=complex),
    "y": np.array([[0, -0.5j], [0.5j, 0]], dtype=complex),
    "z": np.array([[0.5, 0], [0, -0.5]], dtype=complex),
    # I^+ = I^x + i I^y takes |1> to |0>
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
}


@dataclass(frozen=True)
class SpinSystemConfig:
    """Physical parameters of one molecule and the applied RF field.

    ``omega`` holds the Larmor frequency of each spin, ``j_coupling`` the
    uniform Ising constant, ``rabi`` the Rabi frequency and ``rf_freq`` the
    frequency of the rotating frame.
    """

    omega: tuple[float, ...] = (100.0, 200.0, 300.0, 400.0)
    j_coupling: float = 10.0
    rabi: float = 0.1
    rf_freq: float = 130.0
    n_spins: int = field(default=4)

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(float(w) for w in self.omega))
        if int(self.n_spins) != self.n_spins or self.n_spins < 1:
            raise ValueError(f"n_spins must be a positive integer, got {self.n_spins}")
        if len(self.omega) != self.n_spins:
            raise ValueError(
                f"omega has {len(self.omega)} entries but n_spins = {self.n_spins}"
            )
        if any(not np.isfinite(w) or w <= 0 for w in self.omega):
            raise ValueError(f"all spin frequencies must be positive, got {self.omega}")
        if not np.isfinite(self.rabi) or self.rabi < 0:
            raise ValueError(f"rabi must be >= 0, got {self.rabi}")
        if not (np.isfinite(self.j_coupling) and np.isfinite(self.rf_freq)):
            raise ValueError("j_coupling and rf_freq must be finite")

    @property
    def dim(self) -> int:
        return 2**self.n_spins

    def replace(self, **changes) -> "SpinSystemConfig":
        values = dict(
            omega=self.omega,
            j_coupling=self.j_coupling,
            rabi=self.rabi,
            rf_freq=self.rf_freq,
            n_spins=self.n_spins,
        )
        values.update(changes)
        if "omega" in changes and "n_spins" not in changes:
            values["n_spins"] = len(values["omega"])
        return SpinSystemConfig(**values)


def index_to_bits(n: int, n_spins: int) -> tuple[int, ...]:
    """Spin states ``(b_{N-1}, ..., b_1, b_0)`` of basis index ``n``."""
    if not 0 <= n < 2**n_spins:
        raise ValueError(f"index {n} out of range for {n_spins} spins")
    return tuple((n >> a) & 1 for a in reversed(range(n_spins)))


def bits_to_index(bits) -> int:
    """Inverse of :func:`index_to_bits`; ``bits`` is most significant first."""
    n = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"spin state must be 0 or 1, got {b}")
        n = (n << 1) | b
    return n


def _embed(single: np.ndarray, spin_index: int, n_spins: int) -> np.ndarray:
    # kron order runs from spin N-1 (leftmost factor) down to spin 0
    factors = [np.eye(2, dtype=complex)] * n_spins
    factors[n_spins - 1 - spin_index] = single
    return reduce(np.kron, factors)


def build_spin_operator(cfg: SpinSystemConfig, axis: str, spin_index: int) -> np.ndarray:
    """Single-spin operator ``I^axis_a`` acting on the full 2^N space.

    ``axis`` is one of ``"x"``, ``"y"``, ``"z"``, ``"plus"``.
    """
    if axis not in _SINGLE:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if not 0 <= spin_index < cfg.n_spins:
        raise IndexError(f"spin index {spin_index} out of range for {cfg.n_spins} spins")
    return _embed(_SINGLE[axis], spin_index, cfg.n_spins)


def total_spin_operator(cfg: SpinSystemConfig, axis: str) -> np.ndarray:
    """Sum of ``I^axis_a`` over all spins."""
    return sum(build_spin_operator(cfg, axis, a) for a in range(cfg.n_spins))


def build_hamiltonian(cfg: SpinSystemConfig) -> np.ndarray:
    """Rotating-frame Hamiltonian H/hbar.

    H = -sum_a [(omega_a - w) I^z_a + 2 J sum_{b>a} I^z_a I^z_b + Omega I^x_a]
    """
    n = cfg.n_spins
    iz = [build_spin_operator(cfg, "z", a) for a in range(n)]
    ix = [build_spin_operator(cfg, "x", a) for a in range(n)]
    h = np.zeros((cfg.dim, cfg.dim), dtype=complex)
    for a in range(n):
        h -= (cfg.omega[a] - cfg.rf_freq) * iz[a] + cfg.rabi * ix[a]
        for b in range(a + 1, n):
            h -= 2.0 * cfg.j_coupling * (iz[a] @ iz[b])
    return h


def spectrum_at_zero_field(cfg: SpinSystemConfig) -> list[tuple[int, float]]:
    """Energies of all basis states for h = w = 0, sorted ascending.

    With no RF field the Hamiltonian is diagonal in the computational basis,
    so each basis index is its own eigenstate.  Ties are broken by index.
    """
    h = build_hamiltonian(cfg.replace(rabi=0.0, rf_freq=0.0))
    energies = np.real(np.diag(h))
    return sorted(((n, float(e)) for n, e in enumerate(energies)), key=lambda p: (p[1], p[0]))


def flip_frequency(cfg: SpinSystemConfig, spin_index: int, basis_index: int) -> float:
    """Zero-field transition frequency for flipping ``spin_index`` out of
    ``basis_index``, taken as E(excited) - E(ground) of the pair."""
    lo = basis_index & ~(1 << spin_index)
    hi = basis_index | (1 << spin_index)
    energy = dict(spectrum_at_zero_field(cfg))
    return energy[hi] - energy[lo]
