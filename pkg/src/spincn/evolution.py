"""Propagation of the deviation matrix through a rectangular RF pulse.

Two independent routes are provided:

- :func:`evolve_step` integrates ``i d(rho)/dt = [H, rho]`` with classic
  fixed-step fourth-order Runge-Kutta, treating the dim^2 matrix elements as
  one linear system of equations of motion.
- :func:`evolve_exact` applies ``U rho U^dagger`` with ``U = exp(-i H t)``
  from a Hermitian eigendecomposition; it serves as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_DT = 1e-4
DEFAULT_STRIDE = 5000
HERMITIAN_TOL = 1e-12
IMAG_TOL = 1e-8

KERNELS = ("propagator", "loop")


class NumericalError(RuntimeError):
    """Propagation produced non-finite values."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class PulseSpec:
    """Rectangular pulse: constant RF frequency and amplitude over ``duration``."""

    rf_freq: float
    rabi: float
    duration: float

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f"pulse duration must be positive, got {self.duration}")
        if self.rabi < 0:
            raise ValueError(f"rabi must be >= 0, got {self.rabi}")


@dataclass
class TimeSeries:
    """Sampled trajectory: diagonal populations and <I+> at each sample time.

    ``final`` is the full deviation matrix at the last sample.
    """

    times: np.ndarray
    populations: np.ndarray  # (n_samples, dim), real
    i_plus: np.ndarray  # (n_samples,), complex
    final: np.ndarray
    dt: float
    n_steps: int


def pi_pulse_duration(rabi: float) -> float:
    """Duration of a resonant pi-pulse, ``pi / rabi``."""
    if not rabi > 0:
        raise ValueError(f"a pi-pulse needs a positive Rabi frequency, got {rabi}")
    return math.pi / rabi


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"Hamiltonian must be square, got shape {h.shape}")
    residue = np.abs(h - h.conj().T).max()
    if residue > HERMITIAN_TOL:
        raise ValueError(f"Hamiltonian is not Hermitian (residue {residue:.3g})")
    return h


def _n_spins(dim: int) -> int:
    n = dim.bit_length() - 1
    if 2**n != dim:
        raise ValueError(f"matrix dimension {dim} is not a power of two")
    return n


def total_raising_operator(dim: int) -> np.ndarray:
    """``I^+ = sum_a I^+_a`` on ``dim = 2^N`` states: ones at (n, m) whenever
    n is m with one spin lowered from 1 to 0."""
    n_spins = _n_spins(dim)
    op = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        for a in range(n_spins):
            if m >> a & 1:
                op[m & ~(1 << a), m] = 1.0
    return op


def measure_i_plus(rho: np.ndarray) -> complex:
    """Transverse magnetization ``Tr{I^+ rho}``."""
    rho = np.asarray(rho)
    i_plus = total_raising_operator(rho.shape[0])
    # Tr(A B) = sum_nk A_nk B_kn
    return complex(np.sum(i_plus * rho.T))


def populations(rho: np.ndarray) -> np.ndarray:
    """Diagonal entries ``r_nn`` as reals.

    Raises
    ------
    NumericalError
        If any diagonal entry carries an imaginary part above 1e-8.
    """
    diag = np.diagonal(np.asarray(rho))
    residue = np.abs(diag.imag).max(initial=0.0)
    if residue > IMAG_TOL:
        raise NumericalError(f"diagonal has imaginary residue {residue:.3g}")
    return diag.real.copy()


def liouvillian(h: np.ndarray) -> np.ndarray:
    """Generator ``L`` with ``d vec(rho)/dt = L vec(rho)`` for row-major vec.

    This is the dim^2 x dim^2 system of equations of motion for the matrix
    elements of rho.
    """
    dim = h.shape[0]
    eye = np.eye(dim, dtype=complex)
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T))


def rk4_step_matrix(h: np.ndarray, dt: float) -> np.ndarray:
    """One classic RK4 step for a constant linear generator, as a matrix.

    For ``y' = L y`` the four stages collapse to the degree-4 Taylor
    polynomial ``sum_k (dt L)^k / k!``.
    """
    return np.eye(h.shape[0] ** 2, dtype=complex) + _rk4_step_increment(h, dt)


def _rk4_step_increment(h: np.ndarray, dt: float) -> np.ndarray:
    # M - I, kept apart from the identity so its low-order bits survive
    a = dt * liouvillian(h)
    inc = a.copy()
    term = a
    for k in range(2, 5):
        term = term @ a / k
        inc = inc + term
    return inc


def _increment_power(inc: np.ndarray, k: int) -> np.ndarray:
    """``(I + inc)^k - I`` by binary powering, using
    ``(I + A)(I + B) = I + A + B + AB``."""
    result = np.zeros_like(inc)
    base = inc
    while k:
        if k & 1:
            result = result + base + result @ base
        k >>= 1
        if k:
            base = 2 * base + base @ base
    return result


def _rk4_loop(h: np.ndarray, rho: np.ndarray, dt: float, n: int) -> np.ndarray:
    def rhs(r):
        return -1j * (h @ r - r @ h)

    for _ in range(n):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


def evolve_step(
    h: np.ndarray,
    rho0: np.ndarray,
    duration: float,
    dt: float = DEFAULT_DT,
    stride: int = DEFAULT_STRIDE,
    kernel: str = "propagator",
) -> TimeSeries:
    """Integrate ``i d(rho)/dt = [H, rho]`` with fixed-step RK4.

    The step count is ``ceil(duration / dt)`` and the step is shrunk so that
    the last step lands exactly on ``duration``.  A sample is recorded at
    t = 0, every ``stride`` steps, and at the final time.

    ``kernel="propagator"`` applies the RK4 step as a precomputed dim^2 x dim^2
    matrix, raised to the ``stride`` power between samples (held as the
    offset from the identity to keep round-off from compounding);
    ``kernel="loop"`` evaluates the four stages on the dim x dim matrix every
    step.  Both compute the same discrete scheme.

    Raises
    ------
    ValueError
        On a non-Hermitian ``h``, ``dt <= 0``, ``duration < 0``, ``stride < 1``
        or an unknown kernel.
    NumericalError
        If the state becomes non-finite; ``err.step`` holds the step index.
    """
    h = _check_hermitian(h)
    rho = np.array(rho0, dtype=complex)
    if rho.shape != h.shape:
        raise ValueError(f"state shape {rho.shape} does not match Hamiltonian {h.shape}")
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError(f"dt must be positive, got {dt}")
    if not duration >= 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if int(stride) != stride or stride < 1:
        raise ValueError(f"stride must be a positive integer, got {stride}")
    if kernel not in KERNELS:
        raise ValueError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    stride = int(stride)

    n_steps = math.ceil(duration / dt - 1e-9) if duration > 0 else 0
    h_step = duration / n_steps if n_steps else dt
    dim = h.shape[0]

    if kernel == "propagator":
        one = _rk4_step_increment(h, h_step)
        powers = {}

        def advance(r, k):
            if k not in powers:
                powers[k] = _increment_power(one, k)
            return r + (powers[k] @ r.reshape(-1)).reshape(dim, dim)

    else:

        def advance(r, k):
            return _rk4_loop(h, r, h_step, k)

    i_plus_op = total_raising_operator(dim)
    times, pops, i_plus = [], [], []

    def record(step, r):
        times.append(duration if step == n_steps else step * h_step)
        pops.append(populations(r))
        i_plus.append(complex(np.sum(i_plus_op * r.T)))

    record(0, rho)
    step = 0
    while step < n_steps:
        k = min(stride, n_steps - step)
        # overflow is reported below with the step index
        with np.errstate(over="ignore", invalid="ignore"):
            rho = advance(rho, k)
        step += k
        if not np.isfinite(rho).all():
            raise NumericalError(f"non-finite state after step {step}", step=step)
        record(step, rho)

    return TimeSeries(
        times=np.array(times),
        populations=np.array(pops),
        i_plus=np.array(i_plus),
        final=rho,
        dt=h_step,
        n_steps=n_steps,
    )


def evolve_exact(h: np.ndarray, rho0: np.ndarray, t: float) -> np.ndarray:
    """``U rho0 U^dagger`` with ``U = exp(-i H t)`` via ``numpy.linalg.eigh``."""
    h = _check_hermitian(h)
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    try:
        energies, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as err:
        raise NumericalError(f"eigendecomposition failed: {err}") from err
    u = (vecs * np.exp(-1j * energies * t)) @ vecs.conj().T
    return u @ rho0 @ u.conj().T
