"""Control-Not gate from a single resonant pi-pulse.

Within the active states ``|0 0 b1 b0>`` spin 1 is the control and spin 0 the
target.  Qubit values are inverted with respect to spin states (spin ground
state 0 carries qubit value 1), so the target flips when spin 1 is in
state 0: populations of ``|0>`` and ``|1>`` swap, ``|2>`` and ``|3>`` stay.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .evolution import DEFAULT_DT, DEFAULT_STRIDE, TimeSeries, evolve_step, pi_pulse_duration
from .operators import SpinSystemConfig, build_hamiltonian
from .states import ACTIVE_DIM, digital_active, thermal_deviation

ACTIVE_TOL = 1e-2
PASSIVE_TOL = 1e-3
RESONANCE_TOL = 1e-9
TARGET = 0
CONTROL = 1


def cn_resonance_frequency(
    cfg: SpinSystemConfig, target: int = TARGET, others_ground: bool = True
) -> float:
    """Transition frequency of ``target`` with every other spin in state 0.

    Each antiparallel neighbour shifts the flip energy by J, so this is
    ``omega_target + (N-1) J``.  With ``others_ground=False`` the control
    spin is taken as excited instead, giving ``omega_target + (N-3) J``: the
    nearest transition that the gate pulse must leave alone.
    """
    if not 0 <= target < cfg.n_spins:
        raise ValueError(f"target spin {target} out of range for {cfg.n_spins} spins")
    aligned = cfg.n_spins - 1 if others_ground else cfg.n_spins - 3
    return cfg.omega[target] + aligned * cfg.j_coupling


def cn_expected_final(initial_active: np.ndarray) -> np.ndarray:
    """Active block after an ideal CN pulse, diagonal only.

    Populations of indices 0 and 1 are exchanged; 2 and 3 are unchanged.
    Off-diagonal entries are left at zero because the pulse adds a phase
    that is not predicted here.
    """
    diag = np.real(np.diagonal(np.asarray(initial_active))).copy()
    diag[[0, 1]] = diag[[1, 0]]
    return np.diag(diag).astype(complex)


@dataclass
class GateReport:
    initial_label: str
    initial_populations: list
    final_populations: list
    expected_populations: list
    max_passive_drift: float
    active_error: float
    passed: bool
    active_tol: float = ACTIVE_TOL
    passive_tol: float = PASSIVE_TOL
    final_active_block: list = field(default_factory=list)  # [re, im] pairs, not asserted
    series: TimeSeries | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "series"}
        return out


def _active_label(active: np.ndarray) -> str:
    diag = np.real(np.diagonal(active))
    if np.count_nonzero(np.abs(active) > 1e-15) == 1:
        return f"digital |{int(np.argmax(diag))}>"
    return "superposition r_nn=(" + ", ".join(f"{d:.6g}" for d in diag) + ")"


def run_cn_gate(
    cfg: SpinSystemConfig,
    initial_active: np.ndarray,
    dt: float = DEFAULT_DT,
    *,
    stride: int = DEFAULT_STRIDE,
    duration: float | None = None,
    override_resonance: bool = False,
    active_tol: float = ACTIVE_TOL,
    passive_tol: float = PASSIVE_TOL,
    label: str | None = None,
) -> GateReport:
    """Apply one pi-pulse to the thermal state built from ``initial_active``
    and compare the final populations with the CN expectation.

    ``duration`` defaults to ``pi / cfg.rabi``; pass it explicitly to run a
    zero-amplitude pulse.  The RF frequency must match
    :func:`cn_resonance_frequency` unless ``override_resonance`` is set.
    """
    resonance = cn_resonance_frequency(cfg)
    if not override_resonance and abs(cfg.rf_freq - resonance) > RESONANCE_TOL:
        raise ValueError(
            f"rf_freq {cfg.rf_freq} is off the CN resonance {resonance}; "
            "set override_resonance to run anyway"
        )
    if duration is None:
        duration = pi_pulse_duration(cfg.rabi)

    rho0 = thermal_deviation(cfg, initial_active)
    series = evolve_step(build_hamiltonian(cfg), rho0, duration, dt, stride)

    initial = series.populations[0]
    final = series.populations[-1]
    expected = initial.copy()
    expected[:ACTIVE_DIM] = np.real(np.diagonal(cn_expected_final(rho0[:ACTIVE_DIM, :ACTIVE_DIM])))

    active_error = float(np.abs(final[:ACTIVE_DIM] - expected[:ACTIVE_DIM]).max())
    passive_drift = float(np.abs(final[ACTIVE_DIM:] - initial[ACTIVE_DIM:]).max())
    block = series.final[:ACTIVE_DIM, :ACTIVE_DIM]
    return GateReport(
        initial_label=label or _active_label(rho0[:ACTIVE_DIM, :ACTIVE_DIM]),
        initial_populations=initial.tolist(),
        final_populations=final.tolist(),
        expected_populations=expected.tolist(),
        max_passive_drift=passive_drift,
        active_error=active_error,
        passed=bool(active_error <= active_tol and passive_drift <= passive_tol),
        active_tol=active_tol,
        passive_tol=passive_tol,
        final_active_block=[[[z.real, z.imag] for z in row] for row in block],
        series=series,
    )


def truth_table_suite(cfg: SpinSystemConfig, dt: float = DEFAULT_DT, **kwargs) -> list[GateReport]:
    """Run :func:`run_cn_gate` for each digital active state ``|0>`` .. ``|3>``.

    A failing propagation is re-raised naming the offending input state.
    """
    reports = []
    for k in range(ACTIVE_DIM):
        try:
            reports.append(run_cn_gate(cfg, digital_active(k), dt, label=f"digital |{k}>", **kwargs))
        except Exception as err:
            raise type(err)(f"truth table run for |{k}> failed: {err}") from err
    return reports
