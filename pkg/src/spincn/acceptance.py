"""End-to-end verification of the four-spin CN experiments.

Each check returns a :class:`Check` carrying the measured value and the
threshold it was held to, so failures can be reported with numbers.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .evolution import DEFAULT_DT, DEFAULT_STRIDE, evolve_exact, evolve_step, pi_pulse_duration
from .gate import run_cn_gate
from .operators import SpinSystemConfig, build_hamiltonian, spectrum_at_zero_field
from .states import digital_active, embed_superposition, thermal_deviation

FIG3_AMPLITUDES = (math.sqrt(0.3), math.sqrt(0.2), 1 / math.sqrt(3), 1 / math.sqrt(6))

EXPERIMENTS = {
    "fig2a": ("digital", 0),
    "fig2b": ("digital", 1),
    "fig2c": ("digital", 2),
    "fig2d": ("digital", 3),
    "fig3": ("superposition", FIG3_AMPLITUDES),
}

TRANSFER_TOL = 1e-3
DRIFT_TOL = 1e-3
FIG3_ACTIVE_TOL = 1e-2
TRACE_TOL = 1e-10
HERMITIAN_TOL = 1e-10
SECOND_MOMENT_TOL = 1e-8
ORACLE_TOL = 1e-8
CONVERGENCE_RANGE = (12.0, 20.0)
RABI_MID_TOL = 1e-2
EXACT_TOL = 1e-12


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.measured = float(self.measured)
        self.threshold = float(self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: measured {self.measured:.3e} (threshold {self.threshold:.3e})"
        return f"{text} {self.detail}".rstrip()


def initial_active(experiment: str, amplitudes=None) -> np.ndarray:
    if experiment == "custom":
        if amplitudes is None:
            raise ValueError("experiment 'custom' needs amplitudes")
        return embed_superposition(amplitudes)
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}")
    kind, arg = EXPERIMENTS[experiment]
    return digital_active(arg) if kind == "digital" else embed_superposition(arg)


def conservation(rho0: np.ndarray, series) -> dict:
    """Trace drift, Hermiticity residue and second-moment drift of a run.

    Trace drift is taken over every sample; the others use the final state.
    """
    trace0 = np.trace(rho0)
    final = series.final
    return {
        "trace": float(np.abs(series.populations.sum(axis=1) - trace0.real).max()),
        "hermiticity": float(np.abs(final - final.conj().T).max()),
        "second_moment": float(abs(np.trace(final @ final) - np.trace(rho0 @ rho0))),
    }


def oracle_error(cfg: SpinSystemConfig, dt: float, duration: float | None = None) -> float:
    """Largest elementwise gap between the RK4 and eigendecomposition routes
    for the |0> initial state."""
    h = build_hamiltonian(cfg)
    rho0 = thermal_deviation(cfg, digital_active(0))
    if duration is None:
        duration = pi_pulse_duration(cfg.rabi)
    stepped = evolve_step(h, rho0, duration, dt, stride=10**9).final
    return float(np.abs(stepped - evolve_exact(h, rho0, duration)).max())


def rabi_midpoint(cfg: SpinSystemConfig, dt: float, stride: int) -> tuple[float, float, float]:
    """``(r00(T/2), |t_max - T/2|, sample spacing)`` for the |0> run, where
    ``t_max`` is the sample at which |Im <I+>| peaks."""
    h = build_hamiltonian(cfg)
    rho0 = thermal_deviation(cfg, digital_active(0))
    period = pi_pulse_duration(cfg.rabi)
    half = evolve_step(h, rho0, period / 2, dt, stride=10**9)
    r00_half = float(half.populations[-1][0])
    full = evolve_step(h, rho0, period, dt, stride)
    t_peak = float(full.times[np.argmax(np.abs(full.i_plus.imag))])
    spacing = float(np.diff(full.times).max())
    return r00_half, abs(t_peak - period / 2), spacing


def run_checks(
    cfg: SpinSystemConfig | None = None,
    dt: float = DEFAULT_DT,
    stride: int = DEFAULT_STRIDE,
) -> list[Check]:
    """Every acceptance check for ``cfg`` (defaults to the four-spin
    reference parameters) at step ``dt``."""
    cfg = cfg or SpinSystemConfig()
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    checks: list[Check] = []
    h = build_hamiltonian(cfg)
    started = time.perf_counter()

    runs = {}
    for name in EXPERIMENTS:
        try:
            runs[name] = run_cn_gate(cfg, initial_active(name), dt, stride=stride, label=name)
        except ValueError as err:
            checks.append(Check(f"{name} run", False, math.nan, 0.0, str(err)))

    for name, k in (("fig2a", 0), ("fig2b", 1)):
        if name not in runs:
            continue
        pops = runs[name].series.populations
        src, dst = k, 1 - k
        gap = max(pops[-1][src], 1.0 - pops[-1][dst])
        checks.append(Check(f"{name} transfer |{src}>->|{dst}>", gap < TRANSFER_TOL, gap, TRANSFER_TOL))
    if "fig2a" in runs:
        rise = float(np.diff(runs["fig2a"].series.populations[:, 0]).max())
        checks.append(Check("fig2a r00 non-increasing", rise <= 0.0, rise, 0.0))

    for name in ("fig2a", "fig2b", "fig2c", "fig2d"):
        if name not in runs:
            continue
        report = runs[name]
        checks.append(
            Check(
                f"{name} gate report",
                report.passed,
                max(report.active_error, report.max_passive_drift),
                report.passive_tol,
                f"active_error={report.active_error:.3e} passive_drift={report.max_passive_drift:.3e}",
            )
        )
    for name in ("fig2c", "fig2d"):
        if name not in runs:
            continue
        pops = runs[name].series.populations
        drift = float(np.abs(pops[-1] - pops[0]).max())
        checks.append(Check(f"{name} all-state drift", drift < DRIFT_TOL, drift, DRIFT_TOL))

    if "fig3" in runs:
        pops = runs["fig3"].series.populations
        start, end = pops[0], pops[-1]
        swap = max(abs(end[0] - start[1]), abs(end[1] - start[0]))
        checks.append(Check("fig3 swap r00<->r11", swap < FIG3_ACTIVE_TOL, swap, FIG3_ACTIVE_TOL))
        held = float(np.abs(end[2:] - start[2:]).max())
        checks.append(Check("fig3 r22, r33 and passive drift", held < DRIFT_TOL, held, DRIFT_TOL))

    spectrum = dict(spectrum_at_zero_field(cfg))
    ground_formula = -0.5 * (sum(cfg.omega) + cfg.n_spins * (cfg.n_spins - 1) / 2 * cfg.j_coupling)
    ground_gap = abs(spectrum[0] - ground_formula)
    is_lowest = min(spectrum, key=spectrum.get) == 0
    checks.append(Check("zero-field ground energy", ground_gap == 0.0 and is_lowest, ground_gap, 0.0,
                        f"E0={spectrum[0]!r}"))
    closed = [_closed_form_energy(cfg, n) for n in range(cfg.dim)]
    level_gap = max(abs(spectrum[n] - closed[n]) for n in range(cfg.dim))
    checks.append(Check("zero-field spectrum closed form", level_gap <= EXACT_TOL, level_gap, EXACT_TOL))

    diag_nonzero = int(np.count_nonzero(np.diagonal(h)))
    off_nonzero = int(np.count_nonzero(h - np.diag(np.diagonal(h))))
    checks.append(Check("hamiltonian 16 diagonal / 64 off-diagonal", (diag_nonzero, off_nonzero) == (16, 64),
                        float(off_nonzero), 64.0, f"diagonal={diag_nonzero}"))

    err = oracle_error(cfg, dt)
    checks.append(Check(f"oracle equivalence dt={dt:g}", err < ORACLE_TOL, err, ORACLE_TOL))
    coarse, fine = oracle_error(cfg, 2 * dt), err
    ratio = coarse / fine if fine > 0 else math.inf
    lo, hi = CONVERGENCE_RANGE
    checks.append(Check(f"convergence order dt={2 * dt:g}->{dt:g}", lo <= ratio <= hi, ratio, 16.0,
                        f"accepted range [{lo:g}, {hi:g}]"))

    for name, report in runs.items():
        rho0 = thermal_deviation(cfg, initial_active(name))
        cons = conservation(rho0, report.series)
        checks.append(Check(f"{name} trace drift", cons["trace"] < TRACE_TOL, cons["trace"], TRACE_TOL))
        checks.append(Check(f"{name} hermiticity", cons["hermiticity"] < HERMITIAN_TOL, cons["hermiticity"],
                            HERMITIAN_TOL))
        checks.append(Check(f"{name} second moment drift", cons["second_moment"] < SECOND_MOMENT_TOL,
                            cons["second_moment"], SECOND_MOMENT_TOL))

    if "fig2a" in runs:
        r00_half, offset, spacing = rabi_midpoint(cfg, dt, stride)
        checks.append(Check("rabi midpoint r00(T/2)", abs(r00_half - 0.5) <= RABI_MID_TOL,
                            abs(r00_half - 0.5), RABI_MID_TOL))
        checks.append(Check("|Im<I+>| peak at T/2", offset <= spacing, offset, spacing))

    elapsed = time.perf_counter() - started
    checks.append(Check("wall time (s)", elapsed < 60.0, elapsed, 60.0))
    return checks


def _closed_form_energy(cfg: SpinSystemConfig, n: int) -> float:
    s = [0.5 - ((n >> a) & 1) for a in range(cfg.n_spins)]
    zeeman = -sum(cfg.omega[a] * s[a] for a in range(cfg.n_spins))
    ising = -2 * cfg.j_coupling * sum(
        s[a] * s[b] for a in range(cfg.n_spins) for b in range(a + 1, cfg.n_spins)
    )
    return zeeman + ising


def summary(checks: list[Check]) -> dict:
    return {
        "passed": all(c.passed for c in checks),
        "n_checks": len(checks),
        "n_failed": sum(not c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
