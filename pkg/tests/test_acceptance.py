"""Acceptance criteria for the four-spin CN gate, each at its fixed tolerance.

Every test records one PASS/FAIL line, listed again in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from spincn import (
    build_hamiltonian,
    digital_active,
    embed_superposition,
    evolve_exact,
    evolve_step,
    pi_pulse_duration,
    run_cn_gate,
    spectrum_at_zero_field,
    thermal_deviation,
)
from spincn.acceptance import FIG3_AMPLITUDES, conservation

ORACLE_DT = 1e-3


@pytest.fixture(scope="module")
def clock():
    return time.perf_counter()


@pytest.fixture(scope="module")
def runs(clock):
    from spincn import SpinSystemConfig

    cfg = SpinSystemConfig()
    out = {}
    for name, active in (
        ("fig2a", digital_active(0)),
        ("fig2b", digital_active(1)),
        ("fig2c", digital_active(2)),
        ("fig2d", digital_active(3)),
        ("fig3", embed_superposition(FIG3_AMPLITUDES)),
    ):
        started = time.perf_counter()
        report = run_cn_gate(cfg, active, label=name)
        out[name] = (report, time.perf_counter() - started, thermal_deviation(cfg, active))
    return out


def test_c01_fig2a_transfer(runs, criterion):
    report, elapsed, _ = runs["fig2a"]
    pops = report.series.populations
    r00, r11 = pops[-1][0], pops[-1][1]
    rise = np.diff(pops[:, 0]).max()
    criterion("C1 fig2a r00(T) < 1e-3", r00 < 1e-3, r00, 1e-3)
    criterion("C1 fig2a 1 - r11(T) < 1e-3", 1 - r11 < 1e-3, 1 - r11, 1e-3)
    criterion("C1 fig2a r00 non-increasing (max step rise)", rise <= 0, rise, 0.0)
    criterion("C1 fig2a runtime (s)", elapsed < 2.0, elapsed, 2.0)
    assert r00 < 1e-3 and r11 > 1 - 1e-3 and rise <= 0 and elapsed < 2.0


def test_c02_fig2b_reverse_transfer(runs, criterion):
    pops = runs["fig2b"][0].series.populations
    r11, r00 = pops[-1][1], pops[-1][0]
    criterion("C2 fig2b r11(T) < 1e-3", r11 < 1e-3, r11, 1e-3)
    criterion("C2 fig2b 1 - r00(T) < 1e-3", 1 - r00 < 1e-3, 1 - r00, 1e-3)
    assert r11 < 1e-3 and r00 > 1 - 1e-3


@pytest.mark.parametrize("name", ["fig2c", "fig2d"])
def test_c03_non_resonant_immunity(runs, criterion, name):
    pops = runs[name][0].series.populations
    drift = np.abs(pops[-1] - pops[0]).max()
    criterion(f"C3 {name} max |dr_nn| over 16 states", drift < 1e-3, drift, 1e-3)
    assert drift < 1e-3


def test_c04_superposition(runs, criterion):
    pops = runs["fig3"][0].series.populations
    start, end = pops[0], pops[-1]
    e00, e11 = abs(end[0] - 0.2), abs(end[1] - 0.3)
    d22, d33 = abs(end[2] - start[2]), abs(end[3] - start[3])
    passive = np.abs(end[4:] - start[4:]).max()
    criterion("C4 fig3 |r00(T) - 0.2|", e00 < 1e-2, e00, 1e-2)
    criterion("C4 fig3 |r11(T) - 0.3|", e11 < 1e-2, e11, 1e-2)
    criterion("C4 fig3 |dr22|", d22 < 1e-3, d22, 1e-3)
    criterion("C4 fig3 |dr33|", d33 < 1e-3, d33, 1e-3)
    criterion("C4 fig3 passive drift", passive < 1e-3, passive, 1e-3)
    assert e00 < 1e-2 and e11 < 1e-2 and d22 < 1e-3 and d33 < 1e-3 and passive < 1e-3


def test_c05_spectrum(reference_cfg, criterion):
    spectrum = spectrum_at_zero_field(reference_cfg)
    ground_index, ground = spectrum[0]
    criterion("C5 ground energy == -530", ground == -530.0 and ground_index == 0, abs(ground + 530.0), 0.0)
    worst = 0.0
    for n, energy in spectrum:
        s = [0.5 - (n >> a & 1) for a in range(4)]
        closed = -sum(w * x for w, x in zip(reference_cfg.omega, s))
        closed -= 2 * reference_cfg.j_coupling * sum(s[a] * s[b] for a in range(4) for b in range(a + 1, 4))
        worst = max(worst, abs(energy - closed))
    criterion("C5 16-level spectrum vs closed form", worst <= 1e-12, worst, 1e-12)
    assert ground == -530.0 and ground_index == 0 and worst <= 1e-12


def test_c06_structure(reference_cfg, criterion):
    h = build_hamiltonian(reference_cfg)
    diag = np.count_nonzero(np.diagonal(h))
    off = np.count_nonzero(h - np.diag(np.diagonal(h)))
    criterion("C6 nonzero diagonal == 16", diag == 16, diag, 16)
    criterion("C6 nonzero off-diagonal == 64", off == 64, off, 64)
    assert (diag, off) == (16, 64)


def _oracle_gap(cfg, dt):
    h = build_hamiltonian(cfg)
    rho0 = thermal_deviation(cfg, digital_active(0))
    period = pi_pulse_duration(cfg.rabi)
    stepped = evolve_step(h, rho0, period, dt, stride=10**9).final
    return np.abs(stepped - evolve_exact(h, rho0, period)).max()


def test_c07_oracle_equivalence(reference_cfg, criterion):
    gap = _oracle_gap(reference_cfg, ORACLE_DT)
    criterion(f"C7 RK4 vs eigendecomposition at dt={ORACLE_DT:g}", gap < 1e-8, gap, 1e-8)
    assert gap < 1e-8


def test_c07_convergence_order(reference_cfg, criterion):
    ratio = _oracle_gap(reference_cfg, ORACLE_DT) / _oracle_gap(reference_cfg, ORACLE_DT / 2)
    ok = 12.0 <= ratio <= 20.0
    criterion("C7 error ratio on halving dt (16 +/- 25%)", ok, ratio, 16.0)
    assert ok


@pytest.mark.parametrize("name", ["fig2a", "fig2b", "fig2c", "fig2d", "fig3"])
def test_c08_conservation(runs, criterion, name):
    report, _, rho0 = runs[name]
    cons = conservation(rho0, report.series)
    criterion(f"C8 {name} trace drift", cons["trace"] < 1e-10, cons["trace"], 1e-10)
    criterion(f"C8 {name} hermiticity residue", cons["hermiticity"] < 1e-10, cons["hermiticity"], 1e-10)
    criterion(f"C8 {name} second-moment drift", cons["second_moment"] < 1e-8, cons["second_moment"], 1e-8)
    assert cons["trace"] < 1e-10 and cons["hermiticity"] < 1e-10 and cons["second_moment"] < 1e-8


def test_c09_rabi_midpoint(reference_cfg, runs, criterion):
    series = runs["fig2a"][0].series
    period = pi_pulse_duration(reference_cfg.rabi)
    h = build_hamiltonian(reference_cfg)
    rho0 = runs["fig2a"][2]
    r00_half = evolve_step(h, rho0, period / 2, stride=10**9).populations[-1][0]
    gap = abs(r00_half - 0.5)
    t_peak = series.times[np.argmax(np.abs(series.i_plus.imag))]
    offset = abs(t_peak - period / 2)
    spacing = np.diff(series.times).max()
    criterion("C9 |r00(T/2) - 0.5|", gap <= 0.01, gap, 0.01)
    criterion("C9 |t(max |Im<I+>|) - T/2| within one sample", offset <= spacing, offset, spacing)
    assert gap <= 0.01 and offset <= spacing


def test_c10_suite_wall_time(clock, criterion):
    elapsed = time.perf_counter() - clock
    criterion("C10 criteria 1-9 wall time (s)", elapsed < 60.0, elapsed, 60.0)
    assert elapsed < 60.0
