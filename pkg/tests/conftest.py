import numpy as np
import pytest

from spincn import SpinSystemConfig

_CRITERIA = []


@pytest.fixture
def reference_cfg():
    """omega_k = 100(k+1), J = 10, Omega = 0.1, w = 130."""
    return SpinSystemConfig(omega=(100.0, 200.0, 300.0, 400.0), j_coupling=10.0, rabi=0.1, rf_freq=130.0)


@pytest.fixture
def criterion():
    """Record one pass/fail line for the terminal summary."""

    def record(name, passed, measured, threshold):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}: measured {measured:.3e}, threshold {threshold:.3e}"
        print(line)
        _CRITERIA.append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


def brute_force_operator(n_spins, axis, a):
    """Matrix of a single-spin operator built element by element from bit
    manipulation, independent of the Kronecker construction."""
    dim = 2**n_spins
    op = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        bit = (m >> a) & 1
        flipped = m ^ (1 << a)
        if axis == "z":
            op[m, m] = 0.5 if bit == 0 else -0.5
        elif axis == "x":
            op[flipped, m] = 0.5
        elif axis == "y":
            # I^y|0> = (i/2)|1>, I^y|1> = (-i/2)|0>
            op[flipped, m] = 0.5j if bit == 0 else -0.5j
        elif axis == "plus" and bit == 1:
            op[flipped, m] = 1.0
    return op
