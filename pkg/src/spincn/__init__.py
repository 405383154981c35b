"""Density-matrix simulation of a single-pulse Control-Not gate on an
ensemble of Ising-coupled spin-1/2 molecules."""

from .operators import (
    SpinSystemConfig,
    bits_to_index,
    build_hamiltonian,
    build_spin_operator,
    index_to_bits,
    spectrum_at_zero_field,
)
from .states import digital_active, embed_superposition, thermal_deviation
from .evolution import (
    NumericalError,
    PulseSpec,
    TimeSeries,
    evolve_exact,
    evolve_step,
    measure_i_plus,
    pi_pulse_duration,
    populations,
)
from .gate import (
    GateReport,
    cn_expected_final,
    cn_resonance_frequency,
    run_cn_gate,
    truth_table_suite,
)

__version__ = "0.1.0"

__all__ = [
    "SpinSystemConfig",
    "bits_to_index",
    "build_hamiltonian",
    "build_spin_operator",
    "index_to_bits",
    "spectrum_at_zero_field",
    "digital_active",
    "embed_superposition",
    "thermal_deviation",
    "NumericalError",
    "PulseSpec",
    "TimeSeries",
    "evolve_exact",
    "evolve_step",
    "measure_i_plus",
    "pi_pulse_duration",
    "populations",
    "GateReport",
    "cn_expected_final",
    "cn_resonance_frequency",
    "run_cn_gate",
    "truth_table_suite",
]
