"""Noisy density-matrix simulation of a small transmon register."""

from .channels import (
    apply_damping,
    apply_depolarizing,
    basis_state,
    check_density_matrix,
    measure_zero_population,
    zero_state,
)
from .coherence import coherence_limit_epc, coherence_limit_epg, coherence_limit_table
from .device import ConfigError, DeviceModel, NoiseModel, default_paper_noise, load_json, paper_device
from .simulator import Simulator, simulate_circuit
from .timeline import Timeline, TimelineSimulator, simulate_timeline, stream_timeline

__all__ = [
    "ConfigError", "DeviceModel", "NoiseModel", "Simulator", "Timeline", "TimelineSimulator", "apply_damping", "apply_depolarizing",
    "basis_state", "check_density_matrix", "coherence_limit_epc", "coherence_limit_epg",
    "coherence_limit_table", "default_paper_noise", "load_json", "measure_zero_population",
    "paper_device", "simulate_circuit", "simulate_timeline", "stream_timeline", "zero_state",
]
