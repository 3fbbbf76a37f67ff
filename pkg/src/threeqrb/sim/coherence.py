"""Closed-form coherence limits for T1/T2-limited gates and Cliffords."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .device import DeviceModel


def _decays(t: float, t1: float, t2: float) -> tuple:
    e1 = math.exp(-t / t1) if math.isfinite(t1) else 1.0
    e2 = math.exp(-t / t2) if math.isfinite(t2) else 1.0
    return e1, e2


def process_fidelity(t: float, qubits: Sequence[int], device: DeviceModel) -> float:
    """Entanglement fidelity of independent damping on ``qubits`` for time ``t``."""
    f = 1.0
    for q in qubits:
        e1, e2 = _decays(t, device.t1[q], device.t2[q])
        f *= (1 + e1 + 2 * e2) / 4
    return f


def coherence_limit_epg(t: float, qubits: Sequence[int], device: DeviceModel) -> float:
    """Error per gate, ``1 - F_avg``, of a gate of duration ``t`` limited only by T1 and T2."""
    if t < 0:
        raise ValueError("negative duration")
    d = 2 ** len(qubits)
    f = process_fidelity(t, qubits, device)
    return 1.0 - (d * f + 1) / (d + 1)


def pauli_decay(t: float, qubits: Sequence[int], device: DeviceModel) -> float:
    """Clifford-twirled decay parameter of the damping channel on ``qubits``."""
    d2 = 4 ** len(qubits)
    prod = 1.0
    for q in qubits:
        e1, e2 = _decays(t, device.t1[q], device.t2[q])
        prod *= 1 + e1 + 2 * e2
    return (prod - 1) / (d2 - 1)


def coherence_limit_epc(t: float, qubits: Sequence[int], device: DeviceModel) -> float:
    """Error per Clifford when the whole Clifford of duration ``t`` only decoheres."""
    d = 2 ** len(qubits)
    return (d - 1) / d * (1 - pauli_decay(t, qubits, device))


def coherence_limit_table(device: DeviceModel) -> dict:
    """1Q limits at the 1Q-gate duration and 2Q limits at the CNOT duration."""
    out = {}
    for q in range(device.n):
        out[(q,)] = coherence_limit_epg(device.durations.one_q, (q,), device)
    for a in range(device.n):
        for b in range(a + 1, device.n):
            out[(a, b)] = coherence_limit_epg(device.durations.cnot, (a, b), device)
    return out


def mean_duration(durations) -> float:
    arr = np.asarray(list(durations), dtype=float)
    if arr.size == 0:
        raise ValueError("no durations")
    return float(arr.mean())
