"""Slice-by-slice noisy simulation of scheduled circuits."""

from __future__ import annotations

import numpy as np

from ..synth.gates import PrimitiveCircuit, Slice, gate_unitary
from .channels import (
    DensityMatrix,
    apply_damping,
    apply_depolarizing,
    apply_diagonal_phase,
    n_qubits,
    zz_phases,
)
from .device import DeviceModel, NoiseModel


def apply_zz_frame(rho: DensityMatrix, t: float, device: DeviceModel) -> DensityMatrix:
    """Always-on ZZ evolution for time ``t`` in the calibrated qubit frame."""
    if t < 0:
        raise ValueError("negative duration")
    return apply_diagonal_phase(rho, zz_phases(t, device.zz_matrix, device.frame_detuning()))


def _slice_unitary(s: Slice, n: int) -> np.ndarray:
    u = np.eye(2**n, dtype=complex)
    for g in s.gates:
        if g.kind not in ("I", "IDLE"):
            u = gate_unitary(g.kind, g.qubits, g.angle, n) @ u
    return u


def idle_depolarizing(noise: NoiseModel, idle: float, t_1q: float) -> float:
    if not noise.idle_depol or idle <= 0 or noise.depol_1q == 0:
        return 0.0
    return 1.0 - (1.0 - noise.depol_1q) ** (idle / t_1q)


def simulate_slice(rho: DensityMatrix, s: Slice, device: DeviceModel, noise: NoiseModel,
                   t_1q: float | None = None) -> DensityMatrix:
    """Half ZZ frame, gates, per-gate depolarizing, damping, half ZZ frame."""
    n = n_qubits(rho)
    t_1q = device.durations.one_q if t_1q is None else t_1q
    dur = s.duration
    zz_on = noise.enable_zz and dur > 0 and np.any(device.zz_matrix)
    if zz_on:
        rho = apply_zz_frame(rho, dur / 2, device)
    u = _slice_unitary(s, n)
    rho = u @ rho @ u.conj().T
    for g in s.gates:
        if g.kind == "CNOT" and noise.depol_2q:
            rho = apply_depolarizing(rho, g.qubits, noise.depol_2q)
        elif g.kind in ("I", "X90", "Xm90", "Y90", "Ym90") and noise.depol_1q:
            rho = apply_depolarizing(rho, g.qubits, noise.depol_1q)
    for q in range(n):
        p = idle_depolarizing(noise, s.idle_time(q), t_1q)
        if p:
            rho = apply_depolarizing(rho, (q,), p)
    if noise.enable_damping and dur > 0:
        for q in range(n):
            rho = apply_damping(rho, q, dur, device.t1[q], device.t2[q])
    if zz_on:
        rho = apply_zz_frame(rho, dur / 2, device)
    return rho


def simulate_circuit(rho0: DensityMatrix, circ: PrimitiveCircuit, device: DeviceModel,
                     noise: NoiseModel) -> DensityMatrix:
    """Reference simulation: channels applied directly to the density matrix."""
    if not circ.scheduled:
        raise ValueError("simulate_circuit needs a scheduled circuit")
    if n_qubits(rho0) != circ.n or device.n != circ.n:
        raise ValueError("dimension mismatch between state, circuit and device")
    rho = rho0
    for s in circ.slices:
        rho = simulate_slice(rho, s, device, noise, circ.t_1q)
    return rho


def superoperator(channel, n: int) -> np.ndarray:
    """Matrix S with vec(channel(rho)) = S vec(rho), row-major vec."""
    d = 2**n
    cols = []
    for k in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[k] = 1.0
        cols.append(channel(e.reshape(d, d)).reshape(-1))
    return np.array(cols).T


class Simulator:
    """Fast path: caches one superoperator per distinct slice."""

    def __init__(self, device: DeviceModel, noise: NoiseModel):
        self.device = device
        self.noise = noise
        self.n = device.n
        self._cache: dict = {}

    def slice_superop(self, s: Slice, t_1q: float) -> np.ndarray:
        key = (s, t_1q)
        op = self._cache.get(key)
        if op is None:
            op = superoperator(lambda r: simulate_slice(r, s, self.device, self.noise, t_1q), self.n)
            self._cache[key] = op
        return op

    def run(self, vec: np.ndarray, circ: PrimitiveCircuit) -> np.ndarray:
        """Evolve a row-major vectorised density matrix through a scheduled circuit."""
        for s in circ.slices:
            if not s.duration and all(g.kind == "IDLE" for g in s.gates):
                continue
            vec = self.slice_superop(s, circ.t_1q) @ vec
        return vec

    def depolarize(self, vec: np.ndarray, qubits, p: float) -> np.ndarray:
        d = 2**self.n
        rho = apply_depolarizing(vec.reshape(d, d), qubits, p)
        return rho.reshape(-1)

    def simulate(self, rho0: DensityMatrix, circ: PrimitiveCircuit) -> DensityMatrix:
        d = 2**self.n
        return self.run(rho0.reshape(-1).astype(complex), circ).reshape(d, d)


def average_gate_fidelity(channel, n: int) -> float:
    """Average gate fidelity of a channel relative to the identity, via its Pauli transfer diagonal."""
    from ..clifford import pauli_basis

    d = 2**n
    total = 0.0
    for p in pauli_basis(n):
        m = p.to_matrix()
        total += np.real(np.trace(m @ channel(m))) / d
    f_pro = total / d**2
    return (d * f_pro + 1) / (d + 1)


def pauli_fidelities(channel, n: int) -> np.ndarray:
    from ..clifford import pauli_basis

    d = 2**n
    out = []
    for p in pauli_basis(n):
        m = p.to_matrix()
        out.append(np.real(np.trace(m @ channel(m))) / d)
    return np.array(out)

