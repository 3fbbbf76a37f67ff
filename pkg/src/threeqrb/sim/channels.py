"""Density-matrix channels on small registers (qubit 0 most significant).

All functions take and return plain ``(2**n, 2**n)`` complex arrays and never
modify their input.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..synth.gates import PrimitiveGate, gate_unitary

DensityMatrix = np.ndarray


def n_qubits(rho: DensityMatrix) -> int:
    d = rho.shape[0]
    n = d.bit_length() - 1
    if rho.shape != (d, d) or 1 << n != d:
        raise ValueError(f"not a 2^n x 2^n matrix: shape {rho.shape}")
    return n


def zero_state(n: int) -> DensityMatrix:
    rho = np.zeros((2**n, 2**n), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def basis_state(bits: str) -> DensityMatrix:
    """``basis_state("10")`` is |10> with qubit 0 written first."""
    n = len(bits)
    rho = np.zeros((2**n, 2**n), dtype=complex)
    i = int(bits, 2)
    rho[i, i] = 1.0
    return rho


def check_density_matrix(rho: DensityMatrix, atol: float = 1e-10, eig_tol: float = 1e-9) -> None:
    n_qubits(rho)
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError(f"trace {np.trace(rho)} differs from 1")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("matrix is not Hermitian")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -eig_tol:
        raise ValueError("matrix has a negative eigenvalue")


def _check_qubits(qubits: Sequence[int], n: int) -> tuple:
    qs = tuple(int(q) for q in qubits)
    if not qs:
        raise ValueError("qubit subset is empty")
    if len(set(qs)) != len(qs) or any(not 0 <= q < n for q in qs):
        raise ValueError(f"invalid qubits {qs} for a {n}-qubit register")
    return qs


def apply_unitary(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    return u @ rho @ u.conj().T


def apply_gate(rho: DensityMatrix, g: PrimitiveGate) -> DensityMatrix:
    n = n_qubits(rho)
    _check_qubits(g.qubits, n)
    if g.kind in ("I", "IDLE"):
        return rho.copy()
    return apply_unitary(rho, gate_unitary(g.kind, g.qubits, g.angle, n))


def partial_trace_replace(rho: DensityMatrix, qubits: Sequence[int]) -> DensityMatrix:
    """Trace out ``qubits`` and put the maximally mixed state in their place."""
    n = n_qubits(rho)
    qs = set(_check_qubits(qubits, n))
    # sublist indices: rows 0..n-1, cols n..2n-1, traced 2n..3n-1
    row_idx = [2 * n + q if q in qs else q for q in range(n)]
    col_idx = [2 * n + q if q in qs else n + q for q in range(n)]
    operands = [rho.reshape([2] * (2 * n)), row_idx + col_idx]
    eye = np.eye(2) / 2
    for q in sorted(qs):
        operands += [eye, [q, n + q]]
    out = np.einsum(*operands, list(range(2 * n)))
    return out.reshape(2**n, 2**n)


def apply_depolarizing(rho: DensityMatrix, qubits: Sequence[int], p: float) -> DensityMatrix:
    """``(1 - p) rho + p * (Tr_S rho) (x) I_S / d_S`` on the subset ``S``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability {p} outside [0, 1]")
    n = n_qubits(rho)
    _check_qubits(qubits, n)
    if p == 0:
        return rho.copy()
    return (1 - p) * rho + p * partial_trace_replace(rho, qubits)


def _axes_front(rho: DensityMatrix, q: int, n: int) -> np.ndarray:
    t = rho.reshape([2] * (2 * n))
    return np.moveaxis(t, (q, n + q), (0, 1))


def apply_damping(rho: DensityMatrix, qubit: int, t: float, t1: float, t2: float) -> DensityMatrix:
    """Amplitude damping plus pure dephasing: P(1) decays as e^{-t/T1}, coherences as e^{-t/T2}."""
    if t < 0:
        raise ValueError("negative duration")
    if t2 > 2 * t1:
        raise ValueError(f"T2={t2} exceeds 2*T1={2 * t1}")
    n = n_qubits(rho)
    _check_qubits((qubit,), n)
    if t == 0:
        return rho.copy()
    e1 = math.exp(-t / t1) if math.isfinite(t1) else 1.0
    e2 = math.exp(-t / t2) if math.isfinite(t2) else 1.0
    out = rho.copy()
    v = _axes_front(out, qubit, n)
    excited = v[1, 1].copy()
    v[0, 0] += (1 - e1) * excited
    v[1, 1] = e1 * excited
    v[0, 1] *= e2
    v[1, 0] *= e2
    return out


def zz_phases(t: float, zz: np.ndarray, detuning: np.ndarray) -> np.ndarray:
    """Phase of each basis state under exp(-i 2 pi t [sum_{i<j} zz_ij n_i n_j - sum_i det_i n_i])."""
    n = zz.shape[0]
    idx = np.arange(2**n)
    occ = np.array([(idx >> (n - 1 - q)) & 1 for q in range(n)], dtype=float)  # (n, 2^n)
    energy = np.zeros(2**n)
    for i in range(n):
        for j in range(i + 1, n):
            energy += zz[i, j] * occ[i] * occ[j]
        energy -= detuning[i] * occ[i]
    return -2 * math.pi * t * energy


def apply_diagonal_phase(rho: DensityMatrix, phases: np.ndarray) -> DensityMatrix:
    d = np.exp(1j * phases)
    return rho * np.outer(d, d.conj())


def measure_zero_population(rho: DensityMatrix, subset: Sequence[int], mode: str = "joint"):
    """Probability that all of ``subset`` read 0 (``joint``) or per-qubit P(0) (``marginal``)."""
    n = n_qubits(rho)
    qs = _check_qubits(subset, n)
    probs = np.clip(np.real(np.diag(rho)), 0.0, None)
    idx = np.arange(2**n)
    bits = {q: (idx >> (n - 1 - q)) & 1 for q in qs}
    if mode == "joint":
        mask = np.ones(2**n, dtype=bool)
        for q in qs:
            mask &= bits[q] == 0
        return float(probs[mask].sum())
    if mode == "marginal":
        return [float(probs[bits[q] == 0].sum()) for q in qs]
    raise ValueError(f"unknown observable mode {mode!r}")
