"""Conversions between decay parameters and error rates, and 3Q predictions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..sim.coherence import pauli_decay
from ..sim.device import DeviceModel


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")


def epc_from_alpha(n: int, alpha: float) -> float:
    """Error per Clifford ``(2^n - 1)/2^n * (1 - alpha)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_alpha(alpha)
    d = 2**n
    return (d - 1) / d * (1 - alpha)


def alpha_from_epc(n: int, epc: float) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    d = 2**n
    if not 0.0 <= epc <= (d - 1) / d:
        raise ValueError(f"EPC {epc} outside [0, {(d - 1) / d}]")
    return 1 - epc * d / (d - 1)


def epg_from_epc(epc: float, gates_per_clifford: float) -> float:
    """Small-error approximation: the Clifford error shared evenly over its gates."""
    if gates_per_clifford <= 0:
        raise ValueError("gates_per_clifford must be positive")
    return epc / gates_per_clifford


def epg_from_epc_compound(n: int, epc: float, gates_per_clifford: float) -> float:
    """Per-gate error from ``alpha_gate = alpha_clifford ** (1 / gates)``."""
    if gates_per_clifford <= 0:
        raise ValueError("gates_per_clifford must be positive")
    alpha = alpha_from_epc(n, epc)
    return epc_from_alpha(n, alpha ** (1.0 / gates_per_clifford))


def sector_alpha_2q(alpha_cnot: float, alpha_1q: tuple, n1: tuple, n_cnot: float = 1.5) -> float:
    """Decay of a 2Q Clifford built from ``n_cnot`` CNOTs and ``n1[q]`` 1Q gates per qubit."""
    a1a, a1b = alpha_1q
    sa = a1a ** n1[0] * alpha_cnot**n_cnot
    sb = a1b ** n1[1] * alpha_cnot**n_cnot
    sp = a1a ** n1[0] * a1b ** n1[1] * alpha_cnot**n_cnot
    return (3 * sa + 3 * sb + 9 * sp) / 15


def extract_2q_epg(epc_2q: float, epg_1q: tuple, n1: tuple, n_cnot: float = 1.5) -> tuple:
    """CNOT ``(alpha, EPG)`` from a 2Q EPC and the 1Q EPGs of both qubits."""
    target = alpha_from_epc(2, epc_2q)
    alpha_1q = tuple(alpha_from_epc(1, e) for e in epg_1q)
    if target == 1.0 and all(a == 1.0 for a in alpha_1q):
        return 1.0, 0.0

    def f(x):
        return sector_alpha_2q(x, alpha_1q, n1, n_cnot) - target

    lo, hi = f(0.0), f(1.0)
    if lo > 0 or hi < 0:
        raise ValueError("no CNOT decay parameter in [0, 1] reproduces the 2Q EPC")
    if hi == 0:
        a = 1.0
    else:
        a = brentq(f, 0.0, 1.0, xtol=1e-15, rtol=1e-15)
    return a, epc_from_alpha(2, a)


@dataclass(frozen=True)
class PredictionInputs:
    alpha_1q: float
    alpha_2q: float
    n1: float
    n2: float

    def __post_init__(self):
        _check_alpha(self.alpha_1q)
        _check_alpha(self.alpha_2q)
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("gate counts must be non-negative")


def predict_alpha_3q(inp: PredictionInputs) -> float:
    """3Q decay for homogeneous rates, spreading the gate counts evenly over qubits and pairs."""
    a = inp.alpha_1q ** (inp.n1 / 3)
    b = inp.alpha_2q ** (inp.n2 / 3)
    return a * b**2 / 7 * (1 + 3 * a * b + 3 * a**2 * b)


def predict_epc_3q(inp: PredictionInputs) -> float:
    return epc_from_alpha(3, predict_alpha_3q(inp))


def predict_alpha_general(alpha_1q: dict, alpha_2q: dict, n1: dict, n2: dict, n: int = 3) -> float:
    """Sector average with per-qubit and per-pair rates and counts.

    A Pauli with support S decays by the 1Q factors of every qubit in S and the
    2Q factors of every pair touching S. ``n1[q]`` and ``n2[pair]`` are gate
    counts per Clifford. This extends the homogeneous formula.
    """
    pairs = list(itertools.combinations(range(n), 2))
    total = 0.0
    for k in range(1, n + 1):
        for support in itertools.combinations(range(n), k):
            s = set(support)
            f = 1.0
            for q in support:
                f *= alpha_1q[q] ** n1[q]
            for p in pairs:
                if s & set(p):
                    f *= alpha_2q[p] ** n2[p]
            total += 3**k * f
    return total / (4**n - 1)


def coherence_limit_3q_epc(device: DeviceModel, avg_clifford_duration: float) -> float:
    """EPC of a 3Q Clifford that only decoheres for ``avg_clifford_duration``."""
    if device.n != 3:
        raise ValueError("needs a three-qubit device")
    return epc_from_alpha(3, pauli_decay(avg_clifford_duration, (0, 1, 2), device))


def propagate(f, x, sx, rel_step: float = 1e-6) -> float:
    """First-order error of ``f(x)`` for independent inputs with errors ``sx``."""
    x = np.asarray(x, dtype=float)
    var = 0.0
    for i in range(len(x)):
        if sx[i] == 0:
            continue
        h = max(abs(x[i]) * rel_step, 1e-9)
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        try:
            d = (f(up) - f(dn)) / (2 * h)
        except ValueError:
            d = (f(x) - f(dn)) / h
        var += (d * sx[i]) ** 2
    return float(np.sqrt(var))


def twirl_oracle_alpha(channel, n: int, cliffords) -> float:
    """Clifford-average a channel and return the mean Pauli fidelity of the twirled map.

    ``channel`` acts on density matrices and ``cliffords`` are unitaries. The result equals the twirled
    depolarizing parameter, so it checks the sector formula independently.
    """
    from ..clifford import pauli_basis

    d = 2**n
    paulis = [p.to_matrix() for p in pauli_basis(n)[1:]]
    acc = 0.0
    for u in cliffords:
        ud = u.conj().T
        for pm in paulis:
            out = u @ channel(ud @ pm @ u) @ ud
            acc += np.real(np.trace(pm @ out)) / d
    return acc / (len(cliffords) * len(paulis))


def sector_channel(a: float, b: float, n: int = 3):
    """Per-Clifford error of the sector model: local 1Q and pairwise 2Q depolarizing."""
    from ..sim.channels import apply_depolarizing

    def ch(rho):
        for q in range(n):
            rho = apply_depolarizing(rho, (q,), 1 - a)
        for p in itertools.combinations(range(n), 2):
            rho = apply_depolarizing(rho, p, 1 - b)
        return rho

    return ch
