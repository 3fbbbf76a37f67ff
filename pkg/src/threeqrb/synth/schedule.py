"""As-soon-as-possible scheduling into time slices, and gate counting."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gates import T_1Q, T_CNOT, PrimitiveCircuit, PrimitiveGate, Slice


@dataclass(frozen=True)
class Durations:
    one_q: float = T_1Q
    cnot: float = T_CNOT

    def of(self, g: PrimitiveGate) -> float:
        if g.kind == "VZ":
            return 0.0
        if g.kind == "CNOT":
            return self.cnot
        return self.one_q


@dataclass(frozen=True)
class GateCounts:
    n_cnot: int = 0
    n_1q: int = 0
    n_idle_as_1q: float = 0.0
    n_vz: int = 0

    @property
    def n1_with_idles(self) -> float:
        return self.n_1q + self.n_idle_as_1q


def schedule(circ: PrimitiveCircuit, durations: Durations | None = None) -> PrimitiveCircuit:
    """Assign gates to ASAP slices; uncovered qubits get explicit ``IDLE`` gates.

    Virtual Z gates are moved into zero-duration slices placed just before the
    qubit's next timed gate (or at the very end). Nothing else acts on that
    qubit in between, so the reordering is exact.
    """
    durations = durations or Durations()
    n = circ.n
    layers: list[dict] = []          # qubit -> gate
    pre_vz: list[dict] = []          # qubit -> accumulated angle, placed before the layer
    last = [-1] * n
    pending = [0.0] * n
    has_pending = [False] * n
    for g in circ.gates:
        if g.kind == "IDLE":
            continue
        if g.kind == "VZ":
            q = g.qubits[0]
            pending[q] += g.angle
            has_pending[q] = True
            continue
        g = PrimitiveGate(g.kind, g.qubits, g.angle, durations.of(g))
        s = 1 + max(last[q] for q in g.qubits)
        while len(layers) <= s:
            layers.append({})
            pre_vz.append({})
        for q in g.qubits:
            layers[s][q] = g
            last[q] = s
            if has_pending[q]:
                pre_vz[s][q] = pending[q]
                pending[q], has_pending[q] = 0.0, False
    tail = {q: pending[q] for q in range(n) if has_pending[q]}

    def vz_slice(angles: dict) -> Slice:
        gates = []
        for q in range(n):
            if q in angles:
                gates.append(PrimitiveGate("VZ", (q,), _wrap(angles[q]), 0.0))
            else:
                gates.append(PrimitiveGate("IDLE", (q,), 0.0, 0.0))
        return Slice(tuple(gates))

    slices = []
    for layer, vz in zip(layers, pre_vz):
        if vz:
            slices.append(vz_slice(vz))
        seen = set()
        gates = []
        dur = max(g.duration for g in layer.values())
        for q in range(n):
            g = layer.get(q)
            if g is None:
                gates.append(PrimitiveGate("IDLE", (q,), 0.0, dur))
            elif g not in seen:
                seen.add(g)
                gates.append(g)
        slices.append(Slice(tuple(gates)))
    if tail:
        slices.append(vz_slice(tail))
    gates = tuple(g for s in slices for g in s.gates if g.kind != "IDLE")
    return PrimitiveCircuit(n, gates, tuple(slices), durations.one_q)


def _wrap(angle: float) -> float:
    a = math.remainder(angle, 2 * math.pi)
    return 0.0 if a == 0 else a


def count_gates(circ: PrimitiveCircuit) -> GateCounts:
    """Exact counts; idle time on every qubit is expressed in 1Q-gate units."""
    if not circ.scheduled:
        raise ValueError("count_gates needs a scheduled circuit")
    n_cnot = n_1q = n_vz = 0
    idle = 0.0
    for s in circ.slices:
        for g in s.gates:
            if g.kind == "CNOT":
                n_cnot += 1
            elif g.kind == "VZ":
                n_vz += 1
            elif g.kind != "IDLE":
                n_1q += 1
        idle += sum(s.idle_time(q) for q in range(circ.n))
    return GateCounts(n_cnot, n_1q, idle / circ.t_1q, n_vz)


def add_counts(items) -> GateCounts:
    tot = [0, 0, 0.0, 0]
    for c in items:
        tot[0] += c.n_cnot
        tot[1] += c.n_1q
        tot[2] += c.n_idle_as_1q
        tot[3] += c.n_vz
    return GateCounts(*tot)
