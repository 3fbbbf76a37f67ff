"""Event-driven simulation of gates with arbitrary start times.

Simultaneous subsets run their own gate streams, so gates on different
subsets need not start together. Each gate acts instantaneously at the
midpoint of its interval. Between gate midpoints every qubit evolves under the
always-on ZZ frame and T1/T2 damping, split symmetrically as
``ZZ(dt/2) . damping(dt) . ZZ(dt/2)``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from ..synth.gates import PrimitiveCircuit, PrimitiveGate, gate_unitary
from .channels import DensityMatrix, apply_damping, apply_depolarizing, n_qubits, zz_phases
from .device import DeviceModel, NoiseModel

_PULSES = ("I", "X90", "Xm90", "Y90", "Ym90")


@dataclass(frozen=True)
class TimedGate:
    start: float
    gate: PrimitiveGate

    @property
    def end(self) -> float:
        return self.start + self.gate.duration

    @property
    def midpoint(self) -> float:
        return self.start + self.gate.duration / 2


@dataclass(frozen=True)
class Timeline:
    n: int
    events: tuple
    total: float
    t_1q: float
    stream_ends: tuple = ()

    def busy(self, q: int) -> list:
        return sorted((e.start, e.end) for e in self.events if q in e.gate.qubits and e.gate.duration > 0)


def stream_timeline(n: int, streams, t_1q: float) -> Timeline:
    """Place each stream's scheduled circuits back to back, all streams starting at t=0.

    Within a circuit each gate starts at the beginning of its slice.
    """
    events = []
    ends = []
    for stream in streams:
        t = 0.0
        for circ in stream:
            if not circ.scheduled:
                raise ValueError("stream circuits must be scheduled")
            for s in circ.slices:
                for g in s.gates:
                    if g.kind != "IDLE":
                        events.append(TimedGate(t, g))
                t += s.duration
        ends.append(t)
    events.sort(key=lambda e: (e.midpoint, e.start))
    return Timeline(n, tuple(events), max(ends, default=0.0), t_1q, tuple(ends))


def _idle_in(intervals: list, starts: list, a: float, b: float) -> float:
    """Length of [a, b] not covered by the sorted, disjoint ``intervals``."""
    covered = 0.0
    i = max(bisect.bisect_right(starts, a) - 1, 0)
    while i < len(intervals) and intervals[i][0] < b:
        lo, hi = intervals[i]
        covered += max(0.0, min(hi, b) - max(lo, a))
        i += 1
    return max(0.0, (b - a) - covered)


class TimelineSimulator:
    def __init__(self, device: DeviceModel, noise: NoiseModel):
        self.device = device
        self.noise = noise
        self.n = device.n
        zz = device.zz_matrix
        self._zz_on = noise.enable_zz and bool(np.any(zz))
        w = zz_phases(1.0, zz, device.frame_detuning())
        self._w = w[:, None] - w[None, :]

    def _evolve(self, rho: DensityMatrix, dt: float, idle: dict | None, t_1q: float) -> DensityMatrix:
        if dt <= 0:
            return rho
        half = np.exp(1j * (dt / 2) * self._w) if self._zz_on else None
        if half is not None:
            rho = rho * half
        if self.noise.enable_damping:
            for q in range(self.n):
                rho = apply_damping(rho, q, dt, self.device.t1[q], self.device.t2[q])
        if idle and self.noise.idle_depol and self.noise.depol_1q:
            for q, t_idle in idle.items():
                if t_idle > 0:
                    rho = apply_depolarizing(rho, (q,), 1 - (1 - self.noise.depol_1q) ** (t_idle / t_1q))
        if half is not None:
            rho = rho * half
        return rho

    def _gate(self, rho: DensityMatrix, g: PrimitiveGate) -> DensityMatrix:
        if g.kind != "I":
            u = gate_unitary(g.kind, g.qubits, g.angle, self.n)
            rho = u @ rho @ u.conj().T
        if g.kind == "CNOT" and self.noise.depol_2q:
            rho = apply_depolarizing(rho, g.qubits, self.noise.depol_2q)
        elif g.kind in _PULSES and self.noise.depol_1q:
            rho = apply_depolarizing(rho, g.qubits, self.noise.depol_1q)
        return rho

    def simulate(self, rho0: DensityMatrix, tl: Timeline, snapshots=()) -> DensityMatrix | list:
        """Final state, or the states at each time in ``snapshots`` when given."""
        if n_qubits(rho0) != tl.n or tl.n != self.n:
            raise ValueError("dimension mismatch between state, timeline and device")
        track_idle = self.noise.idle_depol and self.noise.depol_1q > 0
        busy = [tl.busy(q) for q in range(self.n)] if track_idle else None
        starts = [[iv[0] for iv in b] for b in busy] if track_idle else None

        def step(rho, a, b):
            idle = {q: _idle_in(busy[q], starts[q], a, b) for q in range(self.n)} if track_idle else None
            return self._evolve(rho, b - a, idle, tl.t_1q)

        marks = sorted(snapshots)
        if any(t < 0 or t > tl.total + 1e-15 for t in marks):
            raise ValueError("snapshot time outside the timeline")
        taken = []
        rho = rho0
        now = 0.0
        for e in tl.events:
            t = e.midpoint
            while marks and marks[0] <= t:
                rho = step(rho, now, marks[0])
                now = marks.pop(0)
                taken.append(rho)
            rho = step(rho, now, t)
            rho = self._gate(rho, e.gate)
            now = t
        for mark in marks:
            rho = step(rho, now, mark)
            now = mark
            taken.append(rho)
        if snapshots:
            order = np.argsort(snapshots, kind="stable")
            out = [None] * len(taken)
            for k, i in enumerate(order):
                out[i] = taken[k]
            return out
        return step(rho, now, tl.total)


def simulate_timeline(rho0: DensityMatrix, tl: Timeline, device: DeviceModel, noise: NoiseModel) -> DensityMatrix:
    return TimelineSimulator(device, noise).simulate(rho0, tl)


def circuit_timeline(circ: PrimitiveCircuit) -> Timeline:
    return stream_timeline(circ.n, [[circ]], circ.t_1q)
