"""Primitive gates, circuits and their text serialization.

Circuit text format (one slice per line, gates separated by single spaces)::

    X90(0)@4.48e-08 IDLE(1)@4.48e-08 CNOT(2,0)@2.4e-07
    VZ[1.5707963267948966](1)@0.0 IDLE(0)@0.0 IDLE(2)@0.0

Each token is ``KIND[angle](q0,q1)@duration`` with the bracketed angle present
only for ``VZ``. Durations are in seconds and written with ``repr`` so they
round-trip exactly. An unscheduled circuit is written as a single line
prefixed with ``#gates``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..clifford import CliffordTableau, compose, embed, identity, tableau_from_unitary

PULSES = ("X90", "Xm90", "Y90", "Ym90")
ONE_Q_TIMED = ("I",) + PULSES
KINDS = ONE_Q_TIMED + ("VZ", "CNOT", "IDLE")

T_1Q = 44.8e-9
T_CNOT = 240e-9

_TOKEN = re.compile(r"^(?P<kind>[A-Za-z0-9]+)(\[(?P<angle>[^\]]+)\])?\((?P<qubits>[0-9,]+)\)@(?P<dur>\S+)$")


@dataclass(frozen=True)
class PrimitiveGate:
    kind: str
    qubits: tuple
    angle: float = 0.0
    duration: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        arity = 2 if self.kind == "CNOT" else 1
        if len(qs) != arity or len(set(qs)) != arity:
            raise ValueError(f"{self.kind} needs {arity} distinct qubit(s), got {qs}")
        if self.kind == "VZ" and self.duration != 0:
            raise ValueError("virtual Z gates have zero duration")
        if self.duration < 0:
            raise ValueError("negative duration")

    @property
    def is_timed(self) -> bool:
        return self.kind not in ("VZ",)

    def to_text(self) -> str:
        ang = f"[{self.angle!r}]" if self.kind == "VZ" else ""
        return f"{self.kind}{ang}({','.join(map(str, self.qubits))})@{self.duration!r}"

    @classmethod
    def from_text(cls, token: str) -> "PrimitiveGate":
        m = _TOKEN.match(token)
        if not m:
            raise ValueError(f"cannot parse gate token {token!r}")
        qubits = tuple(int(q) for q in m["qubits"].split(","))
        angle = float(m["angle"]) if m["angle"] else 0.0
        return cls(m["kind"], qubits, angle, float(m["dur"]))

    def inverse(self) -> "PrimitiveGate":
        flip = {"X90": "Xm90", "Xm90": "X90", "Y90": "Ym90", "Ym90": "Y90"}
        if self.kind in flip:
            return PrimitiveGate(flip[self.kind], self.qubits, duration=self.duration)
        if self.kind == "VZ":
            return PrimitiveGate("VZ", self.qubits, -self.angle)
        return self


def gate(kind: str, *qubits: int, angle: float = 0.0) -> PrimitiveGate:
    """Gate with the default device duration for its kind."""
    if kind == "CNOT":
        dur = T_CNOT
    elif kind == "VZ":
        dur = 0.0
    else:
        dur = T_1Q
    return PrimitiveGate(kind, qubits, angle, dur)


@dataclass(frozen=True)
class Slice:
    """Gates on disjoint qubits executed together.

    A qubit whose gate is shorter than the slice idles for the remainder;
    :meth:`idle_time` reports that, including explicit ``IDLE`` gates.
    """

    gates: tuple

    @property
    def duration(self) -> float:
        return max((g.duration for g in self.gates), default=0.0)

    def gate_on(self, q: int) -> PrimitiveGate | None:
        for g in self.gates:
            if q in g.qubits:
                return g
        return None

    def idle_time(self, q: int) -> float:
        g = self.gate_on(q)
        if g is None:
            return self.duration
        busy = 0.0 if g.kind == "IDLE" else g.duration
        return self.duration - busy

    def to_text(self) -> str:
        return " ".join(g.to_text() for g in self.gates)


@dataclass(frozen=True)
class PrimitiveCircuit:
    """Ordered primitive gates on ``n`` device qubits.

    ``slices`` is ``None`` until :func:`threeqrb.synth.schedule.schedule`
    has assigned time slices.
    """

    n: int
    gates: tuple = ()
    slices: tuple | None = None
    t_1q: float = T_1Q

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(not 0 <= q < self.n for q in g.qubits):
                raise ValueError(f"gate {g.to_text()} outside {self.n}-qubit register")

    @property
    def scheduled(self) -> bool:
        return self.slices is not None

    @property
    def total_duration(self) -> float:
        if self.slices is None:
            raise ValueError("circuit is not scheduled")
        return sum(s.duration for s in self.slices)

    def then(self, other: "PrimitiveCircuit") -> "PrimitiveCircuit":
        if other.n != self.n:
            raise ValueError("register size mismatch")
        slices = None
        if self.slices is not None and other.slices is not None:
            slices = self.slices + other.slices
        return PrimitiveCircuit(self.n, self.gates + other.gates, slices, self.t_1q)

    def to_text(self) -> str:
        if self.slices is None:
            return "#gates " + " ".join(g.to_text() for g in self.gates)
        return "\n".join(s.to_text() for s in self.slices)

    @classmethod
    def from_text(cls, text: str, n: int, t_1q: float = T_1Q) -> "PrimitiveCircuit":
        text = text.strip()
        if text.startswith("#gates"):
            toks = text.split()[1:]
            return cls(n, tuple(PrimitiveGate.from_text(t) for t in toks), None, t_1q)
        slices = []
        for line in text.splitlines():
            if line.strip():
                slices.append(Slice(tuple(PrimitiveGate.from_text(t) for t in line.split())))
        gates = tuple(g for s in slices for g in s.gates if g.kind != "IDLE")
        return cls(n, gates, tuple(slices), t_1q)


# ---------------------------------------------------------------------------
# unitaries and tableaux

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)


def rotation(axis: np.ndarray, theta: float) -> np.ndarray:
    return math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * axis


def gate_matrix_local(g: PrimitiveGate) -> np.ndarray:
    """Unitary on the gate's own qubits (first listed qubit most significant)."""
    k = g.kind
    if k in ("I", "IDLE"):
        return np.eye(2, dtype=complex)
    if k == "X90":
        return rotation(_X, math.pi / 2)
    if k == "Xm90":
        return rotation(_X, -math.pi / 2)
    if k == "Y90":
        return rotation(_Y, math.pi / 2)
    if k == "Ym90":
        return rotation(_Y, -math.pi / 2)
    if k == "VZ":
        return rotation(_Z, g.angle)
    if k == "CNOT":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    raise ValueError(k)


def embed_unitary(local: np.ndarray, qubits: tuple, n: int) -> np.ndarray:
    """Full 2^n unitary for ``local`` acting on ``qubits`` (qubit 0 most significant)."""
    rest = [q for q in range(n) if q not in qubits]
    perm = np.argsort(list(qubits) + rest)
    big = np.kron(local, np.eye(2 ** len(rest))).reshape([2] * (2 * n))
    axes = list(perm) + [n + p for p in perm]
    return big.transpose(axes).reshape(2**n, 2**n)


@lru_cache(maxsize=4096)
def gate_unitary(kind: str, qubits: tuple, angle: float, n: int) -> np.ndarray:
    g = PrimitiveGate(kind, qubits, angle, 0.0 if kind == "VZ" else 1.0)
    u = embed_unitary(gate_matrix_local(g), qubits, n)
    u.setflags(write=False)
    return u


def _quarter_turns(angle: float) -> int:
    q = angle / (math.pi / 2)
    r = round(q)
    if abs(q - r) > 1e-9:
        raise ValueError(f"VZ angle {angle} is not a multiple of pi/2 (non-Clifford)")
    return r % 4


@lru_cache(maxsize=None)
def _local_gate_tableau(kind: str, quarter: int) -> CliffordTableau:
    if kind == "VZ":
        g = PrimitiveGate("VZ", (0,), quarter * math.pi / 2)
    elif kind == "CNOT":
        g = PrimitiveGate("CNOT", (0, 1), duration=1.0)
    else:
        g = PrimitiveGate(kind, (0,), duration=1.0)
    return tableau_from_unitary(gate_matrix_local(g))


@lru_cache(maxsize=8192)
def _gate_tableau_cached(kind: str, qubits: tuple, quarter: int, n: int) -> CliffordTableau:
    return embed(_local_gate_tableau(kind, quarter), qubits, n)


def gate_tableau(g: PrimitiveGate, n: int) -> CliffordTableau:
    if g.kind in ("I", "IDLE"):
        return identity(n)
    quarter = _quarter_turns(g.angle) if g.kind == "VZ" else 0
    return _gate_tableau_cached(g.kind, g.qubits, quarter, n)


def circuit_tableau(circ: PrimitiveCircuit) -> CliffordTableau:
    acc = identity(circ.n)
    for g in circ.gates:
        if g.kind in ("I", "IDLE"):
            continue
        acc = compose(acc, gate_tableau(g, circ.n))
    return acc


def circuit_unitary(circ: PrimitiveCircuit) -> np.ndarray:
    u = np.eye(2**circ.n, dtype=complex)
    for g in circ.gates:
        u = gate_unitary(g.kind, g.qubits, g.angle, circ.n) @ u
    return u


def verify(circ: PrimitiveCircuit, c: CliffordTableau) -> bool:
    """True iff the circuit implements ``c`` exactly, sign bits included."""
    if circ.n != c.n:
        raise ValueError("dimension mismatch")
    return circuit_tableau(circ) == c
