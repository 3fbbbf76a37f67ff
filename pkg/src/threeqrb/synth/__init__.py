"""Compilation of Clifford tableaux into timed primitive-gate circuits."""

from __future__ import annotations

from functools import lru_cache

from ..clifford import CliffordTableau
from .connectivity import ConnectivityGraph
from .emit import simplify
from .gates import (
    T_1Q,
    T_CNOT,
    PrimitiveCircuit,
    PrimitiveGate,
    Slice,
    circuit_tableau,
    circuit_unitary,
    gate,
    verify,
)
from .oneq import GATESET_XY, GATESET_XYZ, decompose_1q
from .routing import RoutingError, route
from .schedule import Durations, GateCounts, add_counts, count_gates, schedule
from .twoq import cnot_class, decompose_2q

__all__ = [
    "ConnectivityGraph", "Durations", "GateCounts", "PrimitiveCircuit", "PrimitiveGate", "RoutingError",
    "Slice", "GATESET_XY", "GATESET_XYZ", "T_1Q", "T_CNOT", "add_counts", "circuit_tableau",
    "circuit_unitary", "cnot_class", "compile_clifford", "count_gates", "decompose_1q", "decompose_2q",
    "decompose_3q", "gate", "relabel", "route", "schedule", "simplify", "verify",
]


def relabel(circ: PrimitiveCircuit, qubits, n: int) -> PrimitiveCircuit:
    """Move a circuit on ``len(qubits)`` local qubits onto device ``qubits`` of an n-qubit register."""
    gates = tuple(PrimitiveGate(g.kind, tuple(qubits[q] for q in g.qubits), g.angle, g.duration) for g in circ.gates)
    return PrimitiveCircuit(n, gates, None, circ.t_1q)


def _local_graph(conn: ConnectivityGraph, qubits) -> ConnectivityGraph:
    pos = {q: j for j, q in enumerate(qubits)}
    edges = frozenset((pos[a], pos[b]) for a, b in conn.edges if a in pos and b in pos)
    return ConnectivityGraph(len(qubits), edges)


def decompose_3q(c: CliffordTableau, conn: ConnectivityGraph | None = None, gateset: str = GATESET_XYZ) -> PrimitiveCircuit:
    """CNOT-optimal 3Q compilation restricted to the couplings in ``conn``."""
    from .threeq import synthesize

    if c.n != 3:
        raise ValueError("decompose_3q needs a three-qubit tableau")
    conn = conn or ConnectivityGraph.all_to_all(3)
    if conn.n != 3 or not conn.is_connected():
        raise RoutingError("decompose_3q needs a connected 3-qubit coupling graph")
    return synthesize(c, conn, gateset)


@lru_cache(maxsize=200_000)
def compile_clifford(c: CliffordTableau, qubits: tuple, conn: ConnectivityGraph) -> PrimitiveCircuit:
    """Unscheduled, routed circuit for ``c`` on device ``qubits``.

    1Q and 2Q Cliffords use the ``{I, X+-90, Y+-90}`` gateset, 3Q Cliffords use
    ``{X+-90, Y-90}`` plus virtual Z.
    """
    n = conn.n
    k = len(qubits)
    if c.n != k:
        raise ValueError("tableau size does not match qubit subset")
    if k == 1:
        return relabel(decompose_1q(c), qubits, n)
    if k == 2:
        return route(decompose_2q(c, qubits, n), conn, GATESET_XY)
    if k == 3:
        local = decompose_3q(c, _local_graph(conn, qubits))
        return relabel(local, qubits, n)
    raise ValueError("only 1-3 qubit subsets are supported")
