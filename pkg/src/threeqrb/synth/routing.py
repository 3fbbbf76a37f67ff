"""Rewrite CNOTs onto the allowed couplings."""

from __future__ import annotations

from functools import lru_cache

from ..clifford import compose_all
from .connectivity import ConnectivityGraph
from .emit import simplify
from .gates import PrimitiveCircuit, gate, gate_tableau
from .oneq import GATESET_XY, GATESET_XYZ, hadamard_word, word_gates


class RoutingError(ValueError):
    pass


@lru_cache(maxsize=None)
def _relay_order() -> tuple:
    """Four-CNOT relay realising CNOT(c, t) through neighbour k, as (control, target) roles."""
    n = 3
    c, k, t = 0, 1, 2
    want = gate_tableau(gate("CNOT", c, t), n)
    for order in (((c, k), (k, t), (c, k), (k, t)), ((k, t), (c, k), (k, t), (c, k))):
        got = compose_all([gate_tableau(gate("CNOT", a, b), n) for a, b in order], n)
        if got == want:
            names = {c: "c", k: "k", t: "t"}
            return tuple((names[a], names[b]) for a, b in order)
    raise RuntimeError("no relay identity verified")


def _gateset_of(circ: PrimitiveCircuit) -> str:
    return GATESET_XYZ if any(g.kind == "VZ" for g in circ.gates) else GATESET_XY


def _route_cnot(c: int, t: int, conn: ConnectivityGraph, gateset: str, depth: int = 0) -> list:
    if conn.allows(c, t):
        return [gate("CNOT", c, t)]
    if conn.allows(t, c):
        h = word_gates(hadamard_word(gateset), c) + word_gates(hadamard_word(gateset), t)
        return h + [gate("CNOT", t, c)] + h
    if depth:
        raise RoutingError(f"cannot route CNOT({c},{t})")
    shared = [k for k in range(conn.n) if k not in (c, t) and conn.coupled(c, k) and conn.coupled(k, t)]
    if not shared:
        raise RoutingError(f"no path for CNOT({c},{t}) on couplings {conn.label()}")
    roles = {"c": c, "k": shared[0], "t": t}
    out = []
    for a, b in _relay_order():
        out += _route_cnot(roles[a], roles[b], conn, gateset, depth + 1)
    return out


def route(circ: PrimitiveCircuit, conn: ConnectivityGraph, gateset: str | None = None) -> PrimitiveCircuit:
    """Make every CNOT legal on ``conn``; legal circuits are returned unchanged.

    Reversed couplings use Hadamard conjugation from the gateset's own pulses;
    missing couplings use the four-CNOT relay through a common neighbour.
    """
    if conn.n < circ.n:
        raise RoutingError("connectivity graph smaller than circuit")
    if all(g.kind != "CNOT" or conn.allows(*g.qubits) for g in circ.gates):
        return circ
    gateset = gateset or _gateset_of(circ)
    out = []
    for g in circ.gates:
        if g.kind == "CNOT":
            out += _route_cnot(*g.qubits, conn, gateset)
        else:
            out.append(g)
    return simplify(PrimitiveCircuit(circ.n, tuple(out), None, circ.t_1q), gateset)
