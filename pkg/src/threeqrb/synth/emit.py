"""Turn layered (1Q Clifford / CNOT) ops into primitive gates, fusing 1Q runs."""

from __future__ import annotations

from ..clifford import CliffordTableau, compose, identity
from .gates import PrimitiveCircuit, PrimitiveGate, gate, gate_tableau
from .oneq import clifford_gates


def emit(ops: list, n: int, gateset: str) -> PrimitiveCircuit:
    """Ops are ``("1q", q, tableau)`` or ``("cx", control, target)``.

    Consecutive 1Q Cliffords on a qubit are multiplied together and emitted as
    the table word of their product; identity products emit nothing.
    """
    pending = {q: identity(1) for q in range(n)}
    out: list[PrimitiveGate] = []

    def flush(q):
        out.extend(clifford_gates(pending[q], q, gateset, False))
        pending[q] = identity(1)

    for op in ops:
        if op[0] == "1q":
            _, q, tab = op
            pending[q] = compose(pending[q], tab)
        elif op[0] == "cx":
            _, a, b = op
            flush(a)
            flush(b)
            out.append(gate("CNOT", a, b))
        else:
            raise ValueError(f"unknown op {op[0]!r}")
    for q in range(n):
        flush(q)
    return PrimitiveCircuit(n, tuple(out))


def ops_from_gates(gates) -> list:
    ops = []
    for g in gates:
        if g.kind == "CNOT":
            ops.append(("cx",) + g.qubits)
        elif g.kind in ("I", "IDLE"):
            continue
        else:
            ops.append(("1q", g.qubits[0], gate_tableau(PrimitiveGate(g.kind, (0,), g.angle, g.duration), 1)))
    return ops


def simplify(circ: PrimitiveCircuit, gateset: str) -> PrimitiveCircuit:
    """Fuse runs of 1Q gates between CNOTs into minimal table words."""
    return emit(ops_from_gates(circ.gates), circ.n, gateset)


def tableau_1q(gates) -> CliffordTableau:
    acc = identity(1)
    for g in gates:
        acc = compose(acc, gate_tableau(PrimitiveGate(g.kind, (0,), g.angle, g.duration), 1))
    return acc
