"""Class-based synthesis of two-qubit Cliffords.

Every 2Q Clifford falls into exactly one of four classes::

    single-qubit   A.B                                        576 elements, 0 CNOT
    CNOT-like      A.B  CX  S.S'                             5184 elements, 1 CNOT
    iSWAP-like     A.B  CX  (X90.Y90)  CX  S.S'              5184 elements, 2 CNOT
    SWAP-like      A.B  CX  (X90.Y90)  CX  (X90.Y90)  CX      576 elements, 3 CNOT

(circuit order, left to right) with ``A, B`` any 1Q Cliffords and ``S, S'``
drawn from the order-3 subgroup cycling ``X -> Y -> Z``. The table below is
built by enumerating these forms once; the build checks they are disjoint and
cover all 11520 elements.
"""

from __future__ import annotations

from functools import lru_cache

from ..clifford import (
    CliffordTableau,
    PauliString,
    apply_to_pauli,
    compose,
    embed,
    identity,
    single_qubit_cliffords,
)
from .gates import PrimitiveCircuit, gate, gate_tableau
from .oneq import GATESET_XY, clifford_gates

CLASS_SIZES = (576, 5184, 5184, 576)


@lru_cache(maxsize=None)
def cycle_subgroup() -> tuple:
    """The three 1Q Cliffords ``{I, R, R^2}`` with ``R: X -> Y -> Z -> X``."""
    x, y = PauliString.from_label("X"), PauliString.from_label("Y")
    for c in single_qubit_cliffords():
        if apply_to_pauli(c, x) == y and apply_to_pauli(c, y) == PauliString.from_label("Z"):
            return (identity(1), c, compose(c, c))
    raise RuntimeError("cycle element not found")


_MIDDLES = {
    2: (("X90", "Y90"),),
    3: (("X90", "Y90"), ("X90", "Y90")),
}


def _layer(a: CliffordTableau, b: CliffordTableau) -> CliffordTableau:
    return compose(embed(a, (0,), 2), embed(b, (1,), 2))


@lru_cache(maxsize=None)
def class_table() -> dict:
    """Map tableau -> (class index, A, B, S, S')."""
    cx = gate_tableau(gate("CNOT", 0, 1), 2)
    cls_core = {0: identity(2), 1: cx}
    for k, middles in _MIDDLES.items():
        core = cx
        for left, right in middles:
            mid = compose(gate_tableau(gate(left, 0), 2), gate_tableau(gate(right, 1), 2))
            core = compose(compose(core, mid), cx)
        cls_core[k] = core
    ones = single_qubit_cliffords()
    cyc = cycle_subgroup()
    table = {}
    for k in range(4):
        tails = [(s, t) for s in cyc for t in cyc] if k in (1, 2) else [(identity(1), identity(1))]
        for a in ones:
            for b in ones:
                head = compose(_layer(a, b), cls_core[k])
                for s, t in tails:
                    c = compose(head, _layer(s, t))
                    if c in table:
                        raise RuntimeError("2Q class forms overlap")
                    table[c] = (k, a, b, s, t)
        if sum(1 for v in table.values() if v[0] == k) != CLASS_SIZES[k]:
            raise RuntimeError(f"class {k} has the wrong size")
    return table


def cnot_class(c: CliffordTableau) -> int:
    return class_table()[c][0]


def decompose_2q(c: CliffordTableau, qubits: tuple = (0, 1), n: int = 2) -> PrimitiveCircuit:
    """Compile a 2Q Clifford onto device ``qubits`` (control of every CNOT is ``qubits[0]``)."""
    if c.n != 2:
        raise ValueError("decompose_2q needs a two-qubit tableau")
    k, a, b, s, t = class_table()[c]
    q0, q1 = qubits
    out = clifford_gates(a, q0, GATESET_XY, True) + clifford_gates(b, q1, GATESET_XY, True)
    if k >= 1:
        out.append(gate("CNOT", q0, q1))
        for left, right in _MIDDLES.get(k, ()):
            out += [gate(left, q0), gate(right, q1), gate("CNOT", q0, q1)]
        if k in (1, 2):
            out += clifford_gates(s, q0, GATESET_XY, False) + clifford_gates(t, q1, GATESET_XY, False)
    return PrimitiveCircuit(n, tuple(out))
