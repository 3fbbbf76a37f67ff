"""Minimal-length one-qubit Clifford words over the two native gatesets."""

from __future__ import annotations

import heapq
import math
from functools import lru_cache

from ..clifford import CliffordTableau, compose, identity, single_qubit_cliffords
from .gates import PrimitiveCircuit, PrimitiveGate, gate, gate_tableau

# {I, X+-90, Y+-90}: used for 1Q and 2Q Cliffords
GATESET_XY = "xy"
# {X+-90, Y-90} plus virtual Z: used for 3Q Cliffords
GATESET_XYZ = "xvz"

_MOVES = {
    GATESET_XY: (("X90", 0.0), ("Xm90", 0.0), ("Y90", 0.0), ("Ym90", 0.0)),
    GATESET_XYZ: (
        ("X90", 0.0), ("Xm90", 0.0), ("Ym90", 0.0),
        ("VZ", math.pi / 2), ("VZ", math.pi), ("VZ", -math.pi / 2),
    ),
}


def _cost(kind: str) -> tuple:
    # pulses first, then number of virtual gates
    return (0, 1) if kind == "VZ" else (1, 0)


@lru_cache(maxsize=None)
def word_table(gateset: str) -> dict:
    """Map each 1Q Clifford to its cheapest primitive word (tuple of (kind, angle)).

    Uniform-cost search over the 24-element group; ties resolved by the fixed
    move order so the table is deterministic.
    """
    if gateset not in _MOVES:
        raise ValueError(f"unknown gateset {gateset!r}")
    start = identity(1)
    best = {start: ((0, 0), ())}
    heap = [((0, 0), 0, start, ())]
    counter = 1
    while heap:
        cost, _, c, word = heapq.heappop(heap)
        if best[c][0] < cost:
            continue
        for kind, angle in _MOVES[gateset]:
            g = PrimitiveGate(kind, (0,), angle, 0.0 if kind == "VZ" else 1.0)
            nxt = compose(c, gate_tableau(g, 1))
            step = _cost(kind)
            ncost = (cost[0] + step[0], cost[1] + step[1])
            if nxt not in best or ncost < best[nxt][0]:
                best[nxt] = (ncost, word + ((kind, angle),))
                heapq.heappush(heap, (ncost, counter, nxt, best[nxt][1]))
                counter += 1
    if len(best) != 24:
        raise RuntimeError("gateset does not generate the 1Q Clifford group")
    return {c: w for c, (_, w) in best.items()}


def word_gates(word: tuple, q: int) -> list:
    return [gate(kind, q, angle=angle) for kind, angle in word]


def clifford_gates(c: CliffordTableau, q: int, gateset: str, explicit_identity: bool) -> list:
    """Primitive gates for 1Q Clifford ``c`` placed on device qubit ``q``."""
    word = word_table(gateset)[c]
    if not word and explicit_identity:
        return [gate("I", q)]
    return word_gates(word, q)


def decompose_1q(c: CliffordTableau, gateset: str = GATESET_XY) -> PrimitiveCircuit:
    """Compile a 1Q Clifford; in the XY gateset the identity is a single ``I``."""
    if c.n != 1:
        raise ValueError("decompose_1q needs a one-qubit tableau")
    return PrimitiveCircuit(1, tuple(clifford_gates(c, 0, gateset, gateset == GATESET_XY)))


def pulse_count(c: CliffordTableau, gateset: str) -> int:
    return sum(1 for kind, _ in word_table(gateset)[c] if kind != "VZ")


def average_gate_count_xy() -> float:
    """Average length of the XY-gateset table with identity counted as one gate."""
    total = sum(len(decompose_1q(c).gates) for c in single_qubit_cliffords())
    return total / 24


@lru_cache(maxsize=None)
def hadamard_word(gateset: str) -> tuple:
    """Word implementing H exactly (X <-> Z, signs included)."""
    from ..clifford import hadamard

    return word_table(gateset)[hadamard(1, 0)]
