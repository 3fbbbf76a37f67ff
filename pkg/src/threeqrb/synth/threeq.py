"""Three-qubit Clifford synthesis with an exact CNOT-cost table.

The symplectic part of a Clifford is encoded as an integer (row ``g`` in bits
``[2n*g, 2n*g + 2n)``). A 0-1 breadth-first search over the symplectic group,
with one-qubit generators costing nothing and CNOTs on allowed pairs costing
one, gives the minimal CNOT count of every element for a given coupling
graph. Synthesis then peels one CNOT at a time: append a layer of local gates
and a CNOT that lowers the cost by one, until only a local Clifford remains.
"""

from __future__ import annotations

import itertools
import logging
from functools import lru_cache

import numpy as np

from ..clifford import (
    CliffordTableau,
    cnot,
    compose,
    embed,
    hadamard,
    identity,
    inverse,
    phase_gate,
    restrict,
    single_qubit_cliffords,
)
from .connectivity import ConnectivityGraph
from .emit import emit
from .gates import PrimitiveCircuit
from .oneq import GATESET_XYZ, pulse_count

log = logging.getLogger(__name__)


def _row_vec(x: int, z: int, n: int) -> int:
    return x | (z << n)


def encode(c: CliffordTableau) -> int:
    w = 2 * c.n
    return sum(_row_vec(x, z, c.n) << (w * g) for g, (x, z, _) in enumerate(c.rows))


def _row_table(c: CliffordTableau) -> np.ndarray:
    """Symplectic image of every 2n-bit Pauli vector under ``c``."""
    n = c.n
    gens = [_row_vec(x, z, n) for x, z, _ in c.rows]
    out = np.zeros(1 << (2 * n), dtype=np.uint64)
    for v in range(1 << (2 * n)):
        acc = 0
        for j in range(2 * n):
            if v >> j & 1:
                acc ^= gens[j]
        out[v] = acc
    return out


def _apply(arr: np.ndarray, table: np.ndarray, n: int) -> np.ndarray:
    w = 2 * n
    mask = np.uint64((1 << w) - 1)
    out = np.zeros_like(arr)
    for g in range(2 * n):
        shift = np.uint64(w * g)
        out |= table[(arr >> shift) & mask] << shift
    return out


class CostTable:
    """Minimal CNOT count for every n-qubit symplectic matrix."""

    def __init__(self, n: int, pairs: tuple):
        self.n = n
        self.pairs = pairs
        local = [_row_table(hadamard(n, q)) for q in range(n)]
        local += [_row_table(phase_gate(n, q)) for q in range(n)]
        two = [_row_table(cnot(n, a, b)) for a, b in pairs]
        start = np.array([encode(identity(n))], dtype=np.uint64)
        visited = np.empty(0, dtype=np.uint64)
        keys, costs = [], []
        seeds = start
        level = 0
        while seeds.size:
            layer = seeds
            new = seeds
            while new.size:
                cand = np.unique(np.concatenate([_apply(new, t, n) for t in local]))
                cand = np.setdiff1d(cand, layer, assume_unique=True)
                cand = np.setdiff1d(cand, visited, assume_unique=True)
                layer = np.union1d(layer, cand)
                new = cand
            visited = np.union1d(visited, layer)
            keys.append(layer)
            costs.append(np.full(layer.size, level, dtype=np.uint8))
            nxt = np.unique(np.concatenate([_apply(layer, t, n) for t in two]))
            seeds = np.setdiff1d(nxt, visited, assume_unique=True)
            level += 1
        keys = np.concatenate(keys)
        costs = np.concatenate(costs)
        order = np.argsort(keys)
        self.keys = keys[order]
        self.costs = costs[order]
        self.max_cost = level - 1
        log.debug("cost table n=%d pairs=%s: %d elements, max %d", n, pairs, keys.size, self.max_cost)

    def lookup(self, codes: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.keys, codes)
        if np.any(idx >= self.keys.size) or np.any(self.keys[np.minimum(idx, self.keys.size - 1)] != codes):
            raise KeyError("symplectic code not in table")
        return self.costs[idx]

    def cost(self, c: CliffordTableau) -> int:
        return int(self.lookup(np.array([encode(c)], dtype=np.uint64))[0])


@lru_cache(maxsize=None)
def cost_table(n: int, pairs: tuple) -> CostTable:
    return CostTable(n, pairs)


@lru_cache(maxsize=None)
def _symplectic_reps() -> tuple:
    """One 1Q Clifford per symplectic class (both sign bits zero)."""
    return tuple(c for c in single_qubit_cliffords() if not any(s for _, _, s in c.rows))


@lru_cache(maxsize=None)
def _local_layers(n: int, gateset: str):
    reps = _symplectic_reps()
    layers, tables, costs = [], [], []
    for combo in itertools.product(reps, repeat=n):
        tab = identity(n)
        for q, r in enumerate(combo):
            tab = compose(tab, embed(r, (q,), n))
        layers.append(combo)
        tables.append(_row_table(tab))
        costs.append(sum(pulse_count(r, gateset) for r in combo))
    order = np.argsort(costs, kind="stable")
    layers = [layers[i] for i in order]
    return layers, np.array(tables)[order], np.array(costs)[order]


def synthesize(c: CliffordTableau, conn: ConnectivityGraph, gateset: str = GATESET_XYZ) -> PrimitiveCircuit:
    """CNOT-optimal (for ``conn``) circuit for ``c`` over the given gateset."""
    n = c.n
    pairs = conn.directed_pairs()
    table = cost_table(n, pairs)
    layers, ltabs, _ = _local_layers(n, gateset)
    ctabs = np.array([_row_table(cnot(n, a, b)) for a, b in pairs])
    w = 2 * n
    shifts = (np.arange(2 * n, dtype=np.uint64) * np.uint64(w))
    steps = []
    cur = c
    remaining = table.cost(cur)
    while remaining > 0:
        code = encode(cur)
        rows = np.array([(code >> (w * g)) & ((1 << w) - 1) for g in range(2 * n)])
        after_local = ltabs[:, rows]                        # (L, 2n)
        after_cx = ctabs[:, after_local]                    # (P, L, 2n)
        codes = np.bitwise_or.reduce(after_cx << shifts, axis=-1)
        costs = table.lookup(codes.ravel()).reshape(codes.shape)
        hits = np.argwhere(costs == remaining - 1)
        # layers are sorted by pulse cost, so the smallest layer index is cheapest
        p, li = min(hits, key=lambda h: (h[1], h[0]))
        tab = identity(n)
        for q, r in enumerate(layers[li]):
            tab = compose(tab, embed(r, (q,), n))
        a, b = pairs[p]
        cur = compose(compose(cur, tab), cnot(n, a, b))
        steps.append((layers[li], (a, b)))
        remaining -= 1
    ops = [("1q", q, restrict(cur, (q,))) for q in range(n)]
    for layer, (a, b) in reversed(steps):
        ops.append(("cx", a, b))
        ops += [("1q", q, inverse(r)) for q, r in enumerate(layer)]
    return emit(ops, n, gateset)
