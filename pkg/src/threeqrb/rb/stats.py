"""Average gate counts and durations of compiled random Cliffords."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..clifford import sample_uniform
from ..synth import ConnectivityGraph, Durations, compile_clifford, count_gates, schedule, verify


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float

    def __str__(self) -> str:
        return f"{self.mean:.4f} +- {self.stderr:.4f}"


def _est(values) -> Estimate:
    v = np.asarray(values, dtype=float)
    se = float(v.std(ddof=1) / np.sqrt(len(v))) if len(v) > 1 else 0.0
    return Estimate(float(v.mean()), se)


@dataclass(frozen=True)
class SynthStats:
    n: int
    connectivity: str
    samples: int
    n_cnot: Estimate
    n_1q: Estimate
    n_idle_as_1q: Estimate
    n1_with_idles: Estimate
    duration: Estimate
    verified_fraction: float
    n_1q_per_qubit: tuple = field(default=())
    n1_with_idles_per_qubit: tuple = field(default=())
    n_cnot_per_pair: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"n": self.n, "connectivity": self.connectivity, "samples": self.samples,
               "verified_fraction": self.verified_fraction,
               "n_1q_per_qubit": [e.mean for e in self.n_1q_per_qubit],
               "n1_with_idles_per_qubit": [e.mean for e in self.n1_with_idles_per_qubit],
               "n_cnot_per_pair": {f"{a}-{b}": v.mean for (a, b), v in sorted(self.n_cnot_per_pair.items())}}
        for k in ("n_cnot", "n_1q", "n_idle_as_1q", "n1_with_idles", "duration"):
            e = getattr(self, k)
            out[k] = {"mean": e.mean, "stderr": e.stderr}
        return out


def synth_stats(n: int, conn: ConnectivityGraph | None = None, samples: int = 1000,
                rng: np.random.Generator | None = None, durations: Durations | None = None,
                check: bool = True) -> SynthStats:
    """Compile ``samples`` uniform n-qubit Cliffords and average their scheduled counts."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    conn = conn or ConnectivityGraph.all_to_all(n)
    if conn.n != n:
        raise ValueError("connectivity size must equal n")
    rng = rng or np.random.default_rng(0)
    durations = durations or Durations()
    qubits = tuple(range(n))
    rows = []
    per_qubit = []
    idle_q = []
    pairs = {(a, b): [] for a in range(n) for b in range(a + 1, n)}
    ok = 0
    for _ in range(samples):
        c = sample_uniform(n, rng)
        circ = schedule(compile_clifford(c, qubits, conn), durations)
        if check:
            ok += verify(circ, c)
        k = count_gates(circ)
        rows.append((k.n_cnot, k.n_1q, k.n_idle_as_1q, k.n1_with_idles, circ.total_duration))
        per_qubit.append([sum(1 for g in circ.gates if g.kind not in ("CNOT", "VZ") and g.qubits == (q,))
                          for q in qubits])
        idle_q.append([sum(sl.idle_time(q) for sl in circ.slices) / circ.t_1q for q in qubits])
        for p in pairs:
            pairs[p].append(sum(1 for g in circ.gates if g.kind == "CNOT" and set(g.qubits) == set(p)))
    cols = list(zip(*rows))
    pq = np.array(per_qubit, dtype=float)
    return SynthStats(n, conn.label(), samples, *(_est(c) for c in cols),
                      verified_fraction=ok / samples if check else float("nan"),
                      n_1q_per_qubit=tuple(_est(pq[:, q]) for q in range(n)),
                      n1_with_idles_per_qubit=tuple(_est(pq[:, q] + np.array(idle_q)[:, q]) for q in range(n)),
                      n_cnot_per_pair={p: _est(v) for p, v in pairs.items()})
