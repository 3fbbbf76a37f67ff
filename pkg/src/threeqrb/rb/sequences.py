"""Random Clifford sequences for (simultaneous) randomized benchmarking."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from ..clifford import CliffordTableau, compose_all, inverse, sample_uniform

DEFAULT_LENGTHS = {
    1: (1, 10, 25, 50, 100, 175, 250),
    2: (1, 5, 10, 20, 35, 50, 75),
    3: (1, 2, 4, 6, 8, 12, 16),
}
OBSERVABLES = ("joint", "marginal")
ALIGNMENTS = ("free", "step")


@dataclass(frozen=True)
class RBPartition:
    """Disjoint qubit subsets benchmarked simultaneously, e.g. ``((0, 1), (2,))``."""

    subsets: tuple

    def __post_init__(self):
        subs = tuple(tuple(int(q) for q in s) for s in self.subsets)
        if not subs:
            raise ValueError("partition has no subsets")
        flat = [q for s in subs for q in s]
        if len(set(flat)) != len(flat):
            raise ValueError(f"subsets overlap: {subs}")
        for s in subs:
            if not 1 <= len(s) <= 3:
                raise ValueError(f"subset size must be 1-3: {s}")
            if any(q < 0 for q in s):
                raise ValueError(f"negative qubit index in {s}")
        object.__setattr__(self, "subsets", subs)

    @classmethod
    def parse(cls, text: str) -> "RBPartition":
        """Parse ``"{[0,1],[2]}"`` or ``"0,1|2"``."""
        t = text.strip()
        if t.startswith("{"):
            t = t.strip("{}").replace("],[", "|").replace("], [", "|").strip("[]")
        try:
            subs = tuple(tuple(int(q) for q in part.split(",")) for part in t.split("|"))
        except ValueError:
            raise ValueError(f"cannot parse partition {text!r}") from None
        return cls(subs)

    @property
    def label(self) -> str:
        return "{" + ",".join("[" + ",".join(map(str, s)) + "]" for s in self.subsets) + "}"

    @property
    def qubits(self) -> tuple:
        return tuple(sorted(q for s in self.subsets for q in s))

    @property
    def major_size(self) -> int:
        return max(len(s) for s in self.subsets)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class RBSpec:
    partition: RBPartition
    lengths: tuple = ()
    seeds: int = 30
    ratio_1q_per_2q: int = 9
    observable_mode: str = "joint"
    shots: int | None = None
    # "free": subsets start together and run back to back; "step": barrier after every step
    alignment: str = "free"

    def __post_init__(self):
        lengths = tuple(int(m) for m in (self.lengths or DEFAULT_LENGTHS[self.partition.major_size]))
        if any(m < 1 for m in lengths) or any(b <= a for a, b in zip(lengths, lengths[1:])):
            raise ValueError(f"lengths must be strictly increasing and >= 1: {lengths}")
        object.__setattr__(self, "lengths", lengths)
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")
        if self.ratio_1q_per_2q < 1:
            raise ValueError("ratio_1q_per_2q must be >= 1")
        if self.observable_mode not in OBSERVABLES:
            raise ValueError(f"observable_mode must be one of {OBSERVABLES}")
        if self.alignment not in ALIGNMENTS:
            raise ValueError(f"alignment must be one of {ALIGNMENTS}")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1")

    def cliffords_per_step(self, subset) -> int:
        """1Q subsets run ``ratio`` Cliffords per step when a larger subset is present."""
        if len(subset) == 1 and self.partition.major_size > 1:
            return self.ratio_1q_per_2q
        return 1


@dataclass(frozen=True)
class Sequence:
    """``steps[k][i]`` lists the Cliffords of subset ``i`` in step ``k``; the last step holds the inverses."""

    partition: RBPartition
    m: int
    seed_index: int
    steps: tuple = field(repr=False)


def experiment_key(partition: RBPartition) -> int:
    return zlib.crc32(partition.label.encode())


def seed_sequence(master_seed: int, partition: RBPartition, seed_index: int, m: int, stream: int = 0):
    """Independent stream per (experiment, seed, length); stream 1 is used for shot noise."""
    return np.random.SeedSequence([int(master_seed), experiment_key(partition), seed_index, m, stream])


def random_sequence(spec: RBSpec, master_seed: int, seed_index: int, m: int) -> Sequence:
    rng = np.random.default_rng(seed_sequence(master_seed, spec.partition, seed_index, m))
    subs = spec.partition.subsets
    steps = []
    history = [[] for _ in subs]
    for _ in range(m):
        step = []
        for i, s in enumerate(subs):
            cs = tuple(sample_uniform(len(s), rng) for _ in range(spec.cliffords_per_step(s)))
            history[i].extend(cs)
            step.append(cs)
        steps.append(tuple(step))
    steps.append(tuple((inverse(compose_all(h, len(s))),) for h, s in zip(history, subs)))
    return Sequence(spec.partition, m, seed_index, tuple(steps))


def generate_sequences(spec: RBSpec, master_seed: int) -> dict:
    """All sequences keyed by ``(seed_index, m)``."""
    return {
        (s, m): random_sequence(spec, master_seed, s, m)
        for s in range(spec.seeds)
        for m in spec.lengths
    }


def net_clifford(seq: Sequence, subset_index: int) -> CliffordTableau:
    """Product of every Clifford applied to one subset, inverse included."""
    k = len(seq.partition.subsets[subset_index])
    return compose_all([c for step in seq.steps for c in step[subset_index]], k)


def standard_suite(n: int = 3) -> list:
    """The eight partitions benchmarked on a three-qubit device."""
    if n != 3:
        raise ValueError("the standard suite is defined for three qubits")
    return [
        RBPartition(((0,), (1,), (2,))),
        RBPartition(((0, 1),)),
        RBPartition(((0, 2),)),
        RBPartition(((1, 2),)),
        RBPartition(((0, 1), (2,))),
        RBPartition(((0, 2), (1,))),
        RBPartition(((1, 2), (0,))),
        RBPartition(((0, 1, 2),)),
    ]
