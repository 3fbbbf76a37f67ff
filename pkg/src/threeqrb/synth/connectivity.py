from __future__ import annotations

from dataclasses import dataclass

import networkx as nx


@dataclass(frozen=True)
class ConnectivityGraph:
    """Directed CNOT couplings ``(control, target)`` on ``n`` qubits."""

    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset((int(a), int(b)) for a, b in self.edges)
        for a, b in edges:
            if a == b or not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"invalid edge ({a}, {b}) for {self.n} qubits")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def all_to_all(cls, n: int = 3) -> "ConnectivityGraph":
        return cls(n, frozenset((a, b) for a in range(n) for b in range(a + 1, n)))

    @classmethod
    def parse(cls, text: str, n: int = 3) -> "ConnectivityGraph":
        """``"all"`` or ``"omit:i-j"`` (drops the coupling between i and j)."""
        full = cls.all_to_all(n)
        if text == "all":
            return full
        if text.startswith("omit:"):
            try:
                a, b = (int(v) for v in text[5:].split("-"))
            except ValueError:
                raise ValueError(f"malformed connectivity {text!r}; expected 'omit:i-j'") from None
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"connectivity {text!r} names no coupling of a {n}-qubit device")
            return cls(n, frozenset(e for e in full.edges if set(e) != {a, b}))
        raise ValueError(f"unknown connectivity {text!r}; expected 'all' or 'omit:i-j'")

    def allows(self, control: int, target: int) -> bool:
        return (control, target) in self.edges

    def coupled(self, a: int, b: int) -> bool:
        return (a, b) in self.edges or (b, a) in self.edges

    def graph(self, qubits=None) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n) if qubits is None else qubits)
        g.add_edges_from((a, b) for a, b in self.edges if g.has_node(a) and g.has_node(b))
        return g

    def is_connected(self, qubits=None) -> bool:
        g = self.graph(qubits)
        return g.number_of_nodes() > 0 and nx.is_connected(g)

    def directed_pairs(self) -> tuple:
        """One CNOT orientation per coupled pair, in a canonical order."""
        out = []
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if (a, b) in self.edges:
                    out.append((a, b))
                elif (b, a) in self.edges:
                    out.append((b, a))
        return tuple(out)

    def label(self) -> str:
        return ",".join(f"{a}->{b}" for a, b in sorted(self.edges))
