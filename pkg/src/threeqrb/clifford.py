"""
Clifford group elements in the stabilizer (tableau) representation.

A tableau stores the conjugation images of the generators
``X_0..X_{n-1}, Z_0..Z_{n-1}``. Each image is a Hermitian Pauli operator held
as a pair of bit masks ``(x, z)`` plus a sign bit, with bit ``q`` of a mask
referring to qubit ``q``. The Pauli letter on qubit ``q`` is ``X`` for
``(1, 0)``, ``Z`` for ``(0, 1)`` and ``Y`` for ``(1, 1)``.

Conventions shared by the whole package:

* ``compose(a, b)`` is "apply ``a``, then ``b``" (unitary ``U_b U_a``).
* Rotations are ``P_theta = exp(-i theta P / 2)``.
* When converting to matrices, qubit 0 is the most significant tensor factor.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}
_SIGN_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Signed Pauli operator ``i**phase * P_0 (x) P_1 (x) ...``.

    ``phase`` is an exponent of ``i`` (0..3), so the sign is one of
    ``+1, +i, -1, -i``.
    """

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        limit = 1 << self.n
        if self.n < 1 or not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("Pauli bit masks do not fit in n qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like ``"XZ"``, ``"-YIZ"`` or ``"+iX"`` (qubit 0 first)."""
        phase = 0
        body = label.strip()
        for prefix, p in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if body.startswith(prefix) and len(body) > len(prefix):
                phase, body = p, body[len(prefix):]
                break
        x = z = 0
        for q, ch in enumerate(body):
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}")
            bx, bz = _BITS[ch]
            x |= bx << q
            z |= bz << q
        return cls(len(body), x, z, phase)

    @property
    def sign(self) -> complex:
        return 1j ** self.phase

    @property
    def support(self) -> frozenset:
        m = self.x | self.z
        return frozenset(q for q in range(self.n) if m >> q & 1)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def label(self) -> str:
        body = "".join(_LETTERS[(self.x >> q & 1, self.z >> q & 1)] for q in range(self.n))
        return _SIGN_TEXT[self.phase] + body

    def __str__(self) -> str:
        return self.label()

    def to_matrix(self) -> np.ndarray:
        mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
                "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
        out = np.array([[1.0 + 0j]])
        for ch in self.label().lstrip("+-i"):
            out = np.kron(out, mats[ch])
        return self.sign * out


def _mul(a: tuple, b: tuple) -> tuple:
    """Multiply ``i^k X^x Z^z`` triples."""
    x1, z1, k1 = a
    x2, z2, k2 = b
    return (x1 ^ x2, z1 ^ z2, (k1 + k2 + 2 * _popcount(z1 & x2)) & 3)


@dataclass(frozen=True)
class CliffordTableau:
    """Immutable n-qubit Clifford element.

    ``rows[g]`` holds ``(x, z, s)`` for the image of generator ``g``, where
    generators ``0..n-1`` are ``X_q`` and ``n..2n-1`` are ``Z_q``; ``s`` is
    the sign bit of the Hermitian image.
    """

    n: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != 2 * self.n:
            raise ValueError("tableau needs 2n rows")

    @property
    def symplectic(self) -> np.ndarray:
        n = self.n
        out = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        for g, (x, z, _) in enumerate(self.rows):
            for q in range(n):
                out[g, q] = x >> q & 1
                out[g, n + q] = z >> q & 1
        return out

    @property
    def phases(self) -> np.ndarray:
        return np.array([s for _, _, s in self.rows], dtype=np.uint8)

    def image(self, g: int) -> PauliString:
        x, z, s = self.rows[g]
        return PauliString(self.n, x, z, 2 * s)

    def is_symplectic(self) -> bool:
        m = self.symplectic.astype(int)
        n = self.n
        omega = np.zeros((2 * n, 2 * n), dtype=int)
        omega[:n, n:] = np.eye(n, dtype=int)
        omega[n:, :n] = np.eye(n, dtype=int)
        return bool(np.array_equal((m.T @ omega @ m) % 2, omega))

    def key(self) -> bytes:
        return bytes(itertools.chain.from_iterable(self.rows))

    # text form used in golden files: symplectic rows then phase bits
    def to_text(self) -> str:
        m = self.symplectic
        body = ";".join("".join(str(b) for b in row) for row in m)
        return f"{self.n}|{body}|{''.join(str(s) for s in self.phases)}"

    @classmethod
    def from_text(cls, text: str) -> "CliffordTableau":
        n_txt, body, ph = text.strip().split("|")
        n = int(n_txt)
        rows = []
        mat_rows = body.split(";")
        if len(mat_rows) != 2 * n or len(ph) != 2 * n:
            raise ValueError(f"malformed tableau record {text!r}")
        for g, row in enumerate(mat_rows):
            x = sum(int(row[q]) << q for q in range(n))
            z = sum(int(row[n + q]) << q for q in range(n))
            rows.append((x, z, int(ph[g])))
        tab = cls(n, tuple(rows))
        if not tab.is_symplectic():
            raise ValueError("record is not a symplectic tableau")
        return tab

    def __str__(self) -> str:
        return "\n".join(
            f"{'X' if g < self.n else 'Z'}{g % self.n} -> {self.image(g)}" for g in range(2 * self.n)
        )


def identity(n: int) -> CliffordTableau:
    if n < 1:
        raise ValueError("n must be at least 1")
    rows = [(1 << q, 0, 0) for q in range(n)] + [(0, 1 << q, 0) for q in range(n)]
    return CliffordTableau(n, tuple(rows))


def _apply_raw(rows: tuple, x: int, z: int, k: int) -> tuple:
    """Conjugate ``i^k X^x Z^z`` by the tableau; returns the same form."""
    n = len(rows) // 2
    acc = (0, 0, k)
    for q in range(n):
        if x >> q & 1:
            ix, iz, s = rows[q]
            acc = _mul(acc, (ix, iz, (_popcount(ix & iz) + 2 * s) & 3))
    for q in range(n):
        if z >> q & 1:
            ix, iz, s = rows[n + q]
            acc = _mul(acc, (ix, iz, (_popcount(ix & iz) + 2 * s) & 3))
    return acc


def apply_to_pauli(c: CliffordTableau, p: PauliString) -> PauliString:
    """Return ``C P C^dagger``."""
    if c.n != p.n:
        raise ValueError(f"dimension mismatch: tableau on {c.n} qubits, Pauli on {p.n}")
    k = (p.phase + _popcount(p.x & p.z)) & 3
    x, z, k = _apply_raw(c.rows, p.x, p.z, k)
    return PauliString(c.n, x, z, k - _popcount(x & z))


def compose(a: CliffordTableau, b: CliffordTableau) -> CliffordTableau:
    """Clifford that applies ``a`` first and then ``b``."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n} qubits")
    out = []
    for x, z, s in a.rows:
        k = (_popcount(x & z) + 2 * s) & 3
        nx, nz, nk = _apply_raw(b.rows, x, z, k)
        out.append((nx, nz, ((nk - _popcount(nx & nz)) & 3) >> 1))
    return CliffordTableau(a.n, tuple(out))


def compose_all(items: Iterable[CliffordTableau], n: int) -> CliffordTableau:
    acc = identity(n)
    for c in items:
        acc = compose(acc, c)
    return acc


def _symplectic_inverse_rows(c: CliffordTableau) -> tuple:
    # M^-1 = Omega M^T Omega over GF(2)
    n = c.n
    m = c.symplectic.astype(int)
    omega = np.zeros((2 * n, 2 * n), dtype=int)
    omega[:n, n:] = np.eye(n, dtype=int)
    omega[n:, :n] = np.eye(n, dtype=int)
    inv = (omega @ m.T @ omega) % 2
    rows = []
    for g in range(2 * n):
        x = sum(int(inv[g, q]) << q for q in range(n))
        z = sum(int(inv[g, n + q]) << q for q in range(n))
        rows.append((x, z, 0))
    return tuple(rows)


def inverse(c: CliffordTableau) -> CliffordTableau:
    bare = CliffordTableau(c.n, _symplectic_inverse_rows(c))
    # c then bare is the identity up to signs; the signed identity squares to one
    signs = compose(c, bare)
    return compose(bare, signs)


def pauli_tableau(p: PauliString) -> CliffordTableau:
    """Tableau of conjugation by the Pauli operator ``p``."""
    n = p.n
    rows = []
    for g in range(2 * n):
        q = g % n
        if g < n:
            flip = p.z >> q & 1
            rows.append((1 << q, 0, flip))
        else:
            flip = p.x >> q & 1
            rows.append((0, 1 << q, flip))
    return CliffordTableau(n, tuple(rows))


# ---------------------------------------------------------------------------
# group order and uniform sampling


@dataclass(frozen=True)
class GroupSize:
    n: int
    order: int


def group_order(n: int) -> GroupSize:
    """Order of the n-qubit Clifford group modulo global phase."""
    if n < 1:
        raise ValueError("n must be at least 1")
    order = 2 ** (n * n + 2 * n)
    for j in range(1, n + 1):
        order *= 4**j - 1
    return GroupSize(n, order)


def _form(u: int, v: int, n: int) -> int:
    mask = (1 << n) - 1
    ux, uz = u & mask, u >> n
    vx, vz = v & mask, v >> n
    return _popcount((ux & vz) ^ (uz & vx)) & 1


def _combine(basis: Sequence[int], coeffs: int) -> int:
    v = 0
    for j, b in enumerate(basis):
        if coeffs >> j & 1:
            v ^= b
    return v


def _symplectic_complement(vectors: list[int], v: int, w: int, n: int) -> list[int]:
    """Symplectic basis of span(vectors) intersected with the complement of span(v, w)."""
    projected = []
    for u in vectors:
        if _form(u, w, n):
            u ^= v
        if _form(u, v, n):
            u ^= w
        projected.append(u)
    basis: list[int] = []
    pool = [u for u in projected if u]
    while pool:
        a = pool.pop(0)
        if not a:
            continue
        partner = next((i for i, u in enumerate(pool) if _form(a, u, n)), None)
        if partner is None:
            continue
        b = pool.pop(partner)
        basis += [a, b]
        rest = []
        for u in pool:
            if _form(u, b, n):
                u ^= a
            if _form(u, a, n):
                u ^= b
            if u:
                rest.append(u)
        pool = rest
    return basis


def sample_uniform(n: int, rng: np.random.Generator) -> CliffordTableau:
    """Draw a uniformly random n-qubit Clifford (modulo global phase).

    Generator pairs are assigned one at a time: the image of ``X_q`` is a
    uniform nonzero vector of the remaining symplectic subspace and the image
    of ``Z_q`` is uniform among vectors of that subspace anticommuting with it.
    Sign bits are uniform and independent.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    basis = []
    for q in range(n):
        basis += [1 << q, 1 << (n + q)]
    images = []
    for _ in range(n):
        dim = len(basis)
        v = _combine(basis, int(rng.integers(1, 1 << dim)))
        while True:
            w = _combine(basis, int(rng.integers(0, 1 << dim)))
            if _form(v, w, n):
                break
        images.append((v, w))
        basis = _symplectic_complement(basis, v, w, n)
    signs = rng.integers(0, 2, size=2 * n)
    mask = (1 << n) - 1
    rows = [None] * (2 * n)
    for q, (v, w) in enumerate(images):
        rows[q] = (v & mask, v >> n, int(signs[q]))
        rows[n + q] = (w & mask, w >> n, int(signs[n + q]))
    return CliffordTableau(n, tuple(rows))


# ---------------------------------------------------------------------------
# conversions and small gate library


def pauli_basis(n: int) -> list[PauliString]:
    return [PauliString(n, x, z) for x in range(1 << n) for z in range(1 << n)]


def tableau_from_unitary(u: np.ndarray, atol: float = 1e-9) -> CliffordTableau:
    """Extract the conjugation action of a Clifford unitary (qubit 0 most significant)."""
    d = u.shape[0]
    n = d.bit_length() - 1
    if 1 << n != d or u.shape != (d, d):
        raise ValueError("unitary must be 2^n x 2^n")
    hermitian = [(p, p.to_matrix()) for p in pauli_basis(n)]
    rows = []
    gens = [PauliString(n, 1 << q, 0) for q in range(n)] + [PauliString(n, 0, 1 << q) for q in range(n)]
    for g in gens:
        m = u @ _matrix_cached(g) @ u.conj().T
        for p, pm in hermitian:
            overlap = np.trace(pm.conj().T @ m) / d
            if abs(abs(overlap) - 1) < atol:
                if abs(overlap.imag) > atol:
                    raise ValueError("unitary is not Clifford")
                rows.append((p.x, p.z, 0 if overlap.real > 0 else 1))
                break
        else:
            raise ValueError("unitary is not Clifford")
    return CliffordTableau(n, tuple(rows))


def _matrix_cached(p: PauliString) -> np.ndarray:
    return p.to_matrix()


def hadamard(n: int, q: int) -> CliffordTableau:
    rows = list(identity(n).rows)
    rows[q], rows[n + q] = (0, 1 << q, 0), (1 << q, 0, 0)
    return CliffordTableau(n, tuple(rows))


def phase_gate(n: int, q: int) -> CliffordTableau:
    """S = diag(1, i): X -> Y, Z -> Z."""
    rows = list(identity(n).rows)
    rows[q] = (1 << q, 1 << q, 0)
    return CliffordTableau(n, tuple(rows))


def cnot(n: int, control: int, target: int) -> CliffordTableau:
    if control == target:
        raise ValueError("control and target must differ")
    rows = list(identity(n).rows)
    rows[control] = ((1 << control) | (1 << target), 0, 0)
    rows[n + target] = (0, (1 << control) | (1 << target), 0)
    return CliffordTableau(n, tuple(rows))


def embed(c: CliffordTableau, qubits: Sequence[int], n: int) -> CliffordTableau:
    """Place a k-qubit tableau on the given qubits of an n-qubit register."""
    if len(qubits) != c.n or len(set(qubits)) != c.n or any(not 0 <= q < n for q in qubits):
        raise ValueError("bad qubit assignment for embedding")

    def spread(mask: int) -> int:
        return sum(1 << qubits[j] for j in range(c.n) if mask >> j & 1)

    rows = list(identity(n).rows)
    for j, q in enumerate(qubits):
        x, z, s = c.rows[j]
        rows[q] = (spread(x), spread(z), s)
        x, z, s = c.rows[c.n + j]
        rows[n + q] = (spread(x), spread(z), s)
    return CliffordTableau(n, tuple(rows))


def restrict(c: CliffordTableau, qubits: Sequence[int]) -> CliffordTableau:
    """Inverse of :func:`embed` for tableaux that act only on ``qubits``."""
    k = len(qubits)
    pos = {q: j for j, q in enumerate(qubits)}

    def squeeze(mask: int) -> int:
        out = 0
        q = 0
        while mask:
            if mask & 1:
                if q not in pos:
                    raise ValueError("tableau acts outside the requested qubits")
                out |= 1 << pos[q]
            mask >>= 1
            q += 1
        return out

    rows = [None] * (2 * k)
    for j, q in enumerate(qubits):
        x, z, s = c.rows[q]
        rows[j] = (squeeze(x), squeeze(z), s)
        x, z, s = c.rows[c.n + q]
        rows[k + j] = (squeeze(x), squeeze(z), s)
    return CliffordTableau(k, tuple(rows))


def enumerate_group(generators: Sequence[CliffordTableau], limit: int | None = None) -> dict:
    """Breadth-first closure of the generated group; maps key -> tableau."""
    if not generators:
        raise ValueError("need at least one generator")
    start = identity(generators[0].n)
    seen = {start.key(): start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for g in generators:
            nxt = compose(c, g)
            k = nxt.key()
            if k not in seen:
                seen[k] = nxt
                if limit is not None and len(seen) > limit:
                    raise RuntimeError("closure exceeded limit")
                queue.append(nxt)
    return seen


@lru_cache(maxsize=None)
def standard_generators(n: int) -> tuple:
    gens = [hadamard(n, q) for q in range(n)] + [phase_gate(n, q) for q in range(n)]
    gens += [cnot(n, a, b) for a in range(n) for b in range(n) if a != b]
    return tuple(gens)


@lru_cache(maxsize=None)
def single_qubit_cliffords() -> tuple:
    """All 24 one-qubit Clifford tableaux in a fixed order."""
    group = enumerate_group(standard_generators(1))
    return tuple(sorted(group.values(), key=lambda c: c.key()))
