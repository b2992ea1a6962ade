"""Bipartite qubit graphs, stabilizer generators, the cluster Hamiltonian and
pure / thermal cluster states.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import networkx as nx
import numpy as np

from .tensor_core import (
    MAX_DENSE_QUBITS,
    MAX_KET_QUBITS,
    DensityOp,
    Ket,
    check_size,
    hermitian_eig,
)


class NotBipartiteError(ValueError):
    pass


@dataclass(frozen=True)
class QubitGraph:
    """Undirected simple graph on qubits 1..n with a proper A/B colouring.

    ``A`` is the smaller colour class (qubit 1 goes to ``A`` on ties).  Build
    instances through :func:`from_edges`, :func:`chain` or :func:`lattice`,
    which compute the colouring.
    """

    n: int
    edges: tuple
    coloring: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one qubit")
        if len(self.coloring) != self.n or set(self.coloring) - {"A", "B"}:
            raise ValueError("coloring must give 'A' or 'B' for every qubit")
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on qubit {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i}, {j}) out of range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            if self.coloring[i - 1] == self.coloring[j - 1]:
                raise ValueError(f"edge {key} joins two qubits of the same colour")
        if len(self.class_a) > len(self.class_b):
            raise ValueError("class A must not be larger than class B")

    @property
    def class_a(self):
        return tuple(q for q in range(1, self.n + 1) if self.coloring[q - 1] == "A")

    @property
    def class_b(self):
        return tuple(q for q in range(1, self.n + 1) if self.coloring[q - 1] == "B")

    def neighbors(self, j):
        out = []
        for a, b in self.edges:
            if a == j:
                out.append(b)
            elif b == j:
                out.append(a)
        return sorted(out)


def from_edges(n, edges):
    """Graph on qubits 1..n, coloured by breadth-first search per component."""
    n = int(n)
    if n < 1:
        raise ValueError("a graph needs at least one qubit")
    clean = []
    for i, j in edges:
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"self-loop on qubit {i}")
        clean.append((min(i, j), max(i, j)))
    if len(set(clean)) != len(clean):
        raise ValueError("duplicate edges")
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(clean)
    if g.number_of_nodes() != n:
        raise ValueError(f"edge list references qubits outside 1..{n}")

    coloring = {}
    for comp in sorted(nx.connected_components(g), key=min):
        sub = g.subgraph(comp)
        try:
            side = nx.bipartite.color(sub)
        except nx.NetworkXError:
            cycle = nx.cycle_basis(sub)
            odd = next((c for c in cycle if len(c) % 2), None)
            raise NotBipartiteError(
                f"graph is not bipartite: odd cycle through qubits {sorted(odd) if odd else sorted(comp)}"
            ) from None
        root = min(comp)
        zero = [q for q in comp if side[q] == side[root]]
        one = [q for q in comp if side[q] != side[root]]
        # the smaller side becomes A; ties keep the lowest-numbered qubit in A
        small, large = (one, zero) if len(one) < len(zero) else (zero, one)
        coloring.update({q: "A" for q in small})
        coloring.update({q: "B" for q in large})
    return QubitGraph(n, tuple(clean), tuple(coloring[q] for q in range(1, n + 1)))


def chain(n):
    """Open linear chain 1-2-...-n."""
    if n < 1:
        raise ValueError("chain length must be at least 1")
    return from_edges(n, [(i, i + 1) for i in range(1, n)])


def lattice(rows, cols):
    """Open rows x cols square lattice, qubits numbered row-major."""
    if rows < 1 or cols < 1:
        raise ValueError("lattice dimensions must be at least 1")
    idx = lambda r, c: r * cols + c + 1  # noqa: E731
    edges = [(idx(r, c), idx(r, c + 1)) for r in range(rows) for c in range(cols - 1)]
    edges += [(idx(r, c), idx(r + 1, c)) for r in range(rows - 1) for c in range(cols)]
    return from_edges(rows * cols, edges)


def read_graph_file(path):
    """Parse the plain-text edge-list format.

    First non-comment line ``n <count>``, then one ``i j`` pair per line
    (1-indexed).  ``#`` starts a comment.
    """
    n = None
    edges = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ValueError(f"{path}:{lineno}: expected 'n <count>' header")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'i j'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError(f"{path}: missing 'n <count>' header")
    return from_edges(n, edges)


def make_graph(spec):
    """Build a graph from ``chain:N``, ``lattice:RxC``, ``file:<path>`` or ``(n, edges)``."""
    if isinstance(spec, QubitGraph):
        return spec
    if not isinstance(spec, str):
        n, edges = spec
        return from_edges(n, edges)
    kind, _, arg = spec.partition(":")
    try:
        if kind == "chain":
            return chain(int(arg))
        if kind == "lattice":
            r, c = arg.lower().split("x")
            return lattice(int(r), int(c))
    except ValueError as exc:
        if isinstance(exc, NotBipartiteError):
            raise
        raise ValueError(f"bad graph spec {spec!r}: {exc}") from None
    if kind == "file":
        return read_graph_file(arg)
    raise ValueError(f"bad graph spec {spec!r}; use chain:N, lattice:RxC or file:<path>")


# ---------------------------------------------------------------------------
# Pauli strings
# ---------------------------------------------------------------------------

# single-site products: (a, b) -> (phase, letter) with a*b = phase * letter
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


@dataclass(frozen=True)
class PauliString:
    """Signed tensor product of single-qubit Paulis, e.g. ``PauliString("ZXZ")``.

    Stabilizer generators only use I, X and Z, but products of neighbouring
    generators contain Y (``XZ * ZX = YY``), so Y is allowed as a letter.
    """

    letters: str
    sign: int = 1

    def __post_init__(self):
        if set(self.letters) - set("IXYZ"):
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def n(self):
        return len(self.letters)

    def __str__(self):
        return ("-" if self.sign < 0 else "") + self.letters

    def __mul__(self, other):
        if self.n != other.n:
            raise ValueError("Pauli strings act on different registers")
        phase = complex(self.sign * other.sign)
        out = []
        for a, b in zip(self.letters, other.letters):
            p, c = _MUL[a, b]
            phase *= p
            out.append(c)
        if abs(phase.imag) > 0.5:
            raise ValueError(f"{self} and {other} anticommute; product is not Hermitian")
        return PauliString("".join(out), int(round(phase.real)))

    def commutes_with(self, other):
        anti = sum(
            1 for a, b in zip(self.letters, other.letters) if a != "I" and b != "I" and a != b
        )
        return anti % 2 == 0

    def masks(self):
        """(flip mask, phase mask, number of Y) with qubit 1 as the top bit."""
        n = self.n
        x = z = 0
        for q, c in enumerate(self.letters):
            bit = 1 << (n - 1 - q)
            if c in "XY":
                x |= bit
            if c in "ZY":
                z |= bit
        return x, z, self.letters.count("Y")

    def column_phases(self):
        """Phases ``p`` with ``P|b> = p[b] |b ^ flip>``."""
        x, z, ny = self.masks()
        b = np.arange(2**self.n, dtype=np.int64)
        parity = np.bitwise_count(b & z) & 1
        return self.sign * (1j**ny) * (1 - 2 * parity.astype(np.float64))

    def left_multiply(self, m):
        """``P @ m`` for a (2**n, ...) array without forming ``P``."""
        x, _, _ = self.masks()
        src = np.arange(m.shape[0]) ^ x
        p = self.column_phases()[src]
        return p.reshape((-1,) + (1,) * (m.ndim - 1)) * m[src]

    def matrix(self):
        check_size(self.n)
        d = 2**self.n
        x, _, _ = self.masks()
        cols = np.arange(d)
        out = np.zeros((d, d), dtype=np.complex128)
        out[cols ^ x, cols] = self.column_phases()
        return out


def stabilizers(g):
    """Generators ``X_j prod_{i in N(j)} Z_i``, one per qubit, sign +1."""
    out = []
    for j in range(1, g.n + 1):
        letters = ["I"] * g.n
        letters[j - 1] = "X"
        for i in g.neighbors(j):
            letters[i - 1] = "Z"
        out.append(PauliString("".join(letters)))
    return out


def hamiltonian(g, J=1.0):
    """Dense stabilizer Hamiltonian ``-J sum_j K_j``."""
    check_size(g.n)
    d = 2**g.n
    cols = np.arange(d)
    h = np.zeros((d, d), dtype=np.complex128)
    for k in stabilizers(g):
        x, _, _ = k.masks()
        h[cols ^ x, cols] -= J * k.column_phases()
    return h


def spectrum(g, J=1.0, decimals=9):
    """Distinct Hamiltonian levels (ascending) and their integer degeneracies."""
    w, _ = hermitian_eig(hamiltonian(g, J))
    levels, counts = np.unique(np.round(w, decimals) + 0.0, return_counts=True)
    return levels, counts


def expected_spectrum(n, J=1.0):
    """Closed-form levels ``J(-n + 2k)`` with multiplicity ``C(n, k)``."""
    pairs = sorted((J * (-n + 2 * k), math.comb(n, k)) for k in range(n + 1))
    return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])


def cluster_state(g):
    """``prod_{edges} CZ |+>^n``; every amplitude is ``+-2**(-n/2)``."""
    check_size(g.n, MAX_KET_QUBITS)
    n = g.n
    b = np.arange(2**n, dtype=np.int64)
    parity = np.zeros(b.size, dtype=np.int64)
    for i, j in g.edges:
        parity ^= (b >> (n - i)) & (b >> (n - j)) & 1
    amps = (1 - 2 * parity) * 2.0 ** (-n / 2)
    return Ket(amps.astype(np.complex128))


@dataclass(frozen=True)
class ThermalParams:
    """Coupling ``J`` and inverse temperature ``beta``; ``omega = tanh(beta J)``."""

    J: float = 1.0
    beta: float = 1.0
    k_B: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta < 0:
            raise ValueError("beta must be finite and non-negative")
        if self.J < 0 or self.k_B <= 0:
            raise ValueError("need J >= 0 and k_B > 0")

    @property
    def omega(self):
        return math.tanh(self.beta * self.J)

    @property
    def temperature(self):
        return math.inf if self.beta == 0 else 1.0 / (self.k_B * self.beta)

    @classmethod
    def from_temperature(cls, T, J=1.0, k_B=1.0):
        return cls(J=J, beta=1.0 / (k_B * T), k_B=k_B)

    @classmethod
    def from_omega(cls, omega, J=1.0, k_B=1.0):
        if not 0 <= omega < 1:
            raise ValueError("omega must lie in [0, 1) for a finite beta")
        return cls(J=J, beta=math.atanh(omega) / J, k_B=k_B)


def omega_to_temperature(omega, J=1.0, k_B=1.0):
    """Temperature with ``tanh(J / (k_B T)) = omega``; 0 at omega = 1."""
    if omega >= 1.0:
        return 0.0
    if omega <= 0.0:
        return math.inf
    return J / (k_B * math.atanh(omega))


def thermal_state(g, omega):
    """Product form ``2**-n prod_j (I + omega K_j)``."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega = {omega} outside [0, 1]")
    check_size(g.n)
    d = 2**g.n
    m = np.eye(d, dtype=np.complex128) / d
    for k in stabilizers(g):
        m = m + omega * k.left_multiply(m)
    return DensityOp(0.5 * (m + m.conj().T), check_psd=False)


def gibbs_state(g, params):
    """``exp(-beta H) / Z`` from the eigendecomposition of the Hamiltonian."""
    check_size(g.n)
    w, v = hermitian_eig(hamiltonian(g, params.J))
    boltz = np.exp(-params.beta * (w - w[0]))
    boltz /= boltz.sum()
    m = (v * boltz) @ v.conj().T
    return DensityOp(0.5 * (m + m.conj().T), check_psd=False)


def thermal_spectrum(n, omega):
    """Closed-form eigenvalues ``(1+w)**(n-k) (1-w)**k / 2**n`` with multiplicity."""
    vals = []
    for k in range(n + 1):
        vals += [(1 + omega) ** (n - k) * (1 - omega) ** k / 2**n] * math.comb(n, k)
    return np.sort(np.array(vals))
