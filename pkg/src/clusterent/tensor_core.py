"""Dense complex operator algebra on qubit registers.

Conventions used everywhere in the package:

* qubits are numbered 1..n in public functions; qubit 1 is the most
  significant bit of the basis index, so ``|q1 q2 ... qn>`` reads left to right;
* all eigen-solves go through :func:`hermitian_eig` (``numpy.linalg.eigh``);
* logarithms of density operators are base 2 and restricted to the support.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MAX_DENSE_QUBITS = 12
MAX_KET_QUBITS = 20
SUPPORT_CUTOFF = 1e-12

I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
CZ = np.diag([1, 1, 1, -1]).astype(np.complex128)
KET_PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=np.complex128) / np.sqrt(2)


class SizeLimitError(ValueError):
    """Register larger than the dense (or ket) size limit."""


def qubit_count(dim):
    """Number of qubits for a dimension that must be an exact power of two."""
    dim = int(dim)
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def check_size(n, limit=MAX_DENSE_QUBITS):
    if n > limit:
        raise SizeLimitError(f"{n} qubits exceeds the limit of {limit}")


def _as_square(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    qubit_count(m.shape[0])
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _frozen(a):
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Ket:
    """Unit-norm amplitude vector over 2**n computational basis states."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128).ravel()
        n = qubit_count(a.size)
        check_size(n, MAX_KET_QUBITS)
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        norm = np.vdot(a, a).real
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"ket is not normalised (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", _frozen(a))

    @property
    def n_qubits(self):
        return qubit_count(self.amplitudes.size)

    def projector(self):
        check_size(self.n_qubits)
        a = self.amplitudes
        return DensityOp(np.outer(a, a.conj()), check_psd=False)

    def overlap(self, other):
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityOp:
    """Hermitian, unit-trace, positive semidefinite 2**n x 2**n matrix.

    ``check_psd=False`` skips the eigenvalue test for operators that are
    positive by construction; hermiticity and trace are always checked.
    """

    matrix: np.ndarray
    check_psd: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = _as_square(self.matrix)
        check_size(qubit_count(m.shape[0]))
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density operator is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density operator trace is {tr!r}, expected 1")
        m = 0.5 * (m + m.conj().T)
        object.__setattr__(self, "matrix", _frozen(m))
        if self.check_psd:
            lo = self.eig[0][0]
            if lo < -1e-10:
                raise ValueError(f"density operator has eigenvalue {lo!r} < 0")

    @property
    def n_qubits(self):
        return qubit_count(self.matrix.shape[0])

    @property
    def dim(self):
        return self.matrix.shape[0]

    @cached_property
    def eig(self):
        """Ascending eigenvalues and orthonormal eigenvectors (columns)."""
        return hermitian_eig(self.matrix)

    @cached_property
    def support(self):
        """Boolean mask over ``eig`` columns with eigenvalue above the cutoff."""
        w = self.eig[0]
        return w > SUPPORT_CUTOFF * max(w[-1], 0.0)

    @property
    def rank(self):
        return int(np.count_nonzero(self.support))

    def purity(self):
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    @classmethod
    def maximally_mixed(cls, n):
        d = 2**n
        return cls(np.eye(d) / d, check_psd=False)

    @classmethod
    def mixture(cls, weights, states):
        m = sum(w * s.matrix for w, s in zip(weights, states))
        return cls(m, check_psd=False)


def kron(a, b):
    """Tensor product with qubit 1 of ``a`` as the most significant bit."""
    a = _as_square(a)
    b = _as_square(b)
    check_size(qubit_count(a.shape[0] * b.shape[0]))
    return np.kron(a, b)


def hermitian_eig(m, tol=1e-10):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    m = _as_square(m)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol:
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, v


def matrix_log2_on_support(rho):
    """Base-2 logarithm of ``rho`` on its support.

    Returns ``(log_matrix, support_projector)``; kernel directions contribute
    zero to ``log_matrix``.
    """
    w, v = rho.eig
    s = rho.support
    vs = v[:, s]
    log_m = (vs * np.log2(w[s])) @ vs.conj().T
    return log_m, vs @ vs.conj().T


def _qubit_axes(subset, n):
    out = []
    for q in subset:
        q = int(q)
        if not 1 <= q <= n:
            raise IndexError(f"qubit {q} out of range 1..{n}")
        out.append(q - 1)
    return out


def partial_transpose(rho, subset):
    """Transpose the indices of the qubits in ``subset`` (1-indexed)."""
    m = rho.matrix if isinstance(rho, DensityOp) else _as_square(rho)
    n = qubit_count(m.shape[0])
    axes = list(range(2 * n))
    for q in set(_qubit_axes(subset, n)):
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return m.reshape((2,) * (2 * n)).transpose(axes).reshape(m.shape)


def min_ppt_eigenvalue(rho, subset):
    return float(np.linalg.eigvalsh(partial_transpose(rho, subset))[0])


def _check_gate(gate, sites, n):
    gate = _as_square(gate)
    k = len(sites)
    if gate.shape[0] != 2**k:
        raise ValueError(f"gate of dimension {gate.shape[0]} does not act on {k} qubits")
    if len(set(sites)) != k:
        raise ValueError(f"repeated site in {sites}")
    if np.max(np.abs(gate.conj().T @ gate - np.eye(2**k))) > 1e-10:
        raise ValueError("gate is not unitary")
    return gate, _qubit_axes(sites, n)


def _apply_on_axes(t, gate, axes, offset=0):
    """Contract ``gate`` into tensor ``t`` along ``axes`` (shifted by offset)."""
    k = len(axes)
    g = gate.reshape((2,) * (2 * k))
    ax = [a + offset for a in axes]
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), ax))
    return np.moveaxis(t, list(range(k)), ax)


def apply_gate(state, gate, sites):
    """Apply a unitary on the ordered 1-indexed ``sites`` of a ket."""
    n = state.n_qubits
    gate, axes = _check_gate(gate, sites, n)
    t = _apply_on_axes(state.amplitudes.reshape((2,) * n), gate, axes)
    return Ket(t.reshape(-1))


def conjugate(rho, gate, sites):
    """``U rho U^dagger`` with ``U`` acting on the given 1-indexed sites."""
    m = rho.matrix if isinstance(rho, DensityOp) else _as_square(rho)
    n = qubit_count(m.shape[0])
    gate, axes = _check_gate(gate, sites, n)
    t = m.reshape((2,) * (2 * n))
    t = _apply_on_axes(t, gate, axes)
    t = _apply_on_axes(t, gate.conj(), axes, offset=n)
    out = t.reshape(m.shape)
    if isinstance(rho, DensityOp):
        return DensityOp(0.5 * (out + out.conj().T), check_psd=False)
    return out


def apply_local(arr, op, qubit, n):
    """Apply a single-qubit matrix to one qubit of a ket or of each column.

    ``arr`` has shape ``(2**n,)`` or ``(2**n, k)``.
    """
    shape = arr.shape
    t = arr.reshape((2,) * n + shape[1:])
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [qubit - 1])), 0, qubit - 1)
    return t.reshape(shape)


def single_qubit_reductions(vec):
    """Reduced 2x2 states of every qubit of a (not necessarily normalised) vector."""
    vec = np.asarray(vec, dtype=np.complex128)
    n = qubit_count(vec.size)
    t = vec.reshape((2,) * n)
    out = np.empty((n, 2, 2), dtype=np.complex128)
    for q in range(n):
        m = np.moveaxis(t, q, 0).reshape(2, -1)
        out[q] = m @ m.conj().T
    return out


def frobenius(a, b):
    a = a.matrix if isinstance(a, DensityOp) else a
    b = b.matrix if isinstance(b, DensityOp) else b
    return float(np.linalg.norm(a - b))
