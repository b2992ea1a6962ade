"""Mixed basis, closest separable states to pure clusters, product-structure
checks and maximisation of the overlap with product states.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graphs import QubitGraph, chain, cluster_state
from .tensor_core import (
    CZ,
    HADAMARD,
    KET_MINUS,
    KET_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SUPPORT_CUTOFF,
    DensityOp,
    Ket,
    apply_local,
    check_size,
    conjugate,
    single_qubit_reductions,
)


@dataclass(frozen=True, eq=False)
class BlochProduct:
    """Pure product state ``prod_i cos(t_i/2)|0> + e^{i p_i} sin(t_i/2)|1>``."""

    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        t = np.array(self.theta, dtype=float).ravel()
        p = np.array(self.phi, dtype=float).ravel() % (2 * np.pi)
        if t.shape != p.shape:
            raise ValueError("theta and phi must have the same length")
        if np.any(t < -1e-12) or np.any(t > np.pi + 1e-12):
            raise ValueError("theta must lie in [0, pi]")
        t = np.clip(t, 0.0, np.pi)
        t.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "phi", p)

    @property
    def n_qubits(self):
        return self.theta.size

    def vectors(self):
        out = np.empty((self.n_qubits, 2), dtype=np.complex128)
        out[:, 0] = np.cos(self.theta / 2)
        out[:, 1] = np.exp(1j * self.phi) * np.sin(self.theta / 2)
        return out

    def ket(self):
        return Ket(_kernels.product_ket(self.vectors()))

    def density(self):
        return self.ket().projector()

    @classmethod
    def from_vectors(cls, vecs):
        vecs = np.asarray(vecs, dtype=np.complex128)
        vecs = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
        theta = 2 * np.arctan2(np.abs(vecs[:, 1]), np.abs(vecs[:, 0]))
        phi = np.angle(vecs[:, 1]) - np.angle(vecs[:, 0])
        return cls(theta, phi)

    @classmethod
    def random(cls, n, rng):
        """Haar-random on each qubit: cos(theta) and phi uniform."""
        theta = np.arccos(rng.uniform(-1.0, 1.0, n))
        phi = rng.uniform(0.0, 2 * np.pi, n)
        return cls(theta, phi)


def random_product_vectors(n, samples, rng):
    """``(samples, n, 2)`` array of Haar-random single-qubit vectors."""
    theta = np.arccos(rng.uniform(-1.0, 1.0, (samples, n)))
    phi = rng.uniform(0.0, 2 * np.pi, (samples, n))
    out = np.empty((samples, n, 2), dtype=np.complex128)
    out[..., 0] = np.cos(theta / 2)
    out[..., 1] = np.exp(1j * phi) * np.sin(theta / 2)
    return out


# ---------------------------------------------------------------------------
# mixed basis and the dephased closest separable state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedBasisFrame:
    """Hadamards on the B class of a graph turn its cluster state into
    ``2**(-|A|/2) sum_a |a>_A |Gamma a>_B``."""

    graph: QubitGraph

    @property
    def hadamard_class(self):
        return self.graph.class_b


def _hadamard_all(arr, qubits, n):
    for q in qubits:
        arr = apply_local(arr, HADAMARD, q, n)
    return arr


def to_mixed_basis(x, frame):
    """Apply ``H`` on every qubit of the frame's Hadamard class (self-inverse)."""
    n = frame.graph.n
    if x.n_qubits != n:
        raise ValueError(f"object has {x.n_qubits} qubits, frame has {n}")
    qubits = frame.hadamard_class
    if isinstance(x, Ket):
        return Ket(_hadamard_all(x.amplitudes.copy(), qubits, n))
    m = _hadamard_all(x.matrix.copy(), qubits, n)
    m = _hadamard_all(m.T.copy(), qubits, n).T  # H is real symmetric
    return DensityOp(0.5 * (m + m.conj().T), check_psd=False)


def dephase(rho):
    """Zero every off-diagonal entry."""
    return DensityOp(np.diag(np.diag(rho.matrix)), check_psd=False)


def closest_separable_pure(g):
    """Dephase the cluster projector in the mixed basis and rotate back."""
    check_size(g.n)
    frame = MixedBasisFrame(g)
    mixed = to_mixed_basis(cluster_state(g), frame)
    # diagonal of |phi><phi| in the mixed basis, no thresholding
    rho_mixed = DensityOp(np.diag(np.abs(mixed.amplitudes) ** 2), check_psd=False)
    return to_mixed_basis(rho_mixed, frame)


def rho_star_2():
    """``(|0+><0+| + |1-><1-|) / 2`` written out from its two product terms."""
    a = np.kron([1, 0], KET_PLUS)
    b = np.kron([0, 1], KET_MINUS)
    return DensityOp(0.5 * (np.outer(a, a.conj()) + np.outer(b, b.conj())), check_psd=False)


def operational_construction(n):
    """Join n/2 copies of the two-qubit closest separable state with CZ on
    qubit pairs (2,3), (4,5), ..."""
    if n < 2 or n % 2:
        raise ValueError("operational construction needs an even qubit count >= 2")
    check_size(n)
    pair = rho_star_2().matrix
    m = pair
    for _ in range(n // 2 - 1):
        m = np.kron(m, pair)
    rho = DensityOp(m, check_psd=False)
    for q in range(2, n - 1, 2):
        rho = conjugate(rho, CZ, (q, q + 1))
    return rho


# ---------------------------------------------------------------------------
# product eigenbasis certificate
# ---------------------------------------------------------------------------

@dataclass
class ProductEigenbasisReport:
    passed: bool
    n_vectors: int
    min_purity: float
    eigenvalues: np.ndarray
    vectors: np.ndarray

    def __bool__(self):
        return self.passed


def _local_commutant(proj_cols, n, q, tol):
    """A traceless single-qubit Hermitian operator on qubit q commuting with
    the projector onto span(proj_cols), or None."""
    paulis = (SIGMA_Z, SIGMA_X, SIGMA_Y)
    # [O, P] = 0 iff O maps the span into itself: (1 - P) O V = 0
    leaks = []
    for op in paulis:
        ov = apply_local(proj_cols, op, q, n)
        leaks.append(ov - proj_cols @ (proj_cols.conj().T @ ov))
    gram = np.array([[np.real(np.vdot(a, b)) for b in leaks] for a in leaks])
    w, v = np.linalg.eigh(gram)
    null = v[:, w <= tol]
    if null.shape[1] == 0:
        return None
    if null.shape[1] == 3:
        return SIGMA_Z
    c = null[:, 0]
    return c[0] * SIGMA_Z + c[1] * SIGMA_X + c[2] * SIGMA_Y


def verify_product_eigenbasis(rho, purity_tol=1e-9):
    """Search for an eigenbasis of ``rho`` made of fully product vectors.

    Degenerate eigenspaces are split with a probe built from single-qubit
    operators that commute with the eigenspace projector.  ``passed`` is a
    certificate of full separability; a failure only means no such basis
    was found.
    """
    w, v = rho.eig
    n = rho.n_qubits
    keep = w > SUPPORT_CUTOFF * max(w[-1], 0.0)
    w, v = w[keep], v[:, keep]
    gap = 1e-9 * max(w[-1], 1e-300)

    groups = []
    start = 0
    for i in range(1, w.size + 1):
        if i == w.size or w[i] - w[i - 1] > gap:
            groups.append((start, i))
            start = i

    vectors = []
    values = []
    for lo, hi in groups:
        block = v[:, lo:hi]
        if hi - lo > 1:
            probe = np.zeros_like(block)
            for q in range(1, n + 1):
                op = _local_commutant(block, n, q, tol=1e-18 * block.shape[1])
                if op is not None:
                    probe += 2.0 ** (-q) * apply_local(block, op, q, n)
            small = block.conj().T @ probe
            _, rot = np.linalg.eigh(0.5 * (small + small.conj().T))
            block = block @ rot
        vectors.append(block)
        values.extend(w[lo:hi])

    vectors = np.concatenate(vectors, axis=1) if vectors else np.zeros((rho.dim, 0))
    min_purity = 1.0
    for k in range(vectors.shape[1]):
        red = single_qubit_reductions(vectors[:, k])
        pur = np.real(np.einsum("qij,qji->q", red, red))
        min_purity = min(min_purity, float(pur.min()))
    return ProductEigenbasisReport(
        passed=min_purity >= 1.0 - purity_tol,
        n_vectors=vectors.shape[1],
        min_purity=min_purity,
        eigenvalues=np.array(values),
        vectors=vectors,
    )


# ---------------------------------------------------------------------------
# overlap with product states
# ---------------------------------------------------------------------------

def restart_seeds(seed, count):
    """Counter-based child generators; independent of execution order."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def max_product_overlap(state, restarts=64, seed=0, tol=1e-12, max_sweeps=10_000, workers=1):
    """Maximise ``|<tau|psi>|**2`` over pure product ``tau``.

    Alternating single-site updates: with all other qubits fixed the best
    qubit vector is the normalised contraction of ``psi`` against them.
    Returns ``(value, BlochProduct)`` for the best restart.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    psi = np.ascontiguousarray(state.amplitudes)
    n = state.n_qubits
    rngs = restart_seeds(seed, restarts)

    def run(rng):
        start = random_product_vectors(n, 1, rng)[0]
        value, vecs, _ = _kernels.ascend_overlap(psi, start, tol, max_sweeps)
        return float(value), vecs

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, rngs))
    else:
        results = [run(r) for r in rngs]
    best = max(range(restarts), key=lambda i: (results[i][0], -i))
    value, vecs = results[best]
    return value, BlochProduct.from_vectors(vecs)


def overlap_surface(resolution):
    """Rows ``(a, b, 2 |<psi_2|alpha beta>|**2)`` over real amplitudes
    ``|alpha> = a|0> + sqrt(1-a^2)|1>``, ``a, b`` on a uniform grid of [0, 1]."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    psi = cluster_state(chain(2)).amplitudes.real.reshape(2, 2)
    grid = np.linspace(0.0, 1.0, resolution)
    alpha = np.stack([grid, np.sqrt(1.0 - grid**2)], axis=1)
    amp = np.einsum("ai,ij,bj->ab", alpha, psi, alpha)
    a, b = np.meshgrid(grid, grid, indexing="ij")
    return np.column_stack([a.ravel(), b.ravel(), 2.0 * (amp**2).ravel()])


@dataclass
class FactorizationReport:
    k: int
    trials: int
    max_deviation: float
    worst: BlochProduct
    joint_overlap: float
    factored_overlap: float
    max_joint_overlap: float

    @property
    def bound_holds(self):
        """Largest sampled overlap stays below ``2**(-(k+2)/2)``."""
        return self.max_joint_overlap <= 2.0 ** (-(self.k + 2) / 2) + 1e-12


def factorization_terms(k, product):
    """``(<psi_{k+2}|tau|psi_{k+2}>, <psi_k|tau_k|psi_k> <psi_2|tau_2|psi_2>)``."""
    vecs = product.vectors()
    big = cluster_state(chain(k + 2)).amplitudes
    left = cluster_state(chain(k)).amplitudes
    right = cluster_state(chain(2)).amplitudes
    joint = abs(np.vdot(_kernels.product_ket(vecs), big)) ** 2
    fa = abs(np.vdot(_kernels.product_ket(vecs[:k]), left)) ** 2
    fb = abs(np.vdot(_kernels.product_ket(vecs[k:]), right)) ** 2
    return float(joint), float(fa * fb)


def factorization_check(k, trials=1000, seed=0):
    """Largest gap between the (k+2)-chain overlap and the product of the
    k-chain and 2-chain overlaps over random product states."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    check_size(k + 2)
    rng = np.random.default_rng(seed)
    worst = None
    best_dev = -1.0
    top = 0.0
    terms = (0.0, 0.0)
    for _ in range(trials):
        tau = BlochProduct.random(k + 2, rng)
        joint, fact = factorization_terms(k, tau)
        top = max(top, joint)
        if abs(joint - fact) > best_dev:
            best_dev, worst, terms = abs(joint - fact), tau, (joint, fact)
    return FactorizationReport(k, trials, best_dev, worst, terms[0], terms[1], top)


def predicted_entanglement(g):
    """Size of the smaller colour class, in bits."""
    return len(g.class_a)


def predicted_max_overlap(g):
    return 2.0 ** (-predicted_entanglement(g))

