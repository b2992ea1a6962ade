"""Relative entropy, its one-sided directional derivative, and the pure-cluster
entanglement certificate."""

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import product_ket
from .graphs import cluster_state
from .separable import (
    BlochProduct,
    closest_separable_pure,
    max_product_overlap,
    predicted_entanglement,
    random_product_vectors,
)
from .tensor_core import SUPPORT_CUTOFF, DensityOp, Ket, check_size, matrix_log2_on_support

LN2 = math.log(2.0)
GRADIENT_TOL = -1e-8
SUPPORT_LEAK_TOL = 1e-10


def _kernel_leak(sigma, rho):
    w, v = rho.eig
    ker = v[:, ~rho.support]
    if ker.shape[1] == 0:
        return 0.0
    return float(np.real(np.einsum("ik,ij,jk->", ker.conj(), sigma.matrix, ker)))


def von_neumann_entropy(rho):
    """Entropy in bits with ``0 log 0 = 0``."""
    w = rho.eig[0]
    w = w[w > SUPPORT_CUTOFF * max(w[-1], 0.0)]
    return float(-np.sum(w * np.log2(w)))


def relative_entropy(sigma, rho):
    """``Tr[sigma log2 sigma - sigma log2 rho]`` in bits.

    Returns ``math.inf`` when sigma has weight above 1e-10 on the kernel of rho.
    """
    if sigma.dim != rho.dim:
        raise ValueError("relative entropy of operators on different registers")
    if _kernel_leak(sigma, rho) > SUPPORT_LEAK_TOL:
        return math.inf
    log_rho, _ = matrix_log2_on_support(rho)
    cross = float(np.real(np.vdot(sigma.matrix, log_rho)))
    return -von_neumann_entropy(sigma) - cross


def _log_divided_differences(lam):
    """``(ln a - ln b) / (a - b)``, and ``1/a`` on the diagonal / for a == b."""
    a = lam[:, None]
    b = lam[None, :]
    d = a - b
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log1p(d / b) / d
    same = d == 0
    out[same] = 1.0 / np.broadcast_to(a, out.shape)[same]
    return out


class _Linearisation:
    """Precomputed pieces of the derivative of ``x -> S(sigma || (1-x) rho + x tau)``
    at ``x = 0``, so many directions ``tau`` can be evaluated cheaply."""

    def __init__(self, sigma, rho):
        if sigma.dim != rho.dim:
            raise ValueError("operators act on different registers")
        self.infinite = _kernel_leak(sigma, rho) > SUPPORT_LEAK_TOL
        w, v = rho.eig
        s = rho.support
        self.basis = v[:, s]
        lam = w[s]
        k = _log_divided_differences(lam)
        sig = self.basis.conj().T @ sigma.matrix @ self.basis
        # Tr[sigma' (K o X')] = sum_ij sig_ji K_ij X'_ij = sum_ij G_ij X'_ij
        self.weights = k * sig.T
        self.base = float(np.real(np.sum(self.weights.diagonal() * lam)))

    def along_matrix(self, tau):
        if self.infinite:
            return math.inf
        t = self.basis.conj().T @ tau @ self.basis
        return self.base - float(np.real(np.sum(self.weights * t)))

    def along_kets(self, kets):
        """Gradients toward pure states given as columns of ``kets``."""
        if self.infinite:
            return np.full(kets.shape[1], math.inf)
        t = self.basis.conj().T @ kets
        quad = np.real(np.einsum("is,ij,js->s", t, self.weights, t.conj()))
        return self.base - quad


def directional_gradient(sigma, rho, tau, bits=False):
    """``d/dx S(sigma || (1-x) rho + x tau)`` at ``x = 0+``.

    Evaluated in the eigenbasis of ``rho`` with divided differences of the
    natural logarithm, restricted to the support of ``rho``.  The default unit
    is nats, which makes the pure-cluster value exactly
    ``1 - Tr[sigma tau] / <psi|rho|psi>``; ``bits=True`` divides by ln 2 so the
    result matches finite differences of :func:`relative_entropy`.
    Returns ``math.inf`` when ``sigma`` leaks out of the support of ``rho``.
    """
    lin = _Linearisation(sigma, rho)
    if isinstance(tau, BlochProduct):
        tau = tau.density()
    g = lin.along_matrix(tau.matrix)
    return g / LN2 if bits else g


def finite_difference_gradient(sigma, rho, tau, x=1e-6):
    """Forward difference of :func:`relative_entropy` (bits) along ``tau``."""
    moved = DensityOp((1 - x) * rho.matrix + x * tau.matrix, check_psd=False)
    return (relative_entropy(sigma, moved) - relative_entropy(sigma, rho)) / x


@dataclass
class GradientCertificate:
    """Outcome of sampling directional gradients at a candidate state.

    ``analytic_min`` and ``max_closed_form_error`` are set only for a pure
    ``sigma`` commuting with the candidate, where each gradient has the closed
    form ``1 - Tr[sigma tau] / <psi|rho|psi>``.
    """

    candidate: DensityOp
    samples: int
    min_gradient: float
    worst_sample: BlochProduct
    analytic_min: float | None = None
    max_overlap: float | None = None
    max_closed_form_error: float | None = None
    seed: int = 0

    @property
    def passed(self):
        return math.isfinite(self.min_gradient) and self.min_gradient >= GRADIENT_TOL


def _pure_vector(sigma):
    w, v = sigma.eig
    if w[-1] < 1 - 1e-10:
        return None
    return v[:, -1]


def gradient_scan(sigma, rho, samples=1000, seed=0, restarts=64, chunk=2048):
    """Sample Haar-random product directions and record the smallest gradient."""
    if samples < 1:
        raise ValueError("need at least one sample")
    n = sigma.n_qubits
    lin = _Linearisation(sigma, rho)
    rng = np.random.default_rng(seed)
    vecs = random_product_vectors(n, samples, rng)

    grads = np.empty(samples)
    kets = np.empty((sigma.dim, samples), dtype=np.complex128)
    for s in range(samples):
        kets[:, s] = product_ket(vecs[s])
    for lo in range(0, samples, chunk):
        grads[lo : lo + chunk] = lin.along_kets(kets[:, lo : lo + chunk])
    worst = int(np.argmin(grads))
    cert = GradientCertificate(
        candidate=rho,
        samples=samples,
        min_gradient=float(grads[worst]),
        worst_sample=BlochProduct.from_vectors(vecs[worst]),
        seed=seed,
    )

    psi = _pure_vector(sigma)
    commutator = rho.matrix @ sigma.matrix - sigma.matrix @ rho.matrix
    if psi is not None and not lin.infinite and np.max(np.abs(commutator)) <= 1e-10:
        weight = float(np.real(np.vdot(psi, rho.matrix @ psi)))
        overlaps = np.abs(psi.conj() @ kets) ** 2
        closed = 1.0 - overlaps / weight
        best, _ = max_product_overlap(Ket(psi / np.linalg.norm(psi)), restarts=restarts, seed=seed)
        cert.max_overlap = best
        cert.analytic_min = 1.0 - best / weight
        cert.max_closed_form_error = float(np.max(np.abs(closed - grads)))
    return cert


def ree_pure_cluster(g, samples=1000, seed=0, restarts=64):
    """Relative entropy between the cluster state and its dephased closest
    separable state, plus the gradient certificate at that state.

    Raises ``ArithmeticError`` if the value is not ``|A|`` within 1e-9.
    """
    check_size(g.n)
    sigma = cluster_state(g).projector()
    rho = closest_separable_pure(g)
    e = relative_entropy(sigma, rho)
    expected = predicted_entanglement(g)
    if not abs(e - expected) <= 1e-9:
        raise ArithmeticError(f"E = {e!r} differs from |A| = {expected}")
    cert = gradient_scan(sigma, rho, samples=samples, seed=seed, restarts=restarts)
    return e, cert
