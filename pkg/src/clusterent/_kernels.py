"""Inner loops over 2**n amplitudes: product kets, single-site contractions and
the alternating overlap ascent.

Every kernel exists twice, a numba version and a plain numpy version with the
same signature.  The module-level names (``product_ket``, ``contract_site``,
``ascend_overlap``) point at the numba versions unless numba is missing or the
environment variable ``CLUSTERENT_DISABLE_NUMBA`` is set to a truthy value.
Qubit 0 is the most significant bit of the basis index.
"""

import os
from functools import reduce

import numpy as np

_FLAG = os.environ.get("CLUSTERENT_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


# --------------------------------------------------------------------------
# numpy path
# --------------------------------------------------------------------------

def product_ket_numpy(vecs):
    return reduce(np.kron, vecs).astype(np.complex128)


def contract_site_numpy(psi, vecs, site):
    n = vecs.shape[0]
    t = psi.reshape((2,) * n)
    # contract trailing qubits first so the remaining axes keep their positions
    for q in range(n - 1, -1, -1):
        if q == site:
            continue
        t = np.tensordot(t, vecs[q].conj(), axes=([q], [0]))
    return np.ascontiguousarray(t, dtype=np.complex128)


def ascend_overlap_numpy(psi, vecs, tol, max_sweeps):
    vecs = vecs.copy()
    n = vecs.shape[0]
    value = abs(np.vdot(product_ket_numpy(vecs), psi)) ** 2
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        norm = 0.0
        for q in range(n):
            v = contract_site_numpy(psi, vecs, q)
            norm = np.linalg.norm(v)
            if norm > 0.0:
                vecs[q] = v / norm
        new = norm * norm
        if new - value < tol:
            value = max(value, new)
            break
        value = new
    return value, vecs, sweeps


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def product_ket_numba(vecs):
        n = vecs.shape[0]
        out = np.empty(1 << n, dtype=np.complex128)
        out[0] = 1.0
        size = 1
        # append one qubit at a time as the new least significant bit
        for q in range(n):
            for i in range(size - 1, -1, -1):
                a = out[i]
                out[2 * i] = a * vecs[q, 0]
                out[2 * i + 1] = a * vecs[q, 1]
            size *= 2
        return out

    @numba.njit(cache=True, nogil=True)
    def contract_site_numba(psi, vecs, site):
        n = vecs.shape[0]
        size = psi.shape[0] // 2
        t = np.empty(size, dtype=np.complex128)
        # fold the trailing qubits (lowest bits) into the array
        q = n - 1
        if q > site:
            c0, c1 = np.conj(vecs[q, 0]), np.conj(vecs[q, 1])
            for i in range(size):
                t[i] = psi[2 * i] * c0 + psi[2 * i + 1] * c1
            q -= 1
            while q > site:
                size //= 2
                c0, c1 = np.conj(vecs[q, 0]), np.conj(vecs[q, 1])
                for i in range(size):
                    t[i] = t[2 * i] * c0 + t[2 * i + 1] * c1
                q -= 1
        else:
            size = psi.shape[0]
            t = psi.copy()
        # then the leading qubits (highest bits)
        for q in range(site):
            size //= 2
            c0, c1 = np.conj(vecs[q, 0]), np.conj(vecs[q, 1])
            for i in range(size):
                t[i] = t[i] * c0 + t[i + size] * c1
        out = np.empty(2, dtype=np.complex128)
        out[0] = t[0]
        out[1] = t[1]
        return out

    @numba.njit(cache=True, nogil=True)
    def ascend_overlap_numba(psi, vecs, tol, max_sweeps):
        vecs = vecs.copy()
        n = vecs.shape[0]
        t = product_ket_numba(vecs)
        acc = 0.0 + 0.0j
        for b in range(psi.shape[0]):
            acc += np.conj(t[b]) * psi[b]
        value = abs(acc) ** 2
        sweeps = 0
        for s in range(1, max_sweeps + 1):
            sweeps = s
            norm = 0.0
            for q in range(n):
                v = contract_site_numba(psi, vecs, q)
                norm = np.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)
                if norm > 0.0:
                    vecs[q, 0] = v[0] / norm
                    vecs[q, 1] = v[1] / norm
            new = norm * norm
            if new - value < tol:
                value = max(value, new)
                break
            value = new
        return value, vecs, sweeps

else:  # pragma: no cover
    product_ket_numba = product_ket_numpy
    contract_site_numba = contract_site_numpy
    ascend_overlap_numba = ascend_overlap_numpy


if USE_NUMBA:
    product_ket = product_ket_numba
    contract_site = contract_site_numba
    ascend_overlap = ascend_overlap_numba
else:
    product_ket = product_ket_numpy
    contract_site = contract_site_numpy
    ascend_overlap = ascend_overlap_numpy


def backend():
    """Name of the active kernel path, ``"numba"`` or ``"numpy"``."""
    return "numba" if USE_NUMBA else "numpy"
