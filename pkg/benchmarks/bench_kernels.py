"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from clusterent import _kernels
from clusterent.graphs import chain, cluster_state, lattice
from clusterent.separable import random_product_vectors


def cases():
    rng = np.random.default_rng(0)
    for name, g in (("chain:8", chain(8)), ("lattice:3x4", lattice(3, 4)), ("chain:16", chain(16))):
        psi = np.ascontiguousarray(cluster_state(g).amplitudes)
        vecs = random_product_vectors(g.n, 1, rng)[0]
        yield name, psi, vecs


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return 0

    print(f"{'kernel':<16}{'state':<14}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, psi, vecs in cases():
        pairs = {
            "product_ket": (
                lambda: _kernels.product_ket_numpy(vecs),
                lambda: _kernels.product_ket_numba(vecs),
            ),
            "contract_site": (
                lambda: _kernels.contract_site_numpy(psi, vecs, 1),
                lambda: _kernels.contract_site_numba(psi, vecs, 1),
            ),
            "ascend_overlap": (
                lambda: _kernels.ascend_overlap_numpy(psi, vecs.copy(), 1e-12, 10_000),
                lambda: _kernels.ascend_overlap_numba(psi, vecs.copy(), 1e-12, 10_000),
            ),
        }
        for kernel, (slow, fast) in pairs.items():
            fast()  # compile outside the timed region
            a, b = best_of(slow, args.repeat), best_of(fast, args.repeat)
            print(f"{kernel:<16}{name:<14}{a * 1e3:>12.3f}{b * 1e3:>12.3f}{a / b:>10.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
