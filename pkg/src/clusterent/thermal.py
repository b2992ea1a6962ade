"""PPT critical point, critical temperature, thermal entanglement curves and
the optimal mixing weight between the two two-qubit separable candidates."""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .divergence import gradient_scan, relative_entropy
from .graphs import chain, omega_to_temperature, thermal_state
from .separable import rho_star_2
from .tensor_core import DensityOp, check_size, min_ppt_eigenvalue

OMEGA_C = math.sqrt(2.0) - 1.0


@dataclass(frozen=True)
class CriticalPoint:
    """``omega_c = tanh(J / (k_B T_c))``."""

    omega_c: float
    T_c: float
    J: float = 1.0
    k_B: float = 1.0


def critical_temperature(J=1.0, k_B=1.0):
    """``T_c = -2J / (k_B ln(sqrt(2) - 1))``."""
    if J <= 0 or k_B <= 0:
        raise ValueError("J and k_B must be positive")
    return CriticalPoint(OMEGA_C, -2.0 * J / (k_B * math.log(OMEGA_C)), J, k_B)


def two_qubit_ppt_gap(omega):
    """Smallest eigenvalue of the partial transpose of the 2-qubit thermal cluster."""
    return min_ppt_eigenvalue(thermal_state(chain(2), omega), [2])


def critical_omega_2qubit(J=1.0, k_B=1.0, xtol=1e-12):
    """Bisect for the omega at which the 2-qubit thermal cluster turns PPT."""
    omega_c = bisect(two_qubit_ppt_gap, 0.0, 1.0, xtol=xtol)
    if abs(omega_c - OMEGA_C) > 1e-10:
        raise ArithmeticError(f"bisection gave omega_c = {omega_c!r}, expected sqrt(2) - 1")
    return CriticalPoint(omega_c, omega_to_temperature(omega_c, J, k_B), J, k_B)


def bipartitions(n):
    """Nonempty proper subsets of 1..n, one per complementary pair."""
    qubits = range(1, n + 1)
    for size in range(1, n // 2 + 1):
        for sub in itertools.combinations(qubits, size):
            if 2 * size == n and 1 not in sub:
                continue
            yield sub


def ppt_report(rho):
    """Minimum partial-transpose eigenvalue for every bipartition.

    Only reports; a nonnegative value does not certify separability."""
    n = rho.n_qubits
    check_size(n, 10)
    return {sub: min_ppt_eigenvalue(rho, sub) for sub in bipartitions(n)}


@dataclass(frozen=True)
class SweepRow:
    omega: float
    temperature: float
    entanglement_bits: float
    min_ppt_eig: float


def _min_ppt(rho, g):
    if g.n <= 10:
        return min(ppt_report(rho).values())
    return min_ppt_eigenvalue(rho, g.class_a)


def thermal_entanglement_curve(g, omega_grid, J=1.0, k_B=1.0, workers=1):
    """Divergence of the thermal cluster from its critical-point counterpart.

    For two qubits this is the entanglement along the thermal family; for
    larger graphs it is a divergence to a reference state, an upper-bound
    proxy rather than a certified value.
    """
    grid = [float(w) for w in omega_grid]
    if any(not 0.0 <= w <= 1.0 for w in grid):
        raise ValueError("omega grid must lie within [0, 1]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("omega grid must be strictly increasing")
    check_size(g.n)
    ref = thermal_state(g, OMEGA_C)

    def row(w):
        sigma = thermal_state(g, w)
        return SweepRow(
            omega=w,
            temperature=omega_to_temperature(w, J, k_B),
            entanglement_bits=relative_entropy(sigma, ref),
            min_ppt_eig=_min_ppt(sigma, g),
        )

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(row, grid))
    return [row(w) for w in grid]


# ---------------------------------------------------------------------------
# mixing weight
# ---------------------------------------------------------------------------

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_minimize(f, a, b, tol=1e-10, max_iter=500):
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    candidates = [(fc, c), (fd, d), (f(a), a), (f(b), b)]
    fx, x = min(candidates)
    return x, fx


def mixture_candidate(lam):
    """``(1 - lam) rho*_2 + lam sigma_2(omega_c)``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    ref = thermal_state(chain(2), OMEGA_C)
    return DensityOp((1 - lam) * rho_star_2().matrix + lam * ref.matrix, check_psd=False)


def lambda_formula(omega):
    """Magnitude of the closed-form stationary point, ``2 / ((2 - sqrt 2)(3 + omega))``."""
    return abs(2.0 / ((math.sqrt(2.0) - 2.0) * (3.0 + omega)))


@dataclass(frozen=True)
class LambdaResult:
    omega: float
    lambda_star: float
    objective_at_min: float
    formula_value: float
    flat_interval: tuple | None = None


def lambda_star(omega, tol=1e-10, flat_tol=1e-12):
    """Minimise ``S(sigma_2(omega) || mixture(lam))`` over ``lam`` in [0, 1].

    The objective is convex in ``lam``.  When it is constant to ``flat_tol``
    (the pure limit omega = 1) the whole interval is reported and
    ``lambda_star`` is its lower end.
    """
    if not OMEGA_C < omega <= 1.0:
        raise ValueError(f"omega = {omega} outside (omega_c, 1]")
    sigma = thermal_state(chain(2), omega)

    def objective(lam):
        return relative_entropy(sigma, mixture_candidate(lam))

    probe = np.linspace(0.0, 1.0, 21)
    vals = np.array([objective(x) for x in probe])
    if np.all(np.isfinite(vals)) and vals.max() - vals.min() <= flat_tol:
        return LambdaResult(omega, 0.0, float(vals.min()), lambda_formula(omega), (0.0, 1.0))
    x, fx = golden_section_minimize(objective, 0.0, 1.0, tol=tol)
    return LambdaResult(omega, float(x), float(fx), lambda_formula(omega))


def lambda_star_certificate(omega, samples=500, seed=0):
    """Gradient scan for ``sigma_2(omega)`` at the optimal mixture."""
    res = lambda_star(omega)
    sigma = thermal_state(chain(2), omega)
    cert = gradient_scan(
        sigma, mixture_candidate(res.lambda_star), samples=samples, seed=seed
    )
    return res, cert
