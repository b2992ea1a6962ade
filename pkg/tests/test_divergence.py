import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterent.divergence import (
    LN2,
    directional_gradient,
    finite_difference_gradient,
    gradient_scan,
    ree_pure_cluster,
    relative_entropy,
    von_neumann_entropy,
)
from clusterent.graphs import chain, cluster_state, make_graph, thermal_state
from clusterent.separable import BlochProduct, closest_separable_pure, rho_star_2
from clusterent.tensor_core import DensityOp
from clusterent.thermal import OMEGA_C

from .oracles import relative_entropy_logm

SIGMA_2 = cluster_state(chain(2)).projector()
SIGMA_C = thermal_state(chain(2), OMEGA_C)


def random_density(rng, n, rank=None):
    d = 2**n
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    m = g @ g.conj().T
    return DensityOp(m / np.trace(m).real)


def test_two_qubit_distances():
    assert abs(relative_entropy(SIGMA_2, rho_star_2()) - 1) < 1e-9
    assert abs(relative_entropy(SIGMA_2, SIGMA_C) - 1) < 1e-9


def test_rho_star_to_critical_thermal_frozen():
    # Bell weights of sigma_2(omega_c) give 0.5 * log2(1 + sqrt 2)
    value = relative_entropy(rho_star_2(), SIGMA_C)
    assert value == pytest.approx(0.6357766515818055, abs=1e-12)
    assert value > 0


def test_entropy_values():
    assert von_neumann_entropy(SIGMA_2) == pytest.approx(0, abs=1e-12)
    assert von_neumann_entropy(DensityOp.maximally_mixed(3)) == pytest.approx(3)
    assert von_neumann_entropy(rho_star_2()) == pytest.approx(1)


def test_infinite_when_support_leaks():
    zero = DensityOp(np.diag([1.0, 0, 0, 0]))
    assert relative_entropy(SIGMA_2, zero) == math.inf
    assert directional_gradient(SIGMA_2, zero, rho_star_2()) == math.inf
    with pytest.raises(ValueError):
        relative_entropy(SIGMA_2, DensityOp.maximally_mixed(1))


def test_matches_logm_oracle():
    rng = np.random.default_rng(5)
    for n in (1, 2, 3):
        s, r = random_density(rng, n, rank=1), random_density(rng, n)
        assert relative_entropy(s, r) == pytest.approx(relative_entropy_logm(s.matrix, r.matrix), abs=1e-9)


@pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_mixture_line_stays_at_one(lam):
    rho = DensityOp((1 - lam) * rho_star_2().matrix + lam * SIGMA_C.matrix, check_psd=False)
    assert abs(relative_entropy(SIGMA_2, rho) - 1) < 1e-9


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3))
def test_nonnegative_and_zero_on_diagonal(seed, n):
    rng = np.random.default_rng(seed)
    s, r = random_density(rng, n), random_density(rng, n)
    assert relative_entropy(s, r) >= -1e-12
    assert abs(relative_entropy(r, r)) < 1e-9
    if np.linalg.norm(s.matrix - r.matrix) >= 1e-9:
        assert relative_entropy(s, r) > 0


def test_gradient_toward_self_is_zero():
    assert abs(directional_gradient(SIGMA_2, rho_star_2(), rho_star_2())) < 1e-12


def test_gradient_toward_zero_zero():
    tau = DensityOp(np.diag([1.0, 0, 0, 0]))
    assert directional_gradient(SIGMA_2, rho_star_2(), tau) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_closed_form_on_pure_chains(n):
    g = chain(n)
    psi = cluster_state(g)
    sigma, rho = psi.projector(), closest_separable_pure(g)
    rng = np.random.default_rng(n)
    for _ in range(200):
        tau = BlochProduct.random(n, rng)
        overlap = abs(np.vdot(psi.amplitudes, tau.ket().amplitudes)) ** 2
        closed = 1 - 2 ** (n / 2) * overlap
        assert abs(directional_gradient(sigma, rho, tau) - closed) <= 1e-7


@pytest.mark.parametrize(
    "sigma, rho",
    [
        (SIGMA_2, rho_star_2()),
        (SIGMA_2, SIGMA_C),
        (thermal_state(chain(2), 0.8), SIGMA_C),
        (thermal_state(chain(3), 0.6), thermal_state(chain(3), 0.3)),
    ],
)
def test_matches_finite_difference(sigma, rho):
    rng = np.random.default_rng(2)
    for _ in range(20):
        tau = BlochProduct.random(sigma.n_qubits, rng).density()
        analytic = directional_gradient(sigma, rho, tau, bits=True)
        assert analytic == pytest.approx(directional_gradient(sigma, rho, tau) / LN2)
        assert abs(analytic - finite_difference_gradient(sigma, rho, tau, 1e-6)) < 1e-4
        # forward difference truncation is O(x) and grows near a singular rho
        assert abs(analytic - finite_difference_gradient(sigma, rho, tau, 1e-5)) < 1e-3


def test_scan_at_rho_star_2():
    cert = gradient_scan(SIGMA_2, rho_star_2(), samples=1000, seed=0)
    assert cert.passed
    assert cert.min_gradient >= -1e-8
    assert abs(cert.analytic_min) < 1e-9
    assert cert.max_closed_form_error < 1e-7


def test_scan_at_critical_thermal():
    cert = gradient_scan(SIGMA_2, SIGMA_C, samples=1000, seed=0)
    assert cert.passed and cert.min_gradient > 0


def test_scan_at_maximally_mixed_records_values():
    cert = gradient_scan(SIGMA_2, DensityOp.maximally_mixed(2), samples=200, seed=1)
    assert math.isfinite(cert.min_gradient)
    assert cert.samples == 200


def test_scan_reproducible():
    a = gradient_scan(SIGMA_2, SIGMA_C, samples=300, seed=9)
    b = gradient_scan(SIGMA_2, SIGMA_C, samples=300, seed=9, chunk=7)
    assert a.min_gradient == b.min_gradient
    with pytest.raises(ValueError):
        gradient_scan(SIGMA_2, SIGMA_C, samples=0)


@pytest.mark.parametrize("spec, e", [("chain:2", 1), ("chain:3", 1), ("chain:4", 2), ("chain:6", 3), ("lattice:2x2", 2)])
def test_ree_pure_cluster(spec, e):
    value, cert = ree_pure_cluster(make_graph(spec), samples=300)
    assert abs(value - e) < 1e-9
    assert cert.passed
