import math

import numpy as np
import pytest

from clusterent.graphs import chain, cluster_state, thermal_state
from clusterent.separable import closest_separable_pure
from clusterent.thermal import (
    OMEGA_C,
    bipartitions,
    critical_omega_2qubit,
    critical_temperature,
    golden_section_minimize,
    lambda_formula,
    lambda_star,
    mixture_candidate,
    ppt_report,
    thermal_entanglement_curve,
    two_qubit_ppt_gap,
)
from clusterent.divergence import relative_entropy

from .oracles import partial_transpose_loops


def test_bisection_omega_c():
    cp = critical_omega_2qubit()
    assert abs(cp.omega_c - (math.sqrt(2) - 1)) <= 1e-10
    # root of w**2 + 2w - 1
    assert abs(cp.omega_c**2 + 2 * cp.omega_c - 1) < 1e-10


def test_ppt_gap_endpoints():
    assert two_qubit_ppt_gap(0.0) == pytest.approx(0.25)
    assert two_qubit_ppt_gap(1.0) == pytest.approx(-0.5)


def test_ppt_gap_against_loop_oracle():
    for w in (0.2, 0.5, 0.9):
        m = thermal_state(chain(2), w).matrix
        brute = np.linalg.eigvalsh(partial_transpose_loops(m, [2], 2)).min()
        assert two_qubit_ppt_gap(w) == pytest.approx(brute, abs=1e-14)


def test_critical_temperature_value():
    cp = critical_temperature()
    assert abs(cp.T_c - 2 / math.log(1 + math.sqrt(2))) <= 1e-10
    assert cp.T_c == pytest.approx(2.269185314213022, abs=1e-12)
    assert abs(math.tanh(1 / cp.T_c) - (math.sqrt(2) - 1)) < 1e-12


def test_critical_temperature_linear():
    assert critical_temperature(2.0).T_c == pytest.approx(2 * critical_temperature(1.0).T_c, rel=1e-14)
    assert critical_temperature(1.0, 2.0).T_c == pytest.approx(critical_temperature(1.0).T_c / 2)
    with pytest.raises(ValueError):
        critical_temperature(-1.0)


@pytest.mark.parametrize("J", [0.5, 1.0, 2.0])
def test_bisection_temperature(J):
    assert abs(critical_omega_2qubit(J).T_c - critical_temperature(J).T_c) <= 1e-10


def test_bipartitions():
    assert list(bipartitions(2)) == [(1,)]
    cuts = list(bipartitions(4))
    assert len(cuts) == 7  # 4 single + 3 halves
    assert len(list(bipartitions(5))) == 15


def test_ppt_report_cases():
    assert ppt_report(cluster_state(chain(2)).projector())[(1,)] == pytest.approx(-0.5)
    assert min(ppt_report(closest_separable_pure(chain(4))).values()) >= -1e-10
    rep = ppt_report(thermal_state(chain(4), OMEGA_C + 0.01))
    assert set(rep) == set(bipartitions(4))
    assert all(np.isfinite(v) for v in rep.values())


def test_curve_chain_2():
    grid = np.linspace(OMEGA_C, 1.0, 50)
    rows = thermal_entanglement_curve(chain(2), grid)
    e = np.array([r.entanglement_bits for r in rows])
    assert abs(e[0]) < 1e-9 and abs(e[-1] - 1) < 1e-9
    assert np.all(np.diff(e) > 0)
    assert rows[-1].temperature == 0.0
    assert rows[0].temperature == pytest.approx(critical_temperature().T_c)
    assert rows[-1].min_ppt_eig == pytest.approx(-0.5)


def test_curve_four_qubits_and_threads():
    grid = np.linspace(0.5, 0.95, 6)
    a = thermal_entanglement_curve(chain(4), grid)
    b = thermal_entanglement_curve(chain(4), grid, workers=3)
    assert a == b
    assert all(np.isfinite([r.entanglement_bits, r.min_ppt_eig]).all() for r in a)


def test_curve_validation():
    with pytest.raises(ValueError):
        thermal_entanglement_curve(chain(2), [0.5, 1.2])
    with pytest.raises(ValueError):
        thermal_entanglement_curve(chain(2), [0.6, 0.5])


def test_golden_section_quadratic():
    x, fx = golden_section_minimize(lambda t: (t - 0.3) ** 2 + 1, 0.0, 1.0, tol=1e-10)
    # function values resolve a quadratic minimum only to ~sqrt(eps)
    assert abs(x - 0.3) < 1e-7 and fx == pytest.approx(1.0)


def test_formula_at_omega_c():
    assert abs(lambda_formula(OMEGA_C) - 1) <= 1e-12


def test_lambda_star_near_omega_c():
    assert lambda_star(OMEGA_C + 1e-3).lambda_star > 0.99


def test_lambda_star_flat_at_pure_limit():
    res = lambda_star(1.0)
    assert res.flat_interval == (0.0, 1.0)
    assert res.objective_at_min == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("omega", [0.6, 0.7, 0.8, 0.95])
def test_lambda_star_is_minimum(omega):
    res = lambda_star(omega)
    sigma = thermal_state(chain(2), omega)
    assert 0.0 <= res.lambda_star <= 1.0
    ends = [relative_entropy(sigma, mixture_candidate(x)) for x in (0.0, 1.0)]
    assert res.objective_at_min <= min(ends) + 1e-12
    grid = [relative_entropy(sigma, mixture_candidate(x)) for x in np.linspace(0, 1, 101)]
    assert res.objective_at_min <= min(grid) + 1e-12


@pytest.mark.parametrize("omega", [0.6, 0.7, 0.8, 0.95])
def test_lambda_star_against_formula_magnitude(omega):
    # measured gap between the minimiser and |formula| stays below 1e-6
    res = lambda_star(omega)
    assert abs(res.lambda_star - res.formula_value) < 1e-6


def test_lambda_star_domain():
    with pytest.raises(ValueError):
        lambda_star(0.3)
    with pytest.raises(ValueError):
        mixture_candidate(1.5)


def binary_entropy(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@pytest.mark.parametrize("omega", [0.6, 0.8, 0.95])
def test_mixture_family_misses_bell_diagonal_optimum(omega):
    # the two-qubit thermal cluster is Bell diagonal with largest weight
    # (1 + omega)**2 / 4, whose distance to the separable set is 1 - h(p);
    # the best point on the mixture line stays strictly above it
    p = (1 + omega) ** 2 / 4
    res = lambda_star(omega)
    assert res.objective_at_min > 1 - binary_entropy(p) + 5e-3
