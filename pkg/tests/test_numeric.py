import numpy as np
import pytest

import oracle_data as od
from conftest import load, structure
from gmak.laplacian import enumerate_cycles
from gmak.linalg import orthogonal_complement
from gmak.network import parse_network
from gmak.numeric import (
    NoCBE,
    cbe_residual_norm,
    compute_cbe,
    evaluate_sample,
    jacobian_at,
    orthonormal_basis,
    probe_minor_violation,
    rates_for_equilibrium,
    rhs,
    sample_stability,
    sample_to_json,
    spectrum_on_S,
    tree_constants_float,
)

BIRTH_DEATH = "species X\nvertex a: 0\nvertex b: X\nedge a -> b [k1]\nedge b -> a [k2]\n"


def test_birth_death_jacobian_is_minus_k2():
    net = parse_network(BIRTH_DEATH)
    k = [2.0, 5.0]
    x = compute_cbe(net, k)
    assert x == pytest.approx([0.4])
    assert jacobian_at(net, k, x) == pytest.approx(np.array([[-5.0]]))


@pytest.mark.parametrize("name", ["lotka", "signaling", "futile", "futile-reversed"])
def test_jacobian_matches_finite_differences(name):
    net = load(name)
    rng = np.random.default_rng(3)
    k = np.exp(rng.uniform(-1, 1, len(net.edges)))
    x = np.exp(rng.uniform(-1, 1, net.n))
    J = jacobian_at(net, k, x)
    h = 1e-6
    fd = np.column_stack([(rhs(net, k, x + h * e) - rhs(net, k, x - h * e)) / (2 * h) for e in np.eye(net.n)])
    assert np.allclose(J, fd, rtol=1e-5, atol=1e-7)


def test_tree_constants_float_matches_exact():
    net = load("lotka")
    for k, K in od.LOTKA_TREE_CONSTANTS.items():
        assert tree_constants_float(net, k) == pytest.approx([float(v) for v in K])


@pytest.mark.parametrize("name", ["lotka", "signaling", "futile"])
def test_cbe_family_moves_along_stilde_perp(name):
    net, ns = load(name), structure(name)
    k = np.linspace(0.5, 2.0, len(net.edges))
    x = compute_cbe(net, k)
    assert cbe_residual_norm(net, k, x) < 1e-9
    assert np.allclose(rhs(net, k, x), 0, atol=1e-9)
    perp = orthogonal_complement(ns.Stilde_basis)
    for c in perp.columns():
        shifted = x * np.exp(0.3 * np.array([float(v) for v in c]))
        assert cbe_residual_norm(net, k, shifted) < 1e-9


def test_no_cbe_for_generic_rates_on_positive_kinetic_deficiency():
    net = load("sir")
    with pytest.raises(NoCBE):
        compute_cbe(net, np.linspace(0.3, 3.0, len(net.edges)))


def test_constructed_rates_have_requested_equilibrium():
    net = load("sir")
    x = np.array([0.5, 2.0])
    k = rates_for_equilibrium(net, [1.3, 0.2], x)
    assert cbe_residual_norm(net, k, x) < 1e-12


def test_sampling_is_deterministic():
    net = load("signaling")
    assert sample_stability(net, 10, seed=5) == sample_stability(net, 10, seed=5)
    assert sample_stability(net, 10, seed=5) != sample_stability(net, 10, seed=6)


def test_sampling_validation():
    net = load("signaling")
    with pytest.raises(ValueError):
        sample_stability(net, 0)
    with pytest.raises(ValueError):
        sample_stability(net, 1, mode="bogus")


def test_reversed_futile_probe_is_unstable():
    net = load("futile-reversed")
    order = [c.name for c in enumerate_cycles(net)]
    by_name = {od.FUTILE_REVERSED_CYCLES[k]: v for k, v in od.REVERSED_LAMBDA.items()}
    lam = [float(by_name[name]) for name in order]
    rows, _ = od.REVERSED_NEGATIVE_MINOR
    s = probe_minor_violation(net, lam, rows)
    assert s.valid and s.stable is False and s.max_real > 1.0


def test_spectrum_helpers():
    ns = structure("signaling")
    B = orthonormal_basis(ns)
    assert np.allclose(B.T @ B, np.eye(ns.dim_S))
    with pytest.raises(ValueError):
        spectrum_on_S(np.eye(4), 2 * B)
    ev, stable = spectrum_on_S(np.zeros((1, 1)), np.zeros((1, 0)))
    assert ev.size == 0 and stable


def test_sample_json_round_trip():
    net, ns = load("lotka"), structure("lotka")
    s = evaluate_sample(net, ns, [1.0, 2.0, 3.0], orthonormal_basis(ns), 1e-8)
    d = sample_to_json(s)
    assert d["valid"] and all(len(z) == 2 for z in d["spectrum"])


def test_invalid_inputs():
    net = load("lotka")
    with pytest.raises(ValueError):
        jacobian_at(net, [1, 1, 1], [1.0, -1.0])
    with pytest.raises(ValueError):
        rhs(net, [1, 1], [1.0, 1.0])
