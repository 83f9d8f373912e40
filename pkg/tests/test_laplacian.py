import random
from fractions import Fraction as F

import pytest

import oracle_data as od
from conftest import FIXTURES, load
from gmak.laplacian import (
    AuxiliaryGraph,
    NotWeaklyReversible,
    cbe_residual,
    chain_graph_from_preorders,
    core_laplacian,
    cycle_coefficients,
    cycle_laplacian,
    enumerate_cycles,
    laplacian,
    rates_from,
    tree_constants,
    tree_constants_bruteforce,
)
from gmak.linalg import QMatrix
from gmak.network import parse_network


def random_rates(rng: random.Random, count: int):
    return [F(rng.randint(1, 30), rng.randint(1, 12)) for _ in range(count)]


@pytest.mark.parametrize("name", FIXTURES)
def test_identities_on_random_rational_rates(name):
    net = load(name)
    rng = random.Random(f"laplacian-{name}")
    for _ in range(50):
        k = random_rates(rng, len(net.edges))
        A = laplacian(net, k)
        K = tree_constants(net, k)
        assert not any(A.apply(K))
        assert all(x > 0 for x in K)
        assert K == tree_constants_bruteforce(net, k)
        core = core_laplacian(net, k)
        I = AuxiliaryGraph(tuple(zip(range(net.m - 1), range(1, net.m))), True).incidence(net.m)
        assert (A @ QMatrix.diag(K) + I @ core @ I.T).is_zero()
        assert all(core[i, j] >= 0 for i in range(core.rows) for j in range(core.rows))
        assert all(core[i, i] > 0 for i in range(core.rows))
        lam = cycle_coefficients(net, k)
        assert all(v > 0 for v in lam.values())
        total = QMatrix.zeros(net.m, net.m)
        for c in enumerate_cycles(net):
            total = total + cycle_laplacian(net, c).scale(lam[c.name])
        assert total == A @ QMatrix.diag(K)


def test_lotka_tree_constants_reference():
    net = load("lotka")
    for k, K in od.LOTKA_TREE_CONSTANTS.items():
        assert tree_constants(net, k) == K


def test_laplacian_columns_sum_to_zero():
    net = load("futile")
    A = laplacian(net, [F(i + 1, 3) for i in range(len(net.edges))])
    assert all(sum(A[i, j] for i in range(net.m)) == 0 for j in range(net.m))


def test_rates_mapping_and_validation():
    net = load("lotka")
    by_arrow = {f"{net.vertices[e.source].name}->{net.vertices[e.target].name}": 2 for e in net.edges}
    assert rates_from(net, by_arrow) == (2,) * len(net.edges)
    with pytest.raises(ValueError):
        rates_from(net, [1] * len(net.edges[:-1]))
    with pytest.raises(ValueError):
        rates_from(net, [0] + [1] * (len(net.edges) - 1))
    with pytest.raises(KeyError):
        rates_from(net, {**by_arrow, "bogus": 1})


def test_non_chain_auxiliary_graph():
    net = load("signaling")
    k = [1] * len(net.edges)
    star = AuxiliaryGraph(((0, 1), (0, 2), (0, 3)))
    core = core_laplacian(net, k, star)
    A, K = laplacian(net, k), tree_constants(net, k)
    I = star.incidence(net.m)
    assert (A @ QMatrix.diag(K) + I @ core @ I.T).is_zero()


def test_bad_auxiliary_graph_rejected():
    net = load("signaling")
    with pytest.raises(ValueError):
        core_laplacian(net, [1] * len(net.edges), AuxiliaryGraph(((0, 1), (1, 0), (2, 3))))


def test_cbe_residual_vanishes_on_constructed_equilibrium():
    # 0 <-> X with k1 = 2, k2 = 3: x* = 2/3
    net = parse_network("species X\nvertex a: 0\nvertex b: X\nedge a -> b [k1]\nedge b -> a [k2]\n")
    k = {"k1": 2, "k2": 3}
    assert cbe_residual(net, k, [F(2, 3)]) == [0]
    assert cbe_residual(net, k, [F(1)]) != [0]


def test_not_weakly_reversible_rejected():
    net = parse_network("species X Y\nvertex a: X\nvertex b: Y\nedge a -> b\n")
    with pytest.raises(NotWeaklyReversible):
        tree_constants(net, [1])


def test_cycles_are_canonical_and_named():
    assert {c.name for c in enumerate_cycles(load("futile"))} == set(od.FUTILE_CYCLES.values())
    assert {c.name for c in enumerate_cycles(load("futile-reversed"))} == set(od.FUTILE_REVERSED_CYCLES.values())
    assert {c.name for c in enumerate_cycles(load("signaling"))} == set(od.SIGNALING_CYCLES.values())


def test_chain_from_harmonious_preorders():
    g = chain_graph_from_preorders({0: 0, 1: 1, 2: 1}, {0: 0, 1: 0, 2: 1})
    assert g.order == (0, 1, 2) and g.edges == ((0, 1), (1, 2))
    with pytest.raises(ValueError):
        chain_graph_from_preorders({0: 0, 1: 1}, {0: 1, 1: 0})
