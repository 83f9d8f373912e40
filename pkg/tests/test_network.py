from fractions import Fraction as F

import pytest

import oracle_data as od
from conftest import FIXTURES, fixture_text, load, structure
from gmak.linalg import rank
from gmak.network import ParseError, analyze_structure, deficiency_via_kernel, format_network, parse_network


@pytest.mark.parametrize("name", sorted(od.STRUCTURE))
def test_structure_matches_reference(name):
    ns = structure(name)
    assert (ns.m, ns.l, ns.delta, ns.delta_tilde, ns.weakly_reversible) == od.STRUCTURE[name]


@pytest.mark.parametrize("name", FIXTURES)
def test_deficiency_via_kernel_agrees(name):
    ns = structure(name)
    assert deficiency_via_kernel(ns) == ns.delta


@pytest.mark.parametrize("name", FIXTURES)
def test_round_trip(name):
    net = load(name)
    again = parse_network(format_network(net))
    assert format_network(again) == format_network(net)
    assert analyze_structure(again).Y == analyze_structure(net).Y


def test_signaling_subspaces():
    ns = structure("signaling")
    assert (ns.dim_S, ns.dim_Stilde, ns.n) == (2, 3, 4)
    assert rank(ns.M) == ns.dim_S


def test_parameter_override_and_zero_drops_term():
    net = load("lotka", alpha=1, beta=1)
    assert net.param_dict["alpha"] == 1
    net0 = load("lotka", beta=0)
    # beta = 0 removes Y from the kinetic complex of v2
    assert net0.vertices[1].kinetic.vector(2) == [F(1), F(0)]


def test_unknown_override_rejected():
    with pytest.raises(ParseError):
        parse_network(fixture_text("lotka"), {"gamma": 1})


BAD = {
    "unknown species": "species X\nvertex a: Z\nvertex b: X\nedge a -> b\n",
    "zero coefficient": "species X\nvertex a: 0 X\nvertex b: X\nedge a -> b\n",
    "duplicate vertex": "species X\nvertex a: X\nvertex a: 0\n",
    "self-loop": "species X\nvertex a: X\nedge a -> a\n",
    "parallel edge": "species X\nvertex a: X\nvertex b: 0\nedge a -> b\nedge a -> b\n",
    "unknown vertex": "species X\nvertex a: X\nedge a -> c\n",
    "duplicate rate symbol": "species X\nvertex a: X\nvertex b: 0\nedge a -> b [k]\nedge b -> a [k]\n",
    "unresolved parameter": "species X\nvertex a: q X\nvertex b: 0\nedge a -> b\n",
    "unknown keyword": "species X\nnode a: X\n",
}


@pytest.mark.parametrize("what", sorted(BAD))
def test_parse_errors(what):
    with pytest.raises(ParseError) as info:
        parse_network(BAD[what])
    assert info.value.line >= 1


def test_not_weakly_reversible_structure():
    net = parse_network("species X Y\nvertex a: X\nvertex b: Y\nedge a -> b\n")
    ns = analyze_structure(net)
    assert not ns.weakly_reversible
    assert (ns.m, ns.l, ns.dim_S, ns.delta) == (2, 1, 1, 0)


def test_omega_single_orientation():
    ns = structure("futile")
    assert ns.omega == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
