"""Laplacians, tree constants, the core Laplacian, cycles, and the parametric Jacobian."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .linalg import (
    Feasible,
    QMatrix,
    SignConstrainedSystem,
    det,
    feasible,
    inverse,
)
from .network import GeneralizedNetwork, connected_components, is_weakly_reversible
from .poly import ParametricMatrix

DEFAULT_MAX_CYCLES = 10_000


class NotWeaklyReversible(ValueError):
    pass


class CycleCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# rate constants


def rates_from(net: GeneralizedNetwork, k: Mapping[str, object] | Sequence) -> tuple[Fraction, ...]:
    """Per-edge positive rates from a sequence or a mapping keyed by rate symbol or ``"u->v"``."""
    if isinstance(k, Mapping):
        out = []
        for j in range(len(net.edges)):
            label = net.edge_label(j)
            e = net.edges[j]
            alt = f"{net.vertices[e.source].name}->{net.vertices[e.target].name}"
            if label in k:
                out.append(Fraction(k[label]))
            elif alt in k:
                out.append(Fraction(k[alt]))
            else:
                raise KeyError(f"missing rate for edge {label}")
        extra = set(k) - {net.edge_label(j) for j in range(len(net.edges))} - {
            f"{net.vertices[e.source].name}->{net.vertices[e.target].name}" for e in net.edges
        }
        if extra:
            raise KeyError(f"unknown rate key {sorted(extra)[0]}")
    else:
        out = [Fraction(x) for x in k]
        if len(out) != len(net.edges):
            raise ValueError(f"expected {len(net.edges)} rates, got {len(out)}")
    if any(x <= 0 for x in out):
        raise ValueError("rate constants must be positive")
    return tuple(out)


def laplacian(net: GeneralizedNetwork, k) -> QMatrix:
    """``(A_k)_{ij} = k_{j->i}`` off the diagonal; columns sum to zero."""
    rates = rates_from(net, k)
    A = [[Fraction(0)] * net.m for _ in range(net.m)]
    for e, r in zip(net.edges, rates):
        A[e.target][e.source] += r
        A[e.source][e.source] -= r
    return QMatrix(A, net.m)


# ---------------------------------------------------------------------------
# tree constants


def _require_wr(net: GeneralizedNetwork):
    if not is_weakly_reversible(net):
        raise NotWeaklyReversible("network is not weakly reversible")


def tree_constants(net: GeneralizedNetwork, k) -> tuple[Fraction, ...]:
    """Rooted spanning-tree weights per vertex, via matrix-tree cofactors per component."""
    _require_wr(net)
    A = laplacian(net, k)
    K = [Fraction(0)] * net.m
    for comp in connected_components(net):
        size = len(comp)
        for i in comp:
            rest = [v for v in comp if v != i]
            K[i] = (-1) ** (size - 1) * det(A.submatrix(rest, rest))
    K = tuple(K)
    if any(A.apply(K)) or any(x <= 0 for x in K):
        raise ArithmeticError("tree constants failed the kernel/positivity check")
    return K


def tree_constants_bruteforce(net: GeneralizedNetwork, k) -> tuple[Fraction, ...]:
    """Oracle: enumerate in-arborescences explicitly (tiny graphs only)."""
    from itertools import product

    rates = rates_from(net, k)
    out_edges: dict[int, list[tuple[int, Fraction]]] = {v: [] for v in range(net.m)}
    for e, r in zip(net.edges, rates):
        out_edges[e.source].append((e.target, r))
    K = [Fraction(0)] * net.m
    for comp in connected_components(net):
        for root in comp:
            others = [v for v in comp if v != root]
            choices = [out_edges[v] for v in others]
            for pick in product(*choices):
                parent = {v: t for v, (t, _) in zip(others, pick)}
                if any(t not in comp for t in parent.values()):
                    continue
                ok = True
                for v in others:
                    seen, u = set(), v
                    while u != root:
                        if u in seen:
                            ok = False
                            break
                        seen.add(u)
                        u = parent[u]
                    if not ok:
                        break
                if ok:
                    K[root] += math.prod((r for _, r in pick), start=Fraction(1))
    return tuple(K)


# ---------------------------------------------------------------------------
# auxiliary graphs and the core Laplacian


@dataclass(frozen=True)
class AuxiliaryGraph:
    """Spanning forest with ``|V_λ| - 1`` directed edges per component."""

    edges: tuple[tuple[int, int], ...]
    chain: bool = False

    def incidence(self, m: int) -> QMatrix:
        cols = []
        for a, b in self.edges:
            c = [0] * m
            c[a], c[b] = -1, 1
            cols.append(c)
        return QMatrix.from_columns(cols, m)

    def validate(self, net: GeneralizedNetwork) -> None:
        comps = connected_components(net)
        where = {v: ci for ci, comp in enumerate(comps) for v in comp}
        g = nx.Graph()
        g.add_nodes_from(range(net.m))
        for a, b in self.edges:
            if where[a] != where[b]:
                raise ValueError("auxiliary edge joins different components")
            g.add_edge(a, b)
        if len(self.edges) != net.m - len(comps) or not nx.is_forest(g) or g.number_of_edges() != len(self.edges):
            raise ValueError("auxiliary graph must be a spanning forest of the components")


def chain_graph(orders: Sequence[Sequence[int]]) -> AuxiliaryGraph:
    """Chain along each given vertex order (one order per component)."""
    return AuxiliaryGraph(tuple((o[i], o[i + 1]) for o in orders for i in range(len(o) - 1)), chain=True)


def default_chain(net: GeneralizedNetwork) -> AuxiliaryGraph:
    return chain_graph(connected_components(net))


def core_laplacian(net: GeneralizedNetwork, k, aux: AuxiliaryGraph | None = None) -> QMatrix:
    """Invertible 𝒜 with ``A_k diag(K_k) = -I_ℰ 𝒜 I_ℰᵀ``, residual checked exactly."""
    aux = default_chain(net) if aux is None else aux
    aux.validate(net)
    A = laplacian(net, k)
    K = tree_constants(net, k)
    AK = A @ QMatrix.diag(K)
    I = aux.incidence(net.m)
    if I.cols == 0:
        return QMatrix([], 0)
    G_inv = inverse(I.T @ I)
    core = -(G_inv @ I.T @ AK @ I @ G_inv)
    if not (AK + I @ core @ I.T).is_zero():
        raise ArithmeticError("core Laplacian residual is nonzero")
    if det(core) == 0:
        raise ArithmeticError("core Laplacian is singular")
    if aux.chain:
        n = core.rows
        if any(core[i, j] < 0 for i in range(n) for j in range(n)) or any(core[i, i] <= 0 for i in range(n)):
            raise ArithmeticError("chain-graph core Laplacian is not nonnegative with positive diagonal")
    return core


def _monomial(x: Sequence, exps: Sequence[Fraction]):
    """``x^e``; exact when all exponents are integers and ``x`` is rational."""
    exact = all(isinstance(v, (int, Fraction)) for v in x) and all(e.denominator == 1 for e in exps)
    if exact:
        out = Fraction(1)
        for v, e in zip(x, exps):
            out *= Fraction(v) ** int(e)
        return out
    return math.prod(float(v) ** float(e) for v, e in zip(x, exps))


def cbe_residual(net: GeneralizedNetwork, k, x: Sequence, aux: AuxiliaryGraph | None = None) -> list:
    """Binomial residuals ``x^{ỹ(i')}/K_{i'} - x^{ỹ(i)}/K_i`` over the auxiliary edges."""
    if any(v <= 0 for v in x):
        raise ValueError("concentrations must be positive")
    if len(x) != net.n:
        raise ValueError("x has the wrong length")
    aux = default_chain(net) if aux is None else aux
    aux.validate(net)
    K = tree_constants(net, k)
    vals = []
    for i, v in enumerate(net.vertices):
        mono = _monomial(x, v.kinetic.vector(net.n))
        vals.append(mono / K[i] if isinstance(mono, Fraction) else mono / float(K[i]))
    return [vals[b] - vals[a] for a, b in aux.edges]


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True)
class Cycle:
    vertices: tuple[int, ...]
    name: str

    def edges(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


def _canonical(cyc: Sequence[int]) -> tuple[int, ...]:
    i = cyc.index(min(cyc))
    return tuple(cyc[i:]) + tuple(cyc[:i])


def enumerate_cycles(net: GeneralizedNetwork, cap: int = DEFAULT_MAX_CYCLES) -> list[Cycle]:
    """Every simple directed cycle once, rotated to start at its smallest vertex index."""
    found = []
    for cyc in nx.simple_cycles(net.digraph()):
        found.append(_canonical(cyc))
        if len(found) > cap:
            raise CycleCapExceeded(f"more than {cap} cycles")
    found.sort(key=lambda c: (-len(c), c))
    return [Cycle(c, "C(" + " ".join(net.vertices[i].name for i in c) + ")") for c in found]


def cycle_laplacian(net: GeneralizedNetwork, cycle: Cycle) -> QMatrix:
    A = [[0] * net.m for _ in range(net.m)]
    for a, b in cycle.edges():
        A[b][a] += 1
        A[a][a] -= 1
    return QMatrix(A, net.m)


def cycle_coefficients(net: GeneralizedNetwork, k, cap: int = DEFAULT_MAX_CYCLES) -> dict[str, Fraction]:
    """Positive ``λ_C`` with ``Σ λ_C A_C = A_k diag(K_k)``, found and verified exactly."""
    cycles = enumerate_cycles(net, cap)
    target = laplacian(net, k) @ QMatrix.diag(tree_constants(net, k))
    mats = [cycle_laplacian(net, c) for c in cycles]
    nc = len(cycles)
    # unknowns (λ_1..λ_c, t): Σ λ_C A_C - t * target = 0, all strictly positive
    zero_rows = []
    for i in range(net.m):
        for j in range(net.m):
            zero_rows.append([M[i, j] for M in mats] + [-target[i, j]])
    strict = [[int(a == b) for b in range(nc + 1)] for a in range(nc + 1)]
    res = feasible(SignConstrainedSystem.build(nc + 1, strict=strict, zero=zero_rows))
    if not isinstance(res, Feasible):
        raise ArithmeticError("no positive cycle decomposition")
    t = res.witness[-1]
    lam = {c.name: w / t for c, w in zip(cycles, res.witness)}
    total = QMatrix.zeros(net.m, net.m)
    for c, M in zip(cycles, mats):
        total = total + M.scale(lam[c.name])
    if total != target:
        raise ArithmeticError("cycle decomposition failed exact re-check")
    return lam


def structure_matrices(net: GeneralizedNetwork) -> tuple[QMatrix, QMatrix]:
    Y = QMatrix.from_columns([v.stoich.vector(net.n) for v in net.vertices], net.n)
    Yt = QMatrix.from_columns([v.kinetic.vector(net.n) for v in net.vertices], net.n)
    return Y, Yt


def parametric_reduced_jacobian(net: GeneralizedNetwork, cap: int = DEFAULT_MAX_CYCLES) -> ParametricMatrix:
    """``𝒥(λ) = Y (Σ_C λ_C A_C) Ỹᵀ`` with one free parameter per simple cycle."""
    cycles = enumerate_cycles(net, cap)
    Y, Yt = structure_matrices(net)
    symbols = [c.name for c in cycles]
    if not cycles:
        return ParametricMatrix.zeros(symbols, net.n)
    return ParametricMatrix.linear_combination(symbols, [Y @ cycle_laplacian(net, c) @ Yt.T for c in cycles])


# ---------------------------------------------------------------------------
# preorders


@dataclass(frozen=True)
class ChainGraph(AuxiliaryGraph):
    order: tuple[int, ...] = ()


def chain_graph_from_preorders(p1: Mapping[int, int], p2: Mapping[int, int]) -> ChainGraph:
    """Strict total order refining two harmonious total preorders.

    A preorder is given by ranks: ``i <= j`` iff ``rank[i] <= rank[j]``.
    """
    if set(p1) != set(p2):
        raise ValueError("preorders must be on the same vertex set")
    V = sorted(p1)
    for i in V:
        for j in V:
            if (p1[i] < p1[j] and p2[i] > p2[j]) or (p2[i] < p2[j] and p1[i] > p1[j]):
                raise ValueError(f"preorders are not harmonious on ({i}, {j})")
    order = tuple(sorted(V, key=lambda v: (p1[v], p2[v], v)))
    return ChainGraph(tuple(zip(order, order[1:])), True, order)
