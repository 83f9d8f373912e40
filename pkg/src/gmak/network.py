"""Generalized mass-action networks: data model, text format, and structure."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .linalg import QMatrix, image_basis, intersect_subspaces, kernel_basis

NAME_RE = r"[A-Za-z_][A-Za-z0-9_*']*"
RATIONAL_RE = r"-?\d+(?:/\d+)?"
_TOKEN = re.compile(
    rf"\s*(?:(?P<arrow>->)|(?P<rat>{RATIONAL_RE})|(?P<name>{NAME_RE})|(?P<sym>[:|+\[\]=]))"
)


class ParseError(ValueError):
    """Raised for malformed or invalid network text; carries a 1-based position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message, self.line, self.column = message, line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Complex:
    """Sparse complex: sorted ``(species index, nonzero coefficient)`` pairs."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        idx = [i for i, _ in self.terms]
        if idx != sorted(set(idx)):
            raise ValueError("complex terms must have distinct, sorted species indices")
        if any(c == 0 for _, c in self.terms):
            raise ValueError("zero coefficients are not stored")

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, Fraction]) -> "Complex":
        return cls(tuple(sorted((i, Fraction(c)) for i, c in coeffs.items() if c != 0)))

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def vector(self, n: int) -> list[Fraction]:
        v = [Fraction(0)] * n
        for i, c in self.terms:
            v[i] = c
        return v


@dataclass(frozen=True)
class Vertex:
    name: str
    stoich: Complex
    kinetic: Complex


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    rate: str | None = None


@dataclass(frozen=True)
class GeneralizedNetwork:
    species: tuple[str, ...]
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    parameters: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        if len(set(self.species)) != len(self.species):
            raise ValueError("duplicate species name")
        names = [v.name for v in self.vertices]
        if len(set(names)) != len(names):
            raise ValueError("duplicate vertex name")
        n, m = len(self.species), len(self.vertices)
        for v in self.vertices:
            for c in (v.stoich, v.kinetic):
                if any(not 0 <= i < n for i, _ in c.terms):
                    raise ValueError(f"vertex {v.name} references an unknown species")
        seen = set()
        for e in self.edges:
            if not (0 <= e.source < m and 0 <= e.target < m):
                raise ValueError("edge endpoint out of range")
            if e.source == e.target:
                raise ValueError(f"self-loop at vertex {self.vertices[e.source].name}")
            if (e.source, e.target) in seen:
                raise ValueError("parallel edge")
            seen.add((e.source, e.target))

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def m(self) -> int:
        return len(self.vertices)

    @property
    def param_dict(self) -> dict[str, Fraction]:
        return dict(self.parameters)

    def vertex_index(self, name: str) -> int:
        for i, v in enumerate(self.vertices):
            if v.name == name:
                return i
        raise KeyError(name)

    def edge_label(self, j: int) -> str:
        e = self.edges[j]
        return e.rate or f"{self.vertices[e.source].name}->{self.vertices[e.target].name}"

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.m))
        g.add_edges_from((e.source, e.target) for e in self.edges)
        return g

    def with_edges(self, edges: Sequence[Edge]) -> "GeneralizedNetwork":
        return GeneralizedNetwork(self.species, self.vertices, tuple(edges), self.parameters)


# ---------------------------------------------------------------------------
# parsing


def _tokenize(text: str, lineno: int):
    pos, out = 0, []
    stripped = text.rstrip()
    while pos < len(stripped):
        mt = _TOKEN.match(stripped, pos)
        if not mt or mt.end() == pos:
            col = pos + 1 + (len(stripped[pos:]) - len(stripped[pos:].lstrip()))
            raise ParseError(f"unexpected character {stripped[col - 1]!r}", lineno, col)
        kind = mt.lastgroup
        out.append((kind, mt.group(kind), mt.start(kind) + 1))
        pos = mt.end()
    return out


class _Line:
    def __init__(self, tokens, lineno, width):
        self.toks, self.i, self.lineno, self.width = tokens, 0, lineno, width

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.width + 1)

    def take(self, kind=None, value=None, what=None):
        k, v, c = self.peek()
        if k is None or (kind and k != kind) or (value is not None and v != value):
            want = what or value or kind
            got = "end of line" if k is None else repr(v)
            raise ParseError(f"expected {want}, found {got}", self.lineno, c)
        self.i += 1
        return v, c

    def done(self) -> bool:
        return self.i >= len(self.toks)

    def expect_end(self):
        if not self.done():
            _, v, c = self.peek()
            raise ParseError(f"unexpected {v!r}", self.lineno, c)


def _parse_complex(ln: _Line, species: dict[str, int], params: dict[str, Fraction]) -> Complex:
    k, v, c = ln.peek()
    if k == "rat" and v == "0":
        nxt = ln.toks[ln.i + 1] if ln.i + 1 < len(ln.toks) else (None, None, 0)
        if nxt[0] != "name":
            ln.take()
            return Complex()
    coeffs: dict[int, Fraction] = {}
    while True:
        k, v, c = ln.peek()
        coeff, literal = Fraction(1), False
        if k == "rat":
            literal = True
            ln.take()
            coeff = Fraction(v)
            k, v, c = ln.peek()
        elif k == "name":
            nxt = ln.toks[ln.i + 1] if ln.i + 1 < len(ln.toks) else (None, None, 0)
            if nxt[0] == "name":
                if v not in params:
                    raise ParseError(f"unresolved parameter {v!r}", ln.lineno, c)
                coeff = params[v]
                ln.take()
                k, v, c = ln.peek()
        name, col = ln.take("name", what="species name")
        if name not in species:
            raise ParseError(f"unknown species {name!r}", ln.lineno, col)
        if coeff == 0 and literal:
            raise ParseError("zero coefficient", ln.lineno, col)
        idx = species[name]
        coeffs[idx] = coeffs.get(idx, Fraction(0)) + coeff
        if ln.peek()[0] == "sym" and ln.peek()[1] == "+":
            ln.take()
            continue
        break
    return Complex.from_mapping(coeffs)


def parse_network(text: str, overrides: Mapping[str, Fraction | int | str] | None = None) -> GeneralizedNetwork:
    """Parse the line-oriented network format.

    ``overrides`` rebinds declared parameters before they are substituted
    (unknown names in ``overrides`` are an error).
    """
    overrides = {k: Fraction(v) for k, v in (overrides or {}).items()}
    species: dict[str, int] = {}
    params: dict[str, Fraction] = {}
    vertex_rows: list[tuple[str, Complex, Complex | None, int]] = []
    edge_rows: list[tuple[str, str, str | None, int, int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokenize(body, lineno)
        if not toks:
            continue
        ln = _Line(toks, lineno, len(body.rstrip()))
        kw, col = ln.take("name", what="keyword")
        if kw == "species":
            ln.take("name", what="species name")
            ln.i -= 1
            while not ln.done():
                name, c = ln.take("name", what="species name")
                if name in species:
                    raise ParseError(f"duplicate species {name!r}", lineno, c)
                species[name] = len(species)
        elif kw == "param":
            name, c = ln.take("name", what="parameter name")
            if name in params:
                raise ParseError(f"duplicate parameter {name!r}", lineno, c)
            ln.take("sym", "=")
            val, _ = ln.take("rat", what="rational literal")
            ln.expect_end()
            params[name] = overrides.get(name, Fraction(val))
        elif kw == "vertex":
            name, c = ln.take("name", what="vertex name")
            if any(r[0] == name for r in vertex_rows):
                raise ParseError(f"duplicate vertex {name!r}", lineno, c)
            ln.take("sym", ":")
            stoich = _parse_complex(ln, species, params)
            kinetic = None
            if not ln.done():
                ln.take("sym", "|")
                kinetic = _parse_complex(ln, species, params)
            ln.expect_end()
            vertex_rows.append((name, stoich, kinetic, lineno))
        elif kw == "edge":
            src, cs = ln.take("name", what="vertex name")
            ln.take("arrow", what="'->'")
            tgt, ct = ln.take("name", what="vertex name")
            rate = None
            if not ln.done():
                ln.take("sym", "[")
                rate, _ = ln.take("name", what="rate symbol")
                ln.take("sym", "]")
            ln.expect_end()
            edge_rows.append((src, tgt, rate, lineno, cs, ct))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, col)

    unknown = set(overrides) - set(params)
    if unknown:
        raise ParseError(f"unresolved parameter {sorted(unknown)[0]!r} in overrides")

    index = {r[0]: i for i, r in enumerate(vertex_rows)}
    edges: list[Edge] = []
    seen: set[tuple[int, int]] = set()
    rates_seen: set[str] = set()
    for src, tgt, rate, lineno, cs, ct in edge_rows:
        for nm, c in ((src, cs), (tgt, ct)):
            if nm not in index:
                raise ParseError(f"unknown vertex {nm!r}", lineno, c)
        a, b = index[src], index[tgt]
        if a == b:
            raise ParseError(f"self-loop at {src!r}", lineno, cs)
        if (a, b) in seen:
            raise ParseError(f"parallel edge {src} -> {tgt}", lineno, cs)
        if rate is not None:
            if rate in rates_seen:
                raise ParseError(f"duplicate rate symbol {rate!r}", lineno, cs)
            rates_seen.add(rate)
        seen.add((a, b))
        edges.append(Edge(a, b, rate))

    vertices = tuple(Vertex(nm, st, kin if kin is not None else st) for nm, st, kin, _ in vertex_rows)
    return GeneralizedNetwork(tuple(species), vertices, tuple(edges), tuple(params.items()))


def _format_complex(c: Complex, species: Sequence[str]) -> str:
    if not c.terms:
        return "0"
    parts = []
    for i, coeff in c.terms:
        parts.append(species[i] if coeff == 1 else f"{coeff} {species[i]}")
    return " + ".join(parts)


def format_network(net: GeneralizedNetwork) -> str:
    """Canonical text form; parameters appear already substituted in complexes."""
    lines = []
    if net.species:
        lines.append("species " + " ".join(net.species))
    lines += [f"param {k} = {v}" for k, v in net.parameters]
    for v in net.vertices:
        s = f"vertex {v.name}: {_format_complex(v.stoich, net.species)}"
        if v.kinetic != v.stoich:
            s += f" | {_format_complex(v.kinetic, net.species)}"
        lines.append(s)
    for e in net.edges:
        s = f"edge {net.vertices[e.source].name} -> {net.vertices[e.target].name}"
        if e.rate:
            s += f" [{e.rate}]"
        lines.append(s)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class NetworkStructure:
    n: int
    m: int
    Y: QMatrix
    Ytilde: QMatrix
    I_E: QMatrix
    I_E_source: QMatrix
    I_Omega: QMatrix
    omega: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, ...], ...]
    strong_components: tuple[tuple[int, ...], ...]
    S_basis: QMatrix
    Stilde_basis: QMatrix
    weakly_reversible: bool
    species: tuple[str, ...] = field(default=())

    @property
    def l(self) -> int:  # noqa: E743 - conventional symbol
        return len(self.components)

    @property
    def dim_S(self) -> int:
        return self.S_basis.cols

    @property
    def dim_Stilde(self) -> int:
        return self.Stilde_basis.cols

    @property
    def delta(self) -> int:
        return self.m - self.l - self.dim_S

    @property
    def delta_tilde(self) -> int:
        return self.m - self.l - self.dim_Stilde

    @property
    def M(self) -> QMatrix:
        """Y I_Ω."""
        return self.Y @ self.I_Omega

    @property
    def Mtilde(self) -> QMatrix:
        return self.Ytilde @ self.I_Omega


def _sorted_parts(parts) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(p)) for p in parts))


def connected_components(net: GeneralizedNetwork) -> tuple[tuple[int, ...], ...]:
    return _sorted_parts(nx.weakly_connected_components(net.digraph()))


def strong_components(net: GeneralizedNetwork) -> tuple[tuple[int, ...], ...]:
    return _sorted_parts(nx.strongly_connected_components(net.digraph()))


def is_weakly_reversible(net: GeneralizedNetwork) -> bool:
    return connected_components(net) == strong_components(net)


def incidence_matrices(net: GeneralizedNetwork) -> tuple[QMatrix, QMatrix]:
    m = net.m
    inc = [[0] * len(net.edges) for _ in range(m)]
    src = [[0] * len(net.edges) for _ in range(m)]
    for j, e in enumerate(net.edges):
        inc[e.source][j] = -1
        inc[e.target][j] = 1
        src[e.source][j] = 1
    return QMatrix(inc, len(net.edges)), QMatrix(src, len(net.edges))


def omega_pairs(components) -> tuple[tuple[int, int], ...]:
    """Unordered within-component pairs, stored as ``(i, i')`` with ``i < i'``."""
    return tuple((a, b) for comp in components for k, a in enumerate(comp) for b in comp[k + 1 :])


def analyze_structure(net: GeneralizedNetwork) -> NetworkStructure:
    n, m = net.n, net.m
    Y = QMatrix.from_columns([v.stoich.vector(n) for v in net.vertices], n)
    Yt = QMatrix.from_columns([v.kinetic.vector(n) for v in net.vertices], n)
    I_E, I_src = incidence_matrices(net)
    comps = connected_components(net)
    omega = omega_pairs(comps)
    cols = []
    for a, b in omega:
        col = [0] * m
        col[a], col[b] = -1, 1
        cols.append(col)
    I_Om = QMatrix.from_columns(cols, m)
    S = image_basis(Y @ I_E)
    St = image_basis(Yt @ I_E)
    return NetworkStructure(
        n=n,
        m=m,
        Y=Y,
        Ytilde=Yt,
        I_E=I_E,
        I_E_source=I_src,
        I_Omega=I_Om,
        omega=omega,
        components=comps,
        strong_components=strong_components(net),
        S_basis=S,
        Stilde_basis=St,
        weakly_reversible=is_weakly_reversible(net),
        species=net.species,
    )


def deficiency_via_kernel(ns: NetworkStructure) -> int:
    """dim(ker Y ∩ im I_E), computed independently of the rank formula."""
    return intersect_subspaces(kernel_basis(ns.Y), ns.I_E).cols
