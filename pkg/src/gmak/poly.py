"""Sparse multivariate polynomials with rational coefficients, and matrices of them."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .linalg import QMatrix

Monomial = tuple[int, ...]


class Poly:
    """Polynomial in a fixed number of variables, stored as ``{exponents: coeff}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError("monomial arity mismatch")
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int, c=1) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(c)})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.constant(self.nvars, other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def coefficients_nonnegative(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def coefficients_nonpositive(self) -> bool:
        return all(c < 0 for c in self.terms.values())

    def content(self) -> tuple[Fraction, "Poly"]:
        """Split off a positive rational factor so the rest has integer coprime coefficients."""
        if not self.terms:
            return Fraction(1), self
        den = reduce(lcm, (c.denominator for c in self.terms.values()), 1)
        num = reduce(gcd, (abs(int(c * den)) for c in self.terms.values()), 0)
        f = Fraction(num, den)
        return f, Poly(self.nvars, {m: c / f for m, c in self.terms.items()})

    def format(self, symbols: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(f"{s}^{e}" if e > 1 else s for s, e in zip(symbols, m) if e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {sgn} {b}" for sgn, b in parts[1:])

    def __repr__(self) -> str:
        return f"Poly({self.format([f'x{i}' for i in range(self.nvars)])})"


def polynomial_from_dict(symbols: Sequence[str], data: Mapping[str, object]) -> Poly:
    """Build a linear polynomial from ``{symbol: coeff}`` (key ``"1"`` is the constant)."""
    p = Poly(len(symbols))
    for key, c in data.items():
        p = p + (Poly.constant(len(symbols), c) if key == "1" else Poly.var(len(symbols), list(symbols).index(key), c))
    return p


class ParametricMatrix:
    """Square matrix of polynomials over named parameters."""

    def __init__(self, symbols: Sequence[str], entries: Sequence[Sequence[Poly]]):
        self.symbols = tuple(symbols)
        self.entries = tuple(tuple(r) for r in entries)
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise ValueError("parametric matrix must be square")
        if any(p.nvars != len(self.symbols) for r in self.entries for p in r):
            raise ValueError("entry variables must come from the symbol list")
        self._minor = lru_cache(maxsize=None)(self._minor_uncached)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def nvars(self) -> int:
        return len(self.symbols)

    @classmethod
    def zeros(cls, symbols: Sequence[str], n: int) -> "ParametricMatrix":
        z = Poly(len(symbols))
        return cls(symbols, [[z] * n for _ in range(n)])

    @classmethod
    def linear_combination(cls, symbols: Sequence[str], mats: Sequence[QMatrix]) -> "ParametricMatrix":
        """``Σ symbols[c] * mats[c]``."""
        if not mats:
            raise ValueError("need at least one matrix (use zeros)")
        n, k = mats[0].rows, len(symbols)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                row.append(Poly(k, {tuple(int(t == c) for t in range(k)): M[i, j] for c, M in enumerate(mats)}))
            rows.append(row)
        return cls(symbols, rows)

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def __neg__(self) -> "ParametricMatrix":
        return ParametricMatrix(self.symbols, [[-p for p in r] for r in self.entries])

    def __eq__(self, other) -> bool:
        return isinstance(other, ParametricMatrix) and self.symbols == other.symbols and self.entries == other.entries

    def evaluate(self, point: Sequence) -> QMatrix:
        if len(point) != self.nvars:
            raise ValueError("point has the wrong number of coordinates")
        return QMatrix([[p.evaluate(point) for p in r] for r in self.entries], self.n)

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.entries for p in r)

    def _minor_uncached(self, rows: tuple[int, ...], cols: tuple[int, ...]) -> Poly:
        if not rows:
            return Poly.constant(self.nvars, 1)
        i, rest = rows[0], rows[1:]
        total = Poly(self.nvars)
        for k, j in enumerate(cols):
            a = self.entries[i][j]
            if a.is_zero():
                continue
            sub = self._minor(rest, cols[:k] + cols[k + 1 :])
            term = a * sub
            total = total + (term if k % 2 == 0 else -term)
        return total

    def minor(self, rows: Iterable[int], cols: Iterable[int]) -> Poly:
        """Determinant polynomial of the selected submatrix (Laplace expansion, memoised)."""
        rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
        if len(rows) != len(cols):
            raise ValueError("minor needs equally many rows and columns")
        return self._minor(rows, cols)

    def format(self) -> list[list[str]]:
        return [[p.format(self.symbols) for p in r] for r in self.entries]
