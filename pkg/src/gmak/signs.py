"""Sign vectors, closures, and exact sign sets of subspaces and images.

Sign vectors are tuples over ``{-1, 0, 1}``.  Two engines compute sign
sets of linear images:

* ``covector``: cocircuits from exact integer minors, closed under
  composition.  Fast, used by default.
* ``lp``: brute force over all ``3^d`` candidates, each decided by the
  exact feasibility oracle.  Slow, kept as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    Feasible,
    QMatrix,
    SignConstrainedSystem,
    bareiss_det,
    feasible,
    image_basis,
    integer_rows,
)

SignVector = tuple[int, ...]

LOWER, UPPER, TOTAL = "lower", "upper", "total"

DEFAULT_SUBSPACE_CAP = 10


class EnumerationTooLarge(ValueError):
    """An enumeration would exceed its configured cap."""


# ---------------------------------------------------------------------------
# elementary operations


def sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_of(v: Iterable) -> SignVector:
    return tuple(sign(x) for x in v)


def zero(d: int) -> SignVector:
    return (0,) * d


def negate(s: SignVector) -> SignVector:
    return tuple(-a for a in s)


def is_zero(s: SignVector) -> bool:
    return not any(s)


def leq(s: SignVector, t: SignVector) -> bool:
    """``s <= t`` under ``0 < -`` and ``0 < +``."""
    return all(a == 0 or a == b for a, b in zip(s, t))


def conformal(s: SignVector, t: SignVector) -> bool:
    """No coordinate with opposite nonzero signs."""
    return all(a * b >= 0 for a, b in zip(s, t))


def hadamard(s: SignVector, t: SignVector) -> SignVector:
    return tuple(a * b for a, b in zip(s, t))


def positive_product(s: SignVector, t: SignVector) -> bool:
    """``s ⊙ t > 0``: harmonious and overlapping."""
    p = hadamard(s, t)
    return min(p, default=0) >= 0 and any(p)


def orthogonal(s: SignVector, t: SignVector) -> bool:
    p = hadamard(s, t)
    return not any(p) or (1 in p and -1 in p)


def compose(s: SignVector, t: SignVector) -> SignVector:
    return tuple(a if a else b for a, b in zip(s, t))


def all_sign_vectors(d: int) -> Iterable[SignVector]:
    return product((-1, 0, 1), repeat=d)


def sort_key(s: SignVector):
    return (sum(map(abs, s)), tuple(-a if a else 2 for a in s))


# ---------------------------------------------------------------------------
# sign sets and closures


@dataclass(frozen=True)
class SignSet:
    members: frozenset
    dim: int
    provenance: str = ""

    def __post_init__(self):
        if any(len(s) != self.dim for s in self.members):
            raise ValueError("sign vector length differs from the ambient dimension")

    def __contains__(self, s) -> bool:
        return tuple(s) in self.members

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[SignVector]:
        return sorted(self.members, key=sort_key)

    def nonzero(self) -> list[SignVector]:
        return [s for s in self.sorted() if any(s)]

    def is_symmetric(self) -> bool:
        return all(negate(s) in self.members for s in self.members)


def _down(t: SignVector) -> Iterable[SignVector]:
    opts = [(0, a) if a else (0,) for a in t]
    return product(*opts)


def _up(t: SignVector) -> Iterable[SignVector]:
    opts = [(a,) if a else (-1, 0, 1) for a in t]
    return product(*opts)


def closure(T: SignSet, mode: str) -> SignSet:
    """Lower, upper, or total closure exactly as defined on sign sets.

    The lower closure ranges over every member; the upper and total
    closures only over nonzero members.
    """
    out: set[SignVector] = set()
    for t in T.members:
        nz = any(t)
        if mode == LOWER or (mode == TOTAL and nz):
            out.update(_down(t))
        if mode in (UPPER, TOTAL) and nz:
            out.update(_up(t))
        if mode not in (LOWER, UPPER, TOTAL):
            raise ValueError(f"unknown closure mode {mode!r}")
    return SignSet(frozenset(out), T.dim, f"{mode} closure of {T.provenance}".strip())


def in_closure(s: SignVector, T: SignSet | Iterable[SignVector], mode: str) -> bool:
    """Membership in a closure without materialising it."""
    members = T.members if isinstance(T, SignSet) else T
    for t in members:
        nz = any(t)
        if (mode == LOWER or (mode == TOTAL and nz)) and leq(s, t):
            return True
        if mode in (UPPER, TOTAL) and nz and leq(t, s):
            return True
    return False


def closure_violations(A: Iterable[SignVector], T: SignSet | Iterable[SignVector], mode: str) -> list[SignVector]:
    """Nonzero members of ``A`` outside the chosen closure of ``T``.

    The zero vector is exempt: inclusion conditions are stated for
    nonzero sign vectors (the upper closure never contains zero).
    """
    members = T.members if isinstance(T, SignSet) else frozenset(T)
    bad = [s for s in A if any(s) and not in_closure(s, members, mode)]
    return sorted(bad, key=sort_key)


# ---------------------------------------------------------------------------
# realizability via the feasibility oracle


def _constraints_for(sign_rows: Sequence[tuple[int, Sequence]], dim: int):
    strict, zeros = [], []
    for s, row in sign_rows:
        if s:
            strict.append([s * a for a in row])
        else:
            zeros.append(list(row))
    return strict, zeros


def realize_in_image(sigma: SignVector, N: QMatrix, nonneg=(), zeros=()) -> tuple[Fraction, ...] | None:
    """A parameter ``w`` with ``sign(N w) = sigma`` (plus extra homogeneous rows), or None."""
    if len(sigma) != N.rows:
        raise ValueError("sign vector length mismatch")
    strict, zr = _constraints_for([(s, N.row(i)) for i, s in enumerate(sigma)], N.cols)
    if N.cols == 0:
        return () if not any(sigma) else None
    sys = SignConstrainedSystem.build(N.cols, strict=strict, nonneg=list(nonneg), zero=zr + list(zeros))
    res = feasible(sys)
    return res.witness if isinstance(res, Feasible) else None


def realizable_in_subspace(sigma: SignVector, B: QMatrix) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Whether ``sigma`` is the sign of some ``x`` in ``im B``; returns the exact ``x``."""
    sigma = tuple(sigma)
    if not any(sigma):
        return True, tuple(Fraction(0) for _ in sigma)
    w = realize_in_image(sigma, B)
    if w is None:
        return False, None
    x = B.apply(w)
    assert sign_of(x) == sigma
    return True, x


def _lp_sign_set(N: QMatrix, nonneg=(), zeros=()) -> frozenset:
    d = N.rows
    out = set()
    for sigma in all_sign_vectors(d):
        if sigma in out:
            continue
        w = realize_in_image(sigma, N, nonneg, zeros)
        if w is not None:
            out.add(sigma)
            if not nonneg:  # symmetric cone
                out.add(negate(sigma))
    return frozenset(out)


# ---------------------------------------------------------------------------
# covector enumeration


def _cocircuits(N: QMatrix) -> set[SignVector]:
    d = N.rows
    B = image_basis(N)
    r = B.cols
    rows, _ = integer_rows([B.row(i) for i in range(d)])
    out: set[SignVector] = set()
    if r == 1:
        c = tuple(sign(row[0]) for row in rows)
        return {c, negate(c)}
    for R in combinations(range(d), r - 1):
        sub = [rows[i] for i in R]
        v = [(-1) ** j * bareiss_det([row[:j] + row[j + 1 :] for row in sub]) for j in range(r)]
        if not any(v):
            continue
        c = tuple(sign(sum(a * b for a, b in zip(row, v))) for row in rows)
        out.add(c)
        out.add(negate(c))
    return out


def _compose_closure(cocircuits: set[SignVector], d: int) -> frozenset:
    if not cocircuits:
        return frozenset({zero(d)})
    C = np.array(sorted(cocircuits), dtype=np.int8)
    pow3 = 3 ** np.arange(d, dtype=np.int64)
    known = {0 + int(pow3.sum())}  # code of the zero vector
    frontier = np.zeros((1, d), dtype=np.int8)
    found = [frontier]
    block = max(1, 4_000_000 // max(1, C.shape[0] * d))
    while frontier.shape[0]:
        fresh_codes: dict[int, np.ndarray] = {}
        for start in range(0, frontier.shape[0], block):
            F = frontier[start : start + block]
            Y = np.where(F[:, None, :] != 0, F[:, None, :], C[None, :, :]).reshape(-1, d)
            codes = (Y.astype(np.int64) + 1) @ pow3
            codes, idx = np.unique(codes, return_index=True)
            for code, i in zip(codes.tolist(), idx.tolist()):
                if code not in known and code not in fresh_codes:
                    fresh_codes[code] = Y[i]
        known.update(fresh_codes)
        frontier = np.array(list(fresh_codes.values()), dtype=np.int8).reshape(-1, d)
        found.append(frontier)
    allv = np.concatenate(found)
    return frozenset(map(tuple, allv.astype(int).tolist()))


@lru_cache(maxsize=256)
def covectors(N: QMatrix) -> frozenset:
    """``sign(im N)``: every sign vector of ``N w`` for real ``w``."""
    d = N.rows
    if d == 0:
        return frozenset({()})
    if N.cols == 0 or N.is_zero():
        return frozenset({zero(d)})
    return _compose_closure(_cocircuits(N), d)


def sign_set_of_subspace(B: QMatrix, cap: int = DEFAULT_SUBSPACE_CAP, method: str = "covector") -> SignSet:
    """``sign(im B)``; ``method="lp"`` enumerates all candidates with the oracle."""
    if B.rows > cap:
        raise EnumerationTooLarge(f"enumeration too large: ambient dimension {B.rows} exceeds cap {cap}")
    if method == "lp":
        members = _lp_sign_set(B) if B.cols else frozenset({zero(B.rows)})
    elif method == "covector":
        members = covectors(B)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SignSet(members, B.rows, "subspace")


# ---------------------------------------------------------------------------
# images of regions


@dataclass(frozen=True)
class Region:
    """Where ``z`` ranges before the map ``z -> Mᵀ z`` is applied.

    ``full``: all of ``R^dim``.  ``zero``: the origin.  ``orthant``:
    ``z = basis w`` with ``w`` in the open (or closed) orthant of sign
    pattern ``orthant``.  ``sigma``: every ``z`` whose sign vector is
    achieved by some ``basis w`` with ``w`` in the open orthant (or any
    ``w`` when ``orthant`` is None).  ``basis=None`` means the identity.
    """

    kind: str
    dim: int
    orthant: SignVector | None = None
    closed: bool = False
    basis: QMatrix | None = None

    @classmethod
    def full(cls, dim: int) -> "Region":
        return cls("full", dim)

    @classmethod
    def zero(cls, dim: int) -> "Region":
        return cls("zero", dim)

    @classmethod
    def orthant_of(cls, o: SignVector, closed: bool = False, basis: QMatrix | None = None) -> "Region":
        dim = basis.rows if basis is not None else len(o)
        if basis is not None and basis.cols != len(o):
            raise ValueError("orthant pattern length must match the basis size")
        return cls("orthant", dim, tuple(o), closed, basis)

    @classmethod
    def sigma(cls, basis: QMatrix, orthant: SignVector | None = None) -> "Region":
        return cls("sigma", basis.rows, None if orthant is None else tuple(orthant), False, basis)

    def param_basis(self) -> QMatrix:
        return self.basis if self.basis is not None else QMatrix.identity(self.dim)


def _prefix_filter(covs: Iterable[SignVector], s: int, o: SignVector | None, closed: bool):
    for c in covs:
        head = c[:s]
        if o is None or (leq(head, o) if closed else head == o):
            yield head, c[s:]


def _stack_identity(L: QMatrix) -> QMatrix:
    return QMatrix.identity(L.cols).vstack(L)


def sigma_patterns(basis: QMatrix, orthant: SignVector | None, method: str = "covector") -> frozenset:
    """Sign vectors of ``basis w`` for ``w`` in the open orthant (all of ``sign(im basis)`` if None)."""
    if orthant is None:
        return covectors(basis) if method == "covector" else _lp_sign_set(basis)
    s = basis.cols
    if method == "covector":
        return frozenset(t for _, t in _prefix_filter(covectors(_stack_identity(basis)), s, orthant, False))
    return _lp_region_signs(basis, orthant, closed=False)


def _lp_region_signs(L: QMatrix, o: SignVector, closed: bool) -> frozenset:
    """LP oracle for ``sign(L w)`` with ``w`` in the open/closed orthant ``o``."""
    s = L.cols
    nonneg, zeros, strict_w = [], [], []
    for i, a in enumerate(o):
        e = [0] * s
        e[i] = 1
        if a == 0:
            zeros.append(e)
        elif closed:
            nonneg.append([a * x for x in e])
        else:
            strict_w.append([a * x for x in e])
    out = set()
    for tau in all_sign_vectors(L.rows):
        strict, zr = _constraints_for([(t, L.row(i)) for i, t in enumerate(tau)], s)
        sys = SignConstrainedSystem.build(s, strict=strict + strict_w, nonneg=nonneg, zero=zr + zeros)
        if isinstance(feasible(sys), Feasible):
            out.add(tau)
    return frozenset(out)


def sign_set_of_image_on_region(M: QMatrix, region: Region, method: str = "covector") -> SignSet:
    """Exact ``sign(Mᵀ z)`` over ``z`` in ``region``."""
    if M.rows != region.dim:
        raise ValueError("region dimension must equal the row count of M")
    MT = M.T
    d = MT.rows
    prov = f"image on {region.kind} region"
    if region.kind == "zero":
        return SignSet(frozenset({zero(d)}), d, prov)
    if region.kind == "full":
        members = covectors(MT) if method == "covector" else _lp_sign_set(MT)
        return SignSet(members, d, prov)
    if region.kind == "orthant":
        L = MT @ region.param_basis()
        if method == "covector":
            members = frozenset(t for _, t in _prefix_filter(covectors(_stack_identity(L)), L.cols, region.orthant, region.closed))
        else:
            members = _lp_region_signs(L, region.orthant, region.closed)
        return SignSet(members, d, prov)
    if region.kind == "sigma":
        rhos = sigma_patterns(region.basis, region.orthant, method)
        if method == "covector":
            stacked = covectors(_stack_identity(MT))
            members = frozenset(c[region.dim :] for c in stacked if c[: region.dim] in rhos)
        else:
            out = set()
            for rho in rhos:
                for tau in all_sign_vectors(d):
                    if tau in out:
                        continue
                    zstrict, zzero = _constraints_for(
                        [(r, [int(i == j) for j in range(region.dim)]) for i, r in enumerate(rho)], region.dim
                    )
                    tstrict, tzero = _constraints_for([(t, MT.row(i)) for i, t in enumerate(tau)], region.dim)
                    sys = SignConstrainedSystem.build(region.dim, strict=zstrict + tstrict, zero=zzero + tzero)
                    if isinstance(feasible(sys), Feasible):
                        out.add(tau)
            members = frozenset(out)
        return SignSet(members, d, prov)
    raise ValueError(f"unknown region kind {region.kind!r}")


def open_orthants(s: int, half: bool = False, faces: bool = False) -> list[SignVector]:
    """Sign patterns of open orthants of ``R^s``.

    With ``faces`` every nonzero pattern is included, i.e. also the
    relatively open lower-dimensional faces of the orthants.  With
    ``half`` only patterns whose first nonzero entry is ``+`` are kept
    (one of each ``±`` pair).
    """
    if faces:
        out = [o for o in product((1, 0, -1), repeat=s) if any(o)]
    else:
        out = list(product((1, -1), repeat=s))
    if half:
        out = [o for o in out if not any(o) or next(a for a in o if a) == 1]
    return out
