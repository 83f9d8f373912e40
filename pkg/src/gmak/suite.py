"""Duality and implication properties of sign sets, checked on concrete subspace pairs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import QMatrix, orthogonal_complement, rank
from .signs import (
    LOWER,
    TOTAL,
    UPPER,
    Region,
    all_sign_vectors,
    closure_violations,
    covectors,
    leq,
    orthogonal,
    positive_product,
    sign_set_of_image_on_region,
    sign_set_of_subspace,
    zero,
)

PROPERTIES = (
    "oracle_agreement",
    "minty_realizable",
    "minty_conformal",
    "orthogonal_duality",
    "intersect_equivalence",
    "total_closure_trivial",
    "implication_chain",
    "equal_dimension",
    "sigma_image",
)


@dataclass
class SuiteResult:
    pairs: int = 0
    violations: dict[str, list] = field(default_factory=lambda: {p: [] for p in PROPERTIES})
    exercised: dict[str, int] = field(default_factory=lambda: {p: 0 for p in PROPERTIES})

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def counts(self) -> dict[str, int]:
        return {p: len(v) for p, v in self.violations.items()}


def random_subspace(rng: random.Random, d: int, k: int | None = None) -> QMatrix:
    k = rng.randint(0, d) if k is None else k
    cols = [[Fraction(rng.randint(-2, 2)) for _ in range(d)] for _ in range(k)]
    return QMatrix.from_columns(cols, d) if cols else QMatrix([[] for _ in range(d)], 0)


def _signs(B: QMatrix) -> frozenset:
    return covectors(B) if B.cols else frozenset({zero(B.rows)})


def _trivial(A: frozenset, B: frozenset) -> bool:
    return all(not any(s) for s in A & B)


def _included(A: frozenset, T: frozenset, mode: str | None) -> bool:
    if mode is None:
        return A <= T
    return not closure_violations(A, T, mode)


def check_pair(B1: QMatrix, B2: QMatrix, result: SuiteResult, lp_oracle: bool = True) -> None:
    """Record every property violation for the pair ``(im B1, im B2)``."""
    d = B1.rows
    v = result.violations
    hit = result.exercised
    s1, s2 = _signs(B1), _signs(B2)
    P1, P2 = orthogonal_complement(B1), orthogonal_complement(B2)
    s1p, s2p = _signs(P1), _signs(P2)
    tag = {"B1": B1.tolist(), "B2": B2.tolist()}

    if lp_oracle and B1.cols:
        hit["oracle_agreement"] += 1
        if sign_set_of_subspace(B1, cap=d, method="lp").members != s1:
            v["oracle_agreement"].append(tag)

    for sigma in all_sign_vectors(d):
        if not any(sigma):
            continue
        hit["minty_realizable"] += 1
        hit["minty_conformal"] += 1
        a = sigma in s1
        b = any(positive_product(sigma, t) for t in s1p)
        if a == b:
            v["minty_realizable"].append({**tag, "sigma": sigma})
        a = any(leq(sigma, t) for t in s1)
        b = any(any(t) and leq(t, sigma) for t in s1p)
        if a == b:
            v["minty_conformal"].append({**tag, "sigma": sigma})

    hit["orthogonal_duality"] += 1
    hit["intersect_equivalence"] += 1
    dual = frozenset(s for s in all_sign_vectors(d) if all(orthogonal(s, t) for t in s1))
    if dual != s1p:
        v["orthogonal_duality"].append(tag)

    trivial = _trivial(s1, s2p)
    every = all(any(positive_product(a, b) for b in s2) for a in s1 if any(a))
    if trivial != every:
        v["intersect_equivalence"].append(tag)

    eq = s1 == s2
    inc = _included(s1, s2, None)
    down = _included(s1, s2, LOWER)
    up = _included(s1, s2, UPPER)
    tot = _included(s1, s2, TOTAL)
    hit["total_closure_trivial"] += tot
    if tot and not trivial:
        v["total_closure_trivial"].append(tag)
    chain = [(eq, inc), (inc, down), (inc, up), (down, tot), (up, tot), (tot, trivial)]
    hit["implication_chain"] += sum(p for p, _ in chain)
    for i, (p, q) in enumerate(chain):
        if p and not q:
            v["implication_chain"].append({**tag, "step": i})

    hit["equal_dimension"] += rank(B1) == rank(B2)
    if rank(B1) == rank(B2) and trivial != _trivial(s1p, s2):
        v["equal_dimension"].append(tag)

    # A(Σ(S1)) = im A whenever S1⊥ ∩ im Aᵀ = {0}; here A = B2ᵀ
    A_T = B2
    if B1.cols and A_T.cols:
        stacked = P1.hstack(A_T) if P1.cols else A_T
        if rank(stacked) == rank(P1) + rank(A_T):
            hit["sigma_image"] += 1
            got = sign_set_of_image_on_region(A_T, Region.sigma(B1)).members
            if got != _signs(A_T.T):
                v["sigma_image"].append(tag)


def duality_and_implication_suite(pairs: int = 200, max_dim: int = 4, seed: int = 0, lp_oracle: bool = True) -> SuiteResult:
    """Run every property on ``pairs`` random rational subspace pairs of dimension ``<= max_dim``."""
    rng = random.Random(seed)
    res = SuiteResult()
    for _ in range(pairs):
        d = rng.randint(1, max_dim)
        check_pair(random_subspace(rng, d), random_subspace(rng, d), res, lp_oracle)
        res.pairs += 1
    return res
