"""Principal-minor tests (P, P0, P0+, sign symmetry) on rational and parametric matrices."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

from .linalg import QMatrix, minor, rank
from .poly import ParametricMatrix, Poly
from .report import FAILS, HOLDS, INCONCLUSIVE, NOT_APPLICABLE, ConditionReport

CERT_TRUE, CERT_FALSE, CERT_INCONCLUSIVE = "certified_true", "certified_false", "inconclusive"

GRID = (Fraction(1, 8), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(8))
RANDOM_POINTS = 200
DEFAULT_SEED = 0


@dataclass
class MinorCertificate:
    kind: str
    status: str
    evidence: dict = field(default_factory=dict)
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status == CERT_TRUE

    def as_status(self) -> str:
        return {CERT_TRUE: HOLDS, CERT_FALSE: FAILS}.get(self.status, INCONCLUSIVE)


def _subsets(n: int, orders: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    for k in orders or range(1, n + 1):
        yield from combinations(range(n), k)


def _square(M) -> int:
    n = M.rows if isinstance(M, QMatrix) else M.n
    if isinstance(M, QMatrix) and M.rows != M.cols:
        raise ValueError("matrix must be square")
    return n


# ---------------------------------------------------------------------------
# rational matrices


def is_P_matrix(M: QMatrix) -> MinorCertificate:
    n = _square(M)
    for a in _subsets(n):
        v = minor(M, a, a)
        if v <= 0:
            return MinorCertificate("P", CERT_FALSE, {}, {"rows": a, "minor": v})
    return MinorCertificate("P", CERT_TRUE, {"principal_minors_checked": 2**n - 1})


def is_P0(M: QMatrix) -> MinorCertificate:
    n = _square(M)
    for a in _subsets(n):
        v = minor(M, a, a)
        if v < 0:
            return MinorCertificate("P0", CERT_FALSE, {}, {"rows": a, "minor": v})
    return MinorCertificate("P0", CERT_TRUE, {"principal_minors_checked": 2**n - 1})


def is_P0_plus(M: QMatrix, r: int) -> MinorCertificate:
    """Principal minors nonnegative, and a positive one of every order up to ``r``."""
    n = _square(M)
    if not 1 <= r <= max(n, 1) or r > n:
        raise ValueError("order r must satisfy 1 <= r <= n")
    positive_of: dict[int, tuple[int, ...]] = {}
    for a in _subsets(n):
        v = minor(M, a, a)
        if v < 0:
            return MinorCertificate("P0plus", CERT_FALSE, {"r": r}, {"rows": a, "minor": v})
        if v > 0:
            positive_of.setdefault(len(a), a)
    for k in range(1, r + 1):
        if k not in positive_of:
            return MinorCertificate("P0plus", CERT_FALSE, {"r": r}, {"order_without_positive_minor": k})
    return MinorCertificate("P0plus", CERT_TRUE, {"r": r, "positive_minor_per_order": {k: positive_of[k] for k in range(1, r + 1)}})


def symmetric_pairs(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    for k in range(1, n + 1):
        subs = list(combinations(range(n), k))
        for i, a in enumerate(subs):
            for b in subs[i + 1 :]:
                yield a, b


def is_sign_symmetric(M: QMatrix) -> MinorCertificate:
    """``M[α|β] · M[β|α] >= 0`` for all equal-size index sets."""
    n = _square(M)
    count = 0
    for a, b in symmetric_pairs(n):
        p, q = minor(M, a, b), minor(M, b, a)
        count += 1
        if p * q < 0:
            return MinorCertificate("sign_symmetric", CERT_FALSE, {}, {"alpha": a, "beta": b, "minor_ab": p, "minor_ba": q})
    return MinorCertificate("sign_symmetric", CERT_TRUE, {"pairs_checked": count})


def find_P_submatrix(M: QMatrix, r: int) -> tuple[int, ...] | None:
    """First principal ``r``-subset (lexicographic) on which ``M`` is a P-matrix."""
    for a in combinations(range(M.rows), r):
        if is_P_matrix(M.submatrix(a, a)).ok:
            return a
    return None


def carlson_check(M: QMatrix, r: int) -> MinorCertificate:
    """Sufficient condition for D-stability of ``A = -M`` on ``im A``.

    ``M`` sign-symmetric, some principal ``r x r`` submatrix of ``M`` a
    P-matrix, and every principal minor of order ``r`` nonnegative.
    """
    n = _square(M)
    rk = rank(M)
    if rk != r:
        raise ValueError(f"r = {r} differs from the rank {rk}")
    parts: dict = {}
    ss = is_sign_symmetric(M)
    parts["sign_symmetric"] = ss.ok
    if not ss.ok:
        return MinorCertificate("carlson", CERT_FALSE, {"r": r, "parts": parts}, {"part": "sign_symmetric", **ss.counterexample})
    for a in combinations(range(n), r):
        v = minor(M, a, a)
        if v < 0:
            parts["order_r_nonnegative"] = False
            return MinorCertificate("carlson", CERT_FALSE, {"r": r, "parts": parts}, {"part": "order_r_nonnegative", "rows": a, "minor": v})
    parts["order_r_nonnegative"] = True
    w = find_P_submatrix(M, r)
    parts["P_submatrix"] = w is not None
    if w is None:
        # the P-submatrix search failing does not refute stability
        return MinorCertificate("carlson", CERT_INCONCLUSIVE, {"r": r, "parts": parts})
    return MinorCertificate("carlson", CERT_TRUE, {"r": r, "parts": parts, "witness": w})


# ---------------------------------------------------------------------------
# parametric matrices


def certify_nonneg(p: Poly) -> bool:
    """Sufficient: nonnegative coefficients imply ``p >= 0`` on the open positive orthant."""
    return p.coefficients_nonnegative()


def certify_positive(p: Poly) -> bool:
    return not p.is_zero() and p.coefficients_nonnegative()


def certify_product_nonneg(p: Poly, q: Poly) -> str | None:
    """A reason why ``p * q >= 0`` for every positive point, or None."""
    if p.is_zero() or q.is_zero():
        return "a factor vanishes identically"
    if (p.coefficients_nonnegative() and q.coefficients_nonnegative()) or (
        p.coefficients_nonpositive() and q.coefficients_nonpositive()
    ):
        return "both factors have coefficients of one common sign"
    cp, pp = p.content()
    cq, qq = q.content()
    # same primitive part up to a sign: the product is ±c * pp^2
    if pp == qq:
        return "the factors are positive multiples of each other"
    if pp == -qq:
        return None
    if (p * q).coefficients_nonnegative():
        return "the expanded product has nonnegative coefficients"
    return None


def sample_points(nvars: int, seed: int = DEFAULT_SEED, n_random: int = RANDOM_POINTS) -> list[tuple[Fraction, ...]]:
    """Grid ``{1/8, 1/2, 1, 2, 8}^nvars`` followed by seeded random positive rationals."""
    pts = list(product(GRID, repeat=nvars))
    rng = random.Random(seed)
    for _ in range(n_random):
        pts.append(tuple(Fraction(rng.randint(1, 64), rng.randint(1, 64)) for _ in range(nvars)))
    return pts


def _point_dict(M: ParametricMatrix, pt) -> dict:
    return dict(zip(M.symbols, pt))


def _principal_polys(M: ParametricMatrix, orders=None) -> dict[tuple[int, ...], Poly]:
    return {a: M.minor(a, a) for a in _subsets(M.n, orders)}


def _search(M: ParametricMatrix, violated, seed: int):
    """First sample point where ``violated(point)`` returns a counterexample dict."""
    for pt in sample_points(M.nvars, seed):
        cx = violated(pt)
        if cx is not None:
            return {"lambda": _point_dict(M, pt), **cx}
    return None


def parametric_P0_plus(M: ParametricMatrix, r: int, seed: int = DEFAULT_SEED) -> MinorCertificate:
    n = M.n
    if not 1 <= r <= n:
        raise ValueError("order r must satisfy 1 <= r <= n")
    polys = _principal_polys(M)
    unproven = [a for a, p in polys.items() if not certify_nonneg(p)]
    order_ok = {}
    for k in range(1, r + 1):
        total = sum((polys[a] for a in polys if len(a) == k), Poly(M.nvars))
        order_ok[k] = certify_positive(total) and all(certify_nonneg(polys[a]) for a in polys if len(a) == k)

    def violated(pt):
        vals = {a: p.evaluate(pt) for a, p in polys.items()}
        for a, v in vals.items():
            if v < 0:
                return {"rows": a, "minor": v}
        for k in range(1, r + 1):
            if not any(v > 0 for a, v in vals.items() if len(a) == k):
                return {"order_without_positive_minor": k}
        return None

    ev = {"r": r, "minors": len(polys), "uncertified_minors": [list(a) for a in unproven]}
    if not unproven and all(order_ok.values()):
        ev["method"] = "coefficient signs; order-k positivity via the sum of order-k minors"
        return MinorCertificate("P0plus", CERT_TRUE, ev)
    cx = _search(M, violated, seed)
    if cx is not None:
        return MinorCertificate("P0plus", CERT_FALSE, ev, cx)
    return MinorCertificate("P0plus", CERT_INCONCLUSIVE, ev)


def parametric_P(M: ParametricMatrix, seed: int = DEFAULT_SEED) -> MinorCertificate:
    polys = _principal_polys(M)
    unproven = [a for a, p in polys.items() if not certify_positive(p)]
    ev = {"minors": len(polys), "uncertified_minors": [list(a) for a in unproven]}
    if not unproven:
        return MinorCertificate("P", CERT_TRUE, ev)

    def violated(pt):
        for a in unproven:
            v = polys[a].evaluate(pt)
            if v <= 0:
                return {"rows": a, "minor": v}
        return None

    cx = _search(M, violated, seed)
    if cx is not None:
        return MinorCertificate("P", CERT_FALSE, ev, cx)
    return MinorCertificate("P", CERT_INCONCLUSIVE, ev)


def parametric_sign_symmetric(M: ParametricMatrix, seed: int = DEFAULT_SEED) -> MinorCertificate:
    reasons: dict[str, int] = {}
    unproven = []
    for a, b in symmetric_pairs(M.n):
        why = certify_product_nonneg(M.minor(a, b), M.minor(b, a))
        if why is None:
            unproven.append((a, b))
        else:
            reasons[why] = reasons.get(why, 0) + 1
    ev = {"pairs_certified_by": reasons, "uncertified_pairs": [[list(a), list(b)] for a, b in unproven]}
    if not unproven:
        return MinorCertificate("sign_symmetric", CERT_TRUE, ev)

    def violated(pt):
        for a, b in unproven:
            p, q = M.minor(a, b).evaluate(pt), M.minor(b, a).evaluate(pt)
            if p * q < 0:
                return {"alpha": a, "beta": b, "minor_ab": p, "minor_ba": q}
        return None

    cx = _search(M, violated, seed)
    if cx is not None:
        return MinorCertificate("sign_symmetric", CERT_FALSE, ev, cx)
    return MinorCertificate("sign_symmetric", CERT_INCONCLUSIVE, ev)


def _submatrix(M: ParametricMatrix, a: Sequence[int]) -> ParametricMatrix:
    return ParametricMatrix(M.symbols, [[M[i, j] for j in a] for i in a])


def parametric_carlson(M: ParametricMatrix, r: int, seed: int = DEFAULT_SEED) -> MinorCertificate:
    """Carlson conditions for ``-M`` holding for every positive parameter point."""
    parts: dict = {}
    drops = []
    for pt in sample_points(M.nvars, seed, n_random=20):
        if rank(M.evaluate(pt)) != r:
            drops.append(_point_dict(M, pt))
            break
    parts["rank_equals_r_at_samples"] = not drops
    if drops:
        return MinorCertificate("carlson", CERT_INCONCLUSIVE, {"r": r, "parts": parts}, {"rank_drop_at": drops[0]})
    ss = parametric_sign_symmetric(M, seed)
    parts["sign_symmetric"] = ss.status
    order_r = {a: M.minor(a, a) for a in combinations(range(M.n), r)}
    unproven = [a for a, p in order_r.items() if not certify_nonneg(p)]
    neg = None
    if unproven:
        for pt in sample_points(M.nvars, seed):
            for a in unproven:
                v = order_r[a].evaluate(pt)
                if v < 0:
                    neg = {"lambda": _point_dict(M, pt), "rows": a, "minor": v}
                    break
            if neg:
                break
    parts["order_r_nonnegative"] = CERT_TRUE if not unproven else (CERT_FALSE if neg else CERT_INCONCLUSIVE)
    witness = None
    for a in combinations(range(M.n), r):
        if parametric_P(_submatrix(M, a), seed).ok:
            witness = a
            break
    parts["P_submatrix"] = CERT_TRUE if witness is not None else CERT_INCONCLUSIVE
    ev = {"r": r, "parts": parts, "witness": witness}
    if ss.status == CERT_FALSE:
        return MinorCertificate("carlson", CERT_FALSE, ev, {"part": "sign_symmetric", **ss.counterexample})
    if neg:
        return MinorCertificate("carlson", CERT_FALSE, ev, {"part": "order_r_nonnegative", **neg})
    if all(v == CERT_TRUE for k, v in parts.items() if k != "rank_equals_r_at_samples"):
        return MinorCertificate("carlson", CERT_TRUE, ev)
    return MinorCertificate("carlson", CERT_INCONCLUSIVE, ev)


def parametric_certificate(M: ParametricMatrix, kind: str, r: int | None = None, seed: int = DEFAULT_SEED) -> MinorCertificate:
    if kind == "P":
        return parametric_P(M, seed)
    if kind == "P0":
        polys = _principal_polys(M)
        unproven = [a for a, p in polys.items() if not certify_nonneg(p)]
        if not unproven:
            return MinorCertificate("P0", CERT_TRUE, {"minors": len(polys)})

        def violated(pt):
            for a in unproven:
                v = polys[a].evaluate(pt)
                if v < 0:
                    return {"rows": a, "minor": v}
            return None

        cx = _search(M, violated, seed)
        return MinorCertificate("P0", CERT_FALSE if cx else CERT_INCONCLUSIVE, {"minors": len(polys)}, cx)
    if kind == "P0plus":
        return parametric_P0_plus(M, r, seed)
    if kind == "sign_symmetric":
        return parametric_sign_symmetric(M, seed)
    if kind == "carlson":
        return parametric_carlson(M, r, seed)
    raise ValueError(f"unknown certificate kind {kind!r}")


def necessary_condition_report(M: ParametricMatrix, r: int, seed: int = DEFAULT_SEED) -> ConditionReport:
    """``-M`` must be P0+ of order ``r`` if ``M`` is D-stable on its image (used contrapositively)."""
    anchor = "D-stable on im A implies -A is P0+ of order rank A"
    drops = []
    for pt in sample_points(M.nvars, seed, n_random=20):
        if rank(M.evaluate(pt)) != r:
            drops.append(_point_dict(M, pt))
    cert = parametric_P0_plus(-M, r, seed)
    ev = {"certificate": {"kind": cert.kind, "status": cert.status, **cert.evidence}, "rank_drops": drops[:5]}
    if cert.status == CERT_FALSE:
        ev["verdict"] = "not D-stable on S"
        return ConditionReport("p0plus", FAILS, anchor, ev, cert.counterexample)
    if cert.status == CERT_TRUE:
        ev["verdict"] = "necessary condition passes"
        return ConditionReport("p0plus", HOLDS, anchor, ev)
    return ConditionReport("p0plus", INCONCLUSIVE, anchor, ev)


def cycle_stability_report(M: ParametricMatrix, r: int, seed: int = DEFAULT_SEED) -> ConditionReport:
    """Single-cycle networks: bracket D-stability of ``𝒥(1)`` on S between necessary and sufficient tests."""
    anchor = "single cycle: D-stability of Y A_C Ỹᵀ on S"
    if M.nvars != 1:
        return ConditionReport("cycle-stability", NOT_APPLICABLE, anchor, {"reason": f"requires exactly one cycle (found {M.nvars})"})
    A = M.evaluate((Fraction(1),))
    ev: dict = {"r": r, "rank": rank(A)}
    if r == 0:
        return ConditionReport("cycle-stability", NOT_APPLICABLE, anchor, {"reason": "S = {0}"})
    if rank(A) != r:
        ev["note"] = "rank of the cycle Jacobian differs from dim S"
        return ConditionReport("cycle-stability", INCONCLUSIVE, anchor, ev)
    nec = is_P0_plus(-A, r)
    ev["necessary_P0plus"] = nec.status
    if not nec.ok:
        ev["verdict"] = "not D-stable on S"
        return ConditionReport("cycle-stability", FAILS, anchor, ev, nec.counterexample)
    suf = carlson_check(-A, r)
    ev["sufficient_carlson"] = suf.status
    if suf.ok:
        ev["verdict"] = "D-stable on S"
        ev["witness"] = suf.evidence.get("witness")
        return ConditionReport("cycle-stability", HOLDS, anchor, ev)
    ev["verdict"] = "necessary condition passes; sufficient condition not met"
    return ConditionReport("cycle-stability", INCONCLUSIVE, anchor, ev)
