"""Sign-vector conditions on a network structure.

Every check here is an exact decision; none returns ``inconclusive``.
"""

from __future__ import annotations

from .linalg import QMatrix, orthogonal_basis, orthogonal_complement, same_span
from .network import NetworkStructure
from .report import FAILS, HOLDS, NOT_APPLICABLE, ConditionReport, sign_str
from .signs import (
    DEFAULT_SUBSPACE_CAP,
    LOWER,
    TOTAL,
    EnumerationTooLarge,
    Region,
    closure_violations,
    covectors,
    open_orthants,
    realizable_in_subspace,
    realize_in_image,
    sign_set_of_image_on_region,
    sign_set_of_subspace,
    sort_key,
)

DEFAULT_MAX_OMEGA = 10
DEFAULT_MAX_ORTHANT_DIM = 8


def _cap_omega(ns: NetworkStructure, max_omega: int):
    if len(ns.omega) > max_omega:
        raise EnumerationTooLarge(f"enumeration too large: |Omega| = {len(ns.omega)} exceeds cap {max_omega}")


def _not_applicable(name: str, anchor: str, reason: str) -> ConditionReport:
    return ConditionReport(name, NOT_APPLICABLE, anchor, {"reason": reason})


def stoichiometric_sign_sets(ns: NetworkStructure, cap: int = DEFAULT_SUBSPACE_CAP):
    S = sign_set_of_subspace(ns.S_basis, cap)
    St_perp = sign_set_of_subspace(orthogonal_complement(ns.Stilde_basis), cap)
    return S, St_perp


def check_uniqueness(ns: NetworkStructure, cap: int = DEFAULT_SUBSPACE_CAP) -> ConditionReport:
    anchor = "sign(S) ∩ sign(S̃⊥) = {0}"
    S, Sp = stoichiometric_sign_sets(ns, cap)
    common = sorted((s for s in S.members & Sp.members if any(s)), key=sort_key)
    ev = {
        "criterion": "the intersection must equal {0}",
        "dim_S": ns.dim_S,
        "dim_S_tilde_perp": ns.n - ns.dim_Stilde,
        "sign_S_count": len(S),
        "sign_S_tilde_perp_count": len(Sp),
    }
    if not common:
        return ConditionReport("uniqueness", HOLDS, anchor, ev)
    sigma = common[0]
    _, x = realizable_in_subspace(sigma, ns.S_basis)
    _, y = realizable_in_subspace(sigma, orthogonal_complement(ns.Stilde_basis))
    ev["common_nonzero"] = [sign_str(s) for s in common]
    return ConditionReport(
        "uniqueness", FAILS, anchor, ev, {"sign_vector": sign_str(sigma), "x_in_S": x, "y_in_S_tilde_perp": y}
    )


def check_existence(ns: NetworkStructure) -> ConditionReport:
    anchor = "δ̃ = 0 and weakly reversible"
    ev = {"delta_tilde": ns.delta_tilde, "weakly_reversible": ns.weakly_reversible}
    ok = ns.delta_tilde == 0 and ns.weakly_reversible
    cx = None
    if not ok:
        cx = {"failed_parts": [p for p, bad in (("delta_tilde", ns.delta_tilde != 0), ("weak_reversibility", not ns.weakly_reversible)) if bad]}
    return ConditionReport("existence", HOLDS if ok else FAILS, anchor, ev, cx)


def check_robust(ns: NetworkStructure, cap: int = DEFAULT_SUBSPACE_CAP) -> ConditionReport:
    anchor = "weakly reversible, δ = δ̃ = 0, sign(S) ⊆ sign(S̃)↓"
    S = sign_set_of_subspace(ns.S_basis, cap)
    St = sign_set_of_subspace(ns.Stilde_basis, cap)
    bad = closure_violations(S.members, St, LOWER)
    parts = {
        "weakly_reversible": ns.weakly_reversible,
        "delta_zero": ns.delta == 0,
        "delta_tilde_zero": ns.delta_tilde == 0,
        "sign_inclusion": not bad,
    }
    ev = {"parts": parts, "delta": ns.delta, "delta_tilde": ns.delta_tilde}
    if all(parts.values()):
        return ConditionReport("robust", HOLDS, anchor, ev)
    cx: dict = {"failed_parts": [k for k, v in parts.items() if not v]}
    if bad:
        _, x = realizable_in_subspace(bad[0], ns.S_basis)
        cx["uncovered_sign_vector"] = sign_str(bad[0])
        cx["x_in_S"] = x
    return ConditionReport("robust", FAILS, anchor, ev, cx)


def check_existsunique(ns: NetworkStructure, cap: int = DEFAULT_SUBSPACE_CAP) -> ConditionReport:
    """Only the necessary parts: δ = δ̃ = 0, weak reversibility, trivial sign intersection."""
    anchor = "necessary parts: δ = δ̃ = 0, weakly reversible, sign(S) ∩ sign(S̃⊥) = {0}"
    uniq = check_uniqueness(ns, cap)
    parts = {
        "delta_zero": ns.delta == 0,
        "delta_tilde_zero": ns.delta_tilde == 0,
        "weakly_reversible": ns.weakly_reversible,
        "sign_intersection_trivial": uniq.holds,
    }
    ev = {"scope": "necessary parts only; the remaining sufficient conditions are not checked", "parts": parts}
    if all(parts.values()):
        return ConditionReport("existsunique", HOLDS, anchor, ev)
    return ConditionReport("existsunique", FAILS, anchor, ev, {"failed_parts": [k for k, v in parts.items() if not v]})


def check_noother(
    ns: NetworkStructure,
    variant: str = "global",
    max_omega: int = DEFAULT_MAX_OMEGA,
    cap: int = DEFAULT_SUBSPACE_CAP,
) -> ConditionReport:
    """No steady states besides complex-balanced ones (sign-vector sufficient condition)."""
    _cap_omega(ns, max_omega)
    T = sign_set_of_image_on_region(ns.M, Region.full(ns.n))
    if variant == "global":
        anchor = "sign(T̃) ⊆ sign(T)↕"
        lhs = sign_set_of_image_on_region(ns.Mtilde, Region.full(ns.n))
    elif variant == "per-class":
        anchor = "sign((Ỹ I_Ω)ᵀ(Σ(S))) ⊆ sign(T)↕"
        if ns.n > cap:
            raise EnumerationTooLarge(f"enumeration too large: n = {ns.n} exceeds cap {cap}")
        lhs = sign_set_of_image_on_region(ns.Mtilde, Region.sigma(ns.S_basis))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    bad = closure_violations(lhs.members, T, TOTAL)
    ev = {"variant": variant, "omega_size": len(ns.omega), "lhs_count": len(lhs), "T_count": len(T)}
    name = "noother" if variant == "global" else "noother-per-class"
    if not bad:
        return ConditionReport(name, HOLDS, anchor, ev)
    tau = bad[0]
    stacked = QMatrix.identity(ns.n).vstack(ns.Mtilde.T)
    z = None
    if variant == "global":
        z = realize_in_image(tau, ns.Mtilde.T)
    else:
        S = covectors(ns.S_basis)
        for rho in sorted(S, key=sort_key):
            z = realize_in_image(rho + tau, stacked)
            if z is not None:
                break
    return ConditionReport(name, FAILS, anchor, ev, {"uncovered": sign_str(tau), "z": z, "violations": len(bad)})


def _scan_patterns(patterns, lhs_of, rhs_of):
    """Check ``lhs ⊆ rhs↕`` per sign pattern; returns per-pattern rows and the first failure."""
    rows, failure = [], None
    for o in patterns:
        lhs, rhs = lhs_of(o), rhs_of(o)
        bad = closure_violations(lhs.members, rhs, TOTAL)
        rows.append({"pattern": sign_str(o), "lhs_count": len(lhs), "rhs_count": len(rhs), "uncovered": len(bad)})
        if bad and failure is None:
            failure = (o, bad[0], rhs)
    return rows, failure


def _open_only_verdict(rows) -> str:
    full = [r for r in rows if "0" not in r["pattern"]]
    return HOLDS if all(r["uncovered"] == 0 for r in full) else FAILS


def check_prop_pmatrix(
    ns: NetworkStructure,
    max_dim: int = DEFAULT_MAX_ORTHANT_DIM,
    max_omega: int = DEFAULT_MAX_OMEGA,
    faces: bool = True,
) -> ConditionReport:
    """Full-rank case: sign(M̃ᵀ(O)) ⊆ sign(Mᵀ(Ō))↕ orthant by orthant.

    With ``faces`` (default) the relatively open faces of the orthants
    are checked as well, so every nonzero direction is covered; the
    verdict restricted to full-dimensional orthants is kept in the
    evidence as ``open_orthants_only``.
    """
    anchor = "S = S̃ = Rⁿ and sign((Ỹ I_Ω)ᵀ(O)) ⊆ sign((Y I_Ω)ᵀ(Ō))↕ for every orthant face O"
    if ns.dim_S != ns.n or ns.dim_Stilde != ns.n:
        return _not_applicable("prop-pmatrix", anchor, f"requires S = S̃ = R^n (dim S = {ns.dim_S}, dim S̃ = {ns.dim_Stilde}, n = {ns.n})")
    if ns.n > max_dim:
        raise EnumerationTooLarge(f"enumeration too large: n = {ns.n} exceeds orthant cap {max_dim}")
    _cap_omega(ns, max_omega)
    rows, failure = _scan_patterns(
        open_orthants(ns.n, half=True, faces=faces),
        lambda o: sign_set_of_image_on_region(ns.Mtilde, Region.orthant_of(o)),
        lambda o: sign_set_of_image_on_region(ns.M, Region.orthant_of(o, closed=True)),
    )
    ev = {
        "patterns": "all nonzero sign patterns" if faces else "open orthants",
        "patterns_checked": len(rows),
        "symmetry": "patterns ±O are equivalent; one of each pair is checked",
        "open_orthants_only": _open_only_verdict(rows),
        "per_pattern": rows,
    }
    if failure is None:
        return ConditionReport("prop-pmatrix", HOLDS, anchor, ev)
    o, tau, rhs = failure
    z = realize_in_image(o + tau, QMatrix.identity(ns.n).vstack(ns.Mtilde.T))
    return ConditionReport(
        "prop-pmatrix",
        FAILS,
        anchor,
        ev,
        {"pattern": sign_str(o), "uncovered": sign_str(tau), "z": z, "closed_image": sorted(sign_str(t) for t in rhs.members)},
    )


def prop_s_basis(ns: NetworkStructure) -> QMatrix:
    """Orthogonal basis of S: Gram-Schmidt on the pivot columns of Y I_E, unnormalised."""
    return orthogonal_basis(ns.S_basis)


def check_prop_S(
    ns: NetworkStructure,
    basis: QMatrix | None = None,
    max_dim: int = DEFAULT_MAX_ORTHANT_DIM,
    max_omega: int = DEFAULT_MAX_OMEGA,
    cap: int = DEFAULT_SUBSPACE_CAP,
    faces: bool = True,
) -> ConditionReport:
    """General case through an orthogonal basis ``B`` of S, one orthant of R^s at a time."""
    anchor = "sign(S) ∩ sign(S̃⊥) = {0} and sign((Ỹ I_Ω)ᵀ(Σ(B(O)))) ⊆ sign((Y I_Ω)ᵀ(B(Ō)))↕ for every orthant face O of R^s"
    B = prop_s_basis(ns) if basis is None else basis
    if B.rows != ns.n or not same_span(B, ns.S_basis):
        raise ValueError("basis must span the stoichiometric subspace")
    G = B.T @ B
    if any(G[i, j] != 0 for i in range(G.rows) for j in range(G.cols) if i != j):
        raise ValueError("basis columns must be pairwise orthogonal")
    s = B.cols
    if s > max_dim:
        raise EnumerationTooLarge(f"enumeration too large: dim S = {s} exceeds orthant cap {max_dim}")
    _cap_omega(ns, max_omega)
    uniq = check_uniqueness(ns, cap)
    ev: dict = {"dim_S": s, "basis": [list(c) for c in B.columns()], "sign_intersection_trivial": uniq.holds}
    if not uniq.holds:
        return ConditionReport("prop-S", FAILS, anchor, ev, {"part": "sign intersection", **(uniq.counterexample or {})})
    rows, failure = _scan_patterns(
        open_orthants(s, half=True, faces=faces) if s else [],
        lambda o: sign_set_of_image_on_region(ns.Mtilde, Region.sigma(B, o)),
        lambda o: sign_set_of_image_on_region(ns.M, Region.orthant_of(o, closed=True, basis=B)),
    )
    ev.update(
        {
            "patterns": "all nonzero sign patterns" if faces else "open orthants",
            "patterns_checked": len(rows),
            "symmetry": "patterns ±O are equivalent; one of each pair is checked",
            "open_orthants_only": _open_only_verdict(rows),
            "per_pattern": rows,
        }
    )
    if failure is None:
        return ConditionReport("prop-S", HOLDS, anchor, ev)
    o, tau, _ = failure
    # exact witness: w with sign(w) = o and sign(Bw) = rho, then z with sign(z) = rho and sign(M̃ᵀ z) = tau
    stacked = QMatrix.identity(ns.n).vstack(ns.Mtilde.T)
    stackedB = QMatrix.identity(s).vstack(B)
    witness = None
    for rho in sorted(covectors(B), key=sort_key):
        w = realize_in_image(o + rho, stackedB)
        if w is None:
            continue
        z = realize_in_image(rho + tau, stacked)
        if z is not None:
            witness = {"w": w, "rho": sign_str(rho), "z": z}
            break
    return ConditionReport("prop-S", FAILS, anchor, ev, {"pattern": sign_str(o), "uncovered": sign_str(tau), **(witness or {})})


__all__ = [
    "check_uniqueness",
    "check_existence",
    "check_robust",
    "check_existsunique",
    "check_noother",
    "check_prop_pmatrix",
    "check_prop_S",
    "prop_s_basis",
]
