"""Command-line front end: ``gmak analyze | check | cbe``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

from . import conditions as cond
from .laplacian import (
    DEFAULT_MAX_CYCLES,
    CycleCapExceeded,
    NotWeaklyReversible,
    enumerate_cycles,
    parametric_reduced_jacobian,
    rates_from,
    tree_constants,
)
from .network import GeneralizedNetwork, NetworkStructure, ParseError, analyze_structure, is_weakly_reversible, parse_network
from .numeric import DEFAULT_TOL_STABLE, NoCBE, cbe_residual_norm, compute_cbe, jacobian_at, orthonormal_basis, sample_stability, spectrum_on_S
from .report import FAILS, HOLDS, INCONCLUSIVE, NOT_APPLICABLE, SCHEMA_ID, ConditionReport, jsonable
from .signs import EnumerationTooLarge
from .stability import CERT_TRUE, carlson_check, cycle_stability_report, necessary_condition_report, parametric_carlson

EXIT = {HOLDS: 0, FAILS: 1, INCONCLUSIVE: 2, NOT_APPLICABLE: 2}
EXIT_ERROR = 3

CONDITIONS = (
    "existence",
    "uniqueness",
    "robust",
    "existsunique",
    "noother",
    "noother-per-class",
    "prop-pmatrix",
    "prop-s",
    "p0plus",
    "carlson",
    "cycle-stability",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# loading


def read_network_text(path: str) -> str:
    p = Path(path)
    if p.is_file():
        return p.read_text("utf-8")
    if path.startswith("fixtures/"):
        res = resources.files("gmak").joinpath(path)
        if res.is_file():
            return res.read_text("utf-8")
    raise FileNotFoundError(f"no such network file: {path}")


def _assignments(items: list[str] | None, what: str) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for item in items or []:
        for part in filter(None, (s.strip() for s in item.split(","))):
            if "=" not in part:
                raise UsageError(f"{what} must look like name=value, got {part!r}")
            k, v = (s.strip() for s in part.split("=", 1))
            try:
                out[k] = Fraction(v)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"bad value in {what} {part!r}") from None
    return out


def load(args) -> GeneralizedNetwork:
    return parse_network(read_network_text(args.file), _assignments(args.param, "--param") or None)


def _lambda_point(text: str | None, nvars: int) -> tuple[Fraction, ...]:
    if text is None:
        return (Fraction(1),) * nvars
    vals = tuple(Fraction(v.strip()) for v in text.split(","))
    if len(vals) != nvars or any(v <= 0 for v in vals):
        raise UsageError(f"--lambda needs {nvars} positive values")
    return vals


# ---------------------------------------------------------------------------
# checks


def _jacobian_or_na(net, ns, name, anchor, args):
    if not is_weakly_reversible(net):
        return None, ConditionReport(name, NOT_APPLICABLE, anchor, {"reason": "network is not weakly reversible"})
    if ns.dim_S == 0:
        return None, ConditionReport(name, NOT_APPLICABLE, anchor, {"reason": "S = {0}"})
    return parametric_reduced_jacobian(net, args.max_cycles), None


def run_carlson(net, ns, args) -> ConditionReport:
    anchor = "-𝒥 sign-symmetric, principal P-submatrix of order r, order-r principal minors >= 0 (D-stable on S)"
    J, na = _jacobian_or_na(net, ns, "carlson", anchor, args)
    if na:
        return na
    r = ns.dim_S
    point = _lambda_point(getattr(args, "lam", None), J.nvars)
    A = J.evaluate(point)
    ev: dict = {"r": r, "lambda": dict(zip(J.symbols, point))}
    try:
        cert = carlson_check(-A, r)
    except ValueError as exc:
        return ConditionReport("carlson", NOT_APPLICABLE, anchor, {**ev, "reason": str(exc)})
    ev.update(certificate=cert.status, parts=cert.evidence.get("parts"))
    if cert.evidence.get("witness") is not None:
        w = cert.evidence["witness"]
        ev["witness"] = list(w)
        ev["witness_species"] = [net.species[i] for i in w]
    every = parametric_carlson(-J, r, args.seed)
    ev["all_lambda"] = {"certificate": every.status, "parts": every.evidence.get("parts")}
    if every.counterexample:
        ev["all_lambda"]["counterexample"] = every.counterexample
    return ConditionReport("carlson", cert.as_status(), anchor, ev, cert.counterexample)


def run_p0plus(net, ns, args) -> ConditionReport:
    J, na = _jacobian_or_na(net, ns, "p0plus", "D-stable on im A implies -A is P0+ of order rank A", args)
    return na or necessary_condition_report(J, ns.dim_S, args.seed)


def run_cycle_stability(net, ns, args) -> ConditionReport:
    J, na = _jacobian_or_na(net, ns, "cycle-stability", "single cycle: D-stability of Y A_C Ỹᵀ on S", args)
    return na or cycle_stability_report(J, ns.dim_S, args.seed)


def _checker(name: str) -> Callable[[GeneralizedNetwork, NetworkStructure, argparse.Namespace], ConditionReport]:
    table = {
        "existence": lambda net, ns, a: cond.check_existence(ns),
        "uniqueness": lambda net, ns, a: cond.check_uniqueness(ns),
        "robust": lambda net, ns, a: cond.check_robust(ns),
        "existsunique": lambda net, ns, a: cond.check_existsunique(ns),
        "noother": lambda net, ns, a: cond.check_noother(ns, "global", a.max_omega),
        "noother-per-class": lambda net, ns, a: cond.check_noother(ns, "per-class", a.max_omega),
        "prop-pmatrix": lambda net, ns, a: cond.check_prop_pmatrix(ns, max_omega=a.max_omega),
        "prop-s": lambda net, ns, a: cond.check_prop_S(ns, max_omega=a.max_omega),
        "p0plus": run_p0plus,
        "carlson": run_carlson,
        "cycle-stability": run_cycle_stability,
    }
    return table[name]


def run_check(name: str, net, ns, args) -> ConditionReport:
    t0 = time.perf_counter()
    try:
        rep = _checker(name)(net, ns, args)
    except (EnumerationTooLarge, CycleCapExceeded, NotWeaklyReversible) as exc:
        rep = ConditionReport(name, NOT_APPLICABLE, "enumeration cap", {"reason": str(exc)})
    if args.timing:
        rep.ms = round((time.perf_counter() - t0) * 1000, 3)
    return rep


def conclusions(reports: dict[str, ConditionReport]) -> list[str]:
    st = {k: r.status for k, r in reports.items()}
    out = []
    if st.get("existence") == HOLDS and st.get("uniqueness") == HOLDS:
        out.append("unique positive CBE in every stoichiometric class, for all rate constants")
    where = "" if st.get("existence") == HOLDS else " wherever a positive CBE exists"
    if st.get("prop-pmatrix") == HOLDS:
        out.append(f"diagonally stable for all rate constants{where}")
    elif st.get("prop-s") == HOLDS:
        out.append(f"positive CBEs linearly stable on their stoichiometric classes for all rate constants{where}")
    if st.get("carlson") == HOLDS:
        lam = reports["carlson"].evidence.get("all_lambda", {}).get("certificate")
        scope = "for all cycle parameters" if lam == CERT_TRUE else "at the evaluated cycle parameters"
        out.append(f"reduced Jacobian D-stable on S {scope}")
    if st.get("p0plus") == FAILS:
        out.append("reduced Jacobian not D-stable on S for some cycle parameters")
    if st.get("cycle-stability") == HOLDS:
        out.append("single-cycle Jacobian D-stable on S")
    return out


def network_summary(net, ns) -> dict:
    return {
        "m": ns.m,
        "l": ns.l,
        "n": ns.n,
        "delta": ns.delta,
        "delta_tilde": ns.delta_tilde,
        "weakly_reversible": ns.weakly_reversible,
        "species": list(net.species),
        "dim_S": ns.dim_S,
        "dim_S_tilde": ns.dim_Stilde,
    }


def _fmt_row(rep: ConditionReport) -> str:
    tail = f"  ({rep.ms} ms)" if rep.ms is not None else ""
    extra = ""
    if rep.status == NOT_APPLICABLE and "reason" in rep.evidence:
        extra = f"  [{rep.evidence['reason']}]"
    elif rep.counterexample:
        extra = "  counterexample: " + json.dumps(jsonable(rep.counterexample), ensure_ascii=False, sort_keys=True)
    return f"  {rep.name:<18} {rep.status:<15} {rep.anchor}{extra}{tail}"


def _summary_line(s: dict) -> str:
    return (
        f"network: m={s['m']} l={s['l']} n={s['n']} delta={s['delta']} delta_tilde={s['delta_tilde']} "
        f"weakly_reversible={'yes' if s['weakly_reversible'] else 'no'} dim_S={s['dim_S']}"
    )


def _emit(obj, as_json: bool, text: str):
    if as_json:
        print(json.dumps(jsonable(obj), ensure_ascii=False, sort_keys=True, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    net = load(args)
    ns = analyze_structure(net)
    names = [c for c in CONDITIONS if c not in ("noother-per-class",)]
    reports = {name: run_check(name, net, ns, args) for name in names}
    samples = None
    if args.samples:
        if ns.weakly_reversible:
            samples = sample_stability(net, args.samples, args.seed, args.tol_stable)
        else:
            samples = {"trials": args.samples, "seed": args.seed, "stable": 0, "unstable": 0, "invalid": args.samples, "note": "not weakly reversible"}
    doc = {
        "schema": SCHEMA_ID,
        "network": network_summary(net, ns),
        "checks": [r.to_json() for r in reports.values()],
        "conclusions": conclusions(reports),
        "samples": samples,
    }
    lines = [_summary_line(doc["network"]), "checks:"] + [_fmt_row(r) for r in reports.values()]
    for c in doc["conclusions"]:
        lines.append(f"conclusion: {c}")
    if samples:
        lines.append("samples: " + ", ".join(f"{k}={v}" for k, v in samples.items()))
    _emit(doc, args.json, "\n".join(lines))
    return 0


def cmd_check(args) -> int:
    if args.condition not in CONDITIONS:
        raise UsageError(f"unknown condition {args.condition!r}; choose from {', '.join(CONDITIONS)}")
    net = load(args)
    ns = analyze_structure(net)
    rep = run_check(args.condition, net, ns, args)
    _emit(rep.to_json(), args.json, _fmt_row(rep).strip())
    return EXIT[rep.status]


def cmd_cbe(args) -> int:
    net = load(args)
    rates_map = _assignments(args.rate, "--rate")
    if not rates_map:
        raise UsageError("cbe needs rate constants (--rate name=value, repeatable or comma separated)")
    try:
        k = rates_from(net, rates_map)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0] if exc.args else exc)) from None
    ns = analyze_structure(net)
    K = tree_constants(net, k)
    kf = [float(v) for v in k]
    x = compute_cbe(net, kf)
    resid = cbe_residual_norm(net, kf, x)
    ev, stable = spectrum_on_S(jacobian_at(net, kf, x), orthonormal_basis(ns), args.tol_stable)
    doc = {
        "species": list(net.species),
        "x_star": x.tolist(),
        "residual_norm": resid,
        "spectrum_on_S": [[z.real, z.imag] for z in ev],
        "linearly_stable": stable,
        "tree_constants": {v.name: K[i] for i, v in enumerate(net.vertices)},
        "cycles": [c.name for c in enumerate_cycles(net, args.max_cycles)],
    }
    lines = [
        "x* = " + ", ".join(f"{s}={v:.12g}" for s, v in zip(net.species, x)),
        f"residual = {resid:.3e}",
        "spectrum on S = " + ", ".join(f"{z.real:.6g}{z.imag:+.6g}i" for z in ev),
        f"linearly stable = {'yes' if stable else 'no'}",
        "tree constants = " + ", ".join(f"{v.name}={K[i]}" for i, v in enumerate(net.vertices)),
    ]
    _emit(doc, args.json, "\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--param", action="append", metavar="NAME=VALUE", help="override a network parameter")
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--max-omega", type=int, default=cond.DEFAULT_MAX_OMEGA)
    common.add_argument("--max-cycles", type=int, default=DEFAULT_MAX_CYCLES)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-stable", type=float, default=DEFAULT_TOL_STABLE)
    common.add_argument("--timing", action="store_true", help="record wall-clock ms per check")

    p = _Parser(prog="gmak", description="Sign-vector and stability analysis of generalized mass-action networks.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    a = sub.add_parser("analyze", parents=[common], help="run every check")
    a.add_argument("file")
    a.add_argument("--samples", type=int, default=0, help="numeric equilibrium samples (0 = none)")
    a.set_defaults(func=cmd_analyze, lam=None)

    c = sub.add_parser("check", parents=[common], help="run one check")
    c.add_argument("condition", metavar="CONDITION", help=", ".join(CONDITIONS))
    c.add_argument("file")
    c.add_argument("--lambda", dest="lam", metavar="V1,V2,...", help="cycle parameters for carlson (default all 1)")
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("cbe", parents=[common], help="equilibrium for given rates")
    e.add_argument("file")
    e.add_argument("--rate", "--rates", action="append", dest="rate", metavar="NAME=VALUE[,...]")
    e.set_defaults(func=cmd_cbe)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (FileNotFoundError, NoCBE, NotWeaklyReversible, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
