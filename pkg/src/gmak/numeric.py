"""Floating-point cross-checks: equilibria, Jacobians, and spectra on the stoichiometric subspace."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .laplacian import AuxiliaryGraph, cycle_laplacian, default_chain, enumerate_cycles, structure_matrices
from .network import GeneralizedNetwork, NetworkStructure, analyze_structure, connected_components, is_weakly_reversible

DEFAULT_TOL_STABLE = 1e-8
ORTHONORMAL_TOL = 1e-12
CBE_TOL = 1e-9
RATE_RANGE = (1e-2, 1e2)


class NoCBE(ValueError):
    """The log-linear equilibrium system is inconsistent for the given rates."""


@dataclass
class EquilibriumSample:
    rates: list[float]
    x_star: list[float] | None
    residual_norm: float | None
    spectrum: list[complex] = field(default_factory=list)
    valid: bool = True
    stable: bool | None = None
    max_real: float | None = None
    note: str | None = None


def _Y(net: GeneralizedNetwork) -> tuple[np.ndarray, np.ndarray]:
    Y, Yt = structure_matrices(net)
    return Y.to_numpy().reshape(net.n, net.m), Yt.to_numpy().reshape(net.n, net.m)


def _rates(net: GeneralizedNetwork, k) -> np.ndarray:
    if isinstance(k, dict):
        from .laplacian import rates_from

        k = [float(v) for v in rates_from(net, k)]
    r = np.asarray(k, dtype=float)
    if r.shape != (len(net.edges),):
        raise ValueError(f"expected {len(net.edges)} rates")
    if np.any(r <= 0):
        raise ValueError("rate constants must be positive")
    return r


def laplacian_float(net: GeneralizedNetwork, k) -> np.ndarray:
    r = _rates(net, k)
    A = np.zeros((net.m, net.m))
    for e, v in zip(net.edges, r):
        A[e.target, e.source] += v
        A[e.source, e.source] -= v
    return A


def tree_constants_float(net: GeneralizedNetwork, k) -> np.ndarray:
    if not is_weakly_reversible(net):
        raise ValueError("network is not weakly reversible")
    A = laplacian_float(net, k)
    K = np.zeros(net.m)
    for comp in connected_components(net):
        for i in comp:
            rest = [v for v in comp if v != i]
            K[i] = (-1) ** (len(comp) - 1) * (np.linalg.det(A[np.ix_(rest, rest)]) if rest else 1.0)
    return K


def monomials(net: GeneralizedNetwork, x) -> np.ndarray:
    """``x^{ỹ(i)}`` for every vertex."""
    _, Yt = _Y(net)
    return np.exp(Yt.T @ np.log(np.asarray(x, dtype=float)))


def rhs(net: GeneralizedNetwork, k, x) -> np.ndarray:
    Y, _ = _Y(net)
    return Y @ laplacian_float(net, k) @ monomials(net, x)


def compute_cbe(net: GeneralizedNetwork, k, aux: AuxiliaryGraph | None = None) -> np.ndarray:
    """Minimum-norm solution of ``(Ỹ I_ℰ)ᵀ ln x = I_ℰᵀ ln K`` over a spanning forest ℰ."""
    aux = default_chain(net) if aux is None else aux
    _, Yt = _Y(net)
    K = tree_constants_float(net, k)
    rows = [Yt[:, b] - Yt[:, a] for a, b in aux.edges]
    rhs_ = [np.log(K[b]) - np.log(K[a]) for a, b in aux.edges]
    if not rows:
        return np.ones(net.n)
    Mat, b = np.array(rows), np.array(rhs_)
    sol, *_ = np.linalg.lstsq(Mat, b, rcond=None)
    if np.max(np.abs(Mat @ sol - b)) > CBE_TOL * (1 + np.max(np.abs(b))):
        raise NoCBE("no CBE for these rates")
    return np.exp(sol)


def cbe_residual_norm(net: GeneralizedNetwork, k, x) -> float:
    """Relative max-norm of ``A_k x^Ỹ``."""
    A = laplacian_float(net, k)
    phi = monomials(net, x)
    scale = np.max(np.abs(A) @ phi) if phi.size else 1.0
    return float(np.max(np.abs(A @ phi)) / scale) if phi.size else 0.0


def jacobian_at(net: GeneralizedNetwork, k, x) -> np.ndarray:
    """``J(x) = Y A_k diag(x^Ỹ) Ỹᵀ diag(1/x)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("concentrations must be positive")
    Y, Yt = _Y(net)
    return Y @ laplacian_float(net, k) @ np.diag(monomials(net, x)) @ Yt.T @ np.diag(1.0 / x)


def orthonormal_basis(ns: NetworkStructure) -> np.ndarray:
    if ns.dim_S == 0:
        return np.zeros((ns.n, 0))
    B = ns.S_basis.to_numpy().reshape(ns.n, ns.dim_S)
    q, _ = np.linalg.qr(B)
    return q


def spectrum_on_S(J: np.ndarray, B: np.ndarray, tol: float = DEFAULT_TOL_STABLE) -> tuple[np.ndarray, bool]:
    """Eigenvalues of ``BᵀJB`` and the linear-stability verdict (vacuous when S = {0})."""
    if B.shape[1] == 0:
        return np.zeros(0, dtype=complex), True
    if np.max(np.abs(B.T @ B - np.eye(B.shape[1]))) > ORTHONORMAL_TOL:
        raise ValueError("basis is not orthonormal")
    ev = np.linalg.eigvals(B.T @ J @ B)
    rho = float(np.max(np.abs(ev)))
    return ev, bool(np.max(ev.real) < -tol * (1 + rho))


def rates_for_equilibrium(net: GeneralizedNetwork, lam: Sequence[float], x) -> np.ndarray:
    """Rates for which ``x`` is a CBE and the cycle parameters are ``lam``.

    ``A_k diag(x^Ỹ) = Σ λ_C A_C`` fixes every rate as a cycle flow divided by
    the source monomial.
    """
    cycles = enumerate_cycles(net)
    if len(lam) != len(cycles):
        raise ValueError(f"expected {len(cycles)} cycle parameters")
    flow = sum(float(l) * cycle_laplacian(net, c).to_numpy().reshape(net.m, net.m) for l, c in zip(lam, cycles))
    phi = monomials(net, x)
    return np.array([flow[e.target, e.source] / phi[e.source] for e in net.edges])


def sample_rates_from_equilibrium(net: GeneralizedNetwork, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = np.log(RATE_RANGE[0]), np.log(RATE_RANGE[1])
    lam = np.exp(rng.uniform(lo, hi, len(enumerate_cycles(net))))
    x = np.exp(rng.uniform(lo, hi, net.n))
    return rates_for_equilibrium(net, lam, x), x


def evaluate_sample(net: GeneralizedNetwork, ns: NetworkStructure, rates, B, tol: float, x=None) -> EquilibriumSample:
    """Spectrum on S at ``x`` (or at the minimum-norm CBE when ``x`` is None)."""
    s = EquilibriumSample(rates=[float(v) for v in rates], x_star=None, residual_norm=None)
    if x is None:
        try:
            x = compute_cbe(net, rates)
        except NoCBE:
            s.valid, s.note = False, "no CBE for these rates"
            return s
    x = np.asarray(x, dtype=float)
    s.x_star = x.tolist()
    s.residual_norm = cbe_residual_norm(net, rates, x)
    if s.residual_norm > CBE_TOL:
        s.valid, s.note = False, "residual above tolerance"
        return s
    ev, stable = spectrum_on_S(jacobian_at(net, rates, x), B, tol)
    s.spectrum = ev.tolist()
    s.stable = stable
    s.max_real = float(np.max(ev.real)) if ev.size else None
    return s


def sample_stability(
    net: GeneralizedNetwork,
    trials: int,
    seed: int = 0,
    tol: float = DEFAULT_TOL_STABLE,
    mode: str = "auto",
) -> dict:
    """Stable/unstable/invalid counts over seeded rate draws.

    ``mode="rates"`` draws log-uniform rates; ``"equilibria"`` builds rates that
    admit a CBE. ``"auto"`` uses the latter only when the kinetic deficiency is
    positive, where generic rates have no CBE.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    ns = analyze_structure(net)
    if mode == "auto":
        mode = "rates" if ns.delta_tilde == 0 else "equilibria"
    if mode not in ("rates", "equilibria"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    B = orthonormal_basis(ns)
    lo, hi = np.log(RATE_RANGE[0]), np.log(RATE_RANGE[1])
    counts = {"stable": 0, "unstable": 0, "invalid": 0}
    worst_real, worst_resid = None, 0.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        if mode == "rates":
            rates, x = np.exp(rng.uniform(lo, hi, len(net.edges))), None
        else:
            rates, x = sample_rates_from_equilibrium(net, rng)
        s = evaluate_sample(net, ns, rates, B, tol, x)
        if not s.valid:
            counts["invalid"] += 1
            continue
        counts["stable" if s.stable else "unstable"] += 1
        worst_resid = max(worst_resid, s.residual_norm)
        if s.max_real is not None:
            worst_real = s.max_real if worst_real is None else max(worst_real, s.max_real)
    return {
        "trials": trials,
        "seed": seed,
        "mode": mode,
        "tol_stable": tol,
        **counts,
        "worst_max_real": worst_real,
        "worst_residual": worst_resid,
    }


def probe_minor_violation(
    net: GeneralizedNetwork, lam: Sequence, rows: Sequence[int], scale: float = 1e-3, tol: float = DEFAULT_TOL_STABLE
) -> EquilibriumSample:
    """Equilibrium at cycle parameters ``lam`` with the species in ``rows`` scaled down.

    A negative principal minor of ``-𝒥(λ)`` on ``rows`` shows up as an unstable
    direction once ``diag(1/x)`` weights those species heavily.
    """
    x = np.ones(net.n)
    x[list(rows)] = scale
    rates = rates_for_equilibrium(net, [float(v) for v in lam], x)
    ns = analyze_structure(net)
    return evaluate_sample(net, ns, rates, orthonormal_basis(ns), tol, x)


def sample_to_json(s: EquilibriumSample) -> dict:
    d = asdict(s)
    d["spectrum"] = [[z.real, z.imag] for z in s.spectrum]
    return d
