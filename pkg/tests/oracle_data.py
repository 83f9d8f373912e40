"""Frozen reference values.

Values marked "reference" are the known results for the shipped example
networks, worked out by hand. Values marked "derived" were produced by an
independent computer-algebra computation (sympy, with Y and Ỹ typed in
by hand) and are re-derived in ``test_oracles.py`` whenever sympy is
available.
"""

from fractions import Fraction as F

# reference: (m, l, delta, delta_tilde, weakly reversible)
STRUCTURE = {
    "lotka": (3, 1, 0, 0, True),
    "signaling": (4, 1, 1, 0, True),
    "futile": (4, 1, 0, 0, True),
    "sir": (4, 1, 1, 1, True),
}

# Cycle parameter names as the package enumerates them.
SIGNALING_CYCLES = {"o": "C(v1 v2 v3 v4)", "23": "C(v2 v3)"}
FUTILE_CYCLES = {"o": "C(v1 v2 v3 v4)", "12": "C(v1 v2)", "34": "C(v3 v4)"}
FUTILE_REVERSED_CYCLES = {"o": "C(v1 v4 v3 v2)", "12": "C(v1 v2)", "34": "C(v3 v4)"}


def _e(**kw):
    return {k.lstrip("_"): v for k, v in kw.items()}


# reference: -𝒥 for the signaling example, entries as {cycle key: coefficient}
SIGNALING_NEG_J = [
    [_e(o=1, _23=1), _e(o=-1, _23=-1), _e(o=-1, _23=-1), _e(_23=1)],
    [_e(o=-1, _23=-1), _e(o=1, _23=1), _e(o=1, _23=1), _e(_23=-1)],
    [_e(_23=-1), _e(o=1, _23=1), _e(o=1, _23=1), _e(o=-1, _23=-1)],
    [_e(_23=1), _e(o=-1, _23=-1), _e(o=-1, _23=-1), _e(o=1, _23=1)],
]

# reference: -𝒥 for the futile-cycle example
FUTILE_NEG_J = [
    [_e(o=1, _12=1), _e(o=-1, _12=-1), {}, {}, _e(o=1, _12=1), {}],
    [_e(o=-1, _12=-1), _e(o=1, _12=1), {}, {}, _e(o=-1, _12=-1), {}],
    [{}, {}, _e(o=1, _34=1), _e(o=-1, _34=-1), {}, _e(o=1, _34=1)],
    [{}, {}, _e(o=-1, _34=-1), _e(o=1, _34=1), {}, _e(o=-1, _34=-1)],
    [_e(o=1, _12=1), _e(_12=-1), {}, _e(o=-1), _e(o=1, _12=1), {}],
    [{}, _e(o=-1), _e(o=1, _34=1), _e(_34=-1), {}, _e(o=1, _34=1)],
]

# derived: -𝒥 with the full cycle reversed (1 -> 4 -> 3 -> 2 -> 1)
FUTILE_REVERSED_NEG_J = [
    [_e(_12=1), _e(o=-1, _12=-1), _e(o=1), {}, _e(_12=1), _e(o=1)],
    [_e(_12=-1), _e(o=1, _12=1), _e(o=-1), {}, _e(_12=-1), _e(o=-1)],
    [_e(o=1), {}, _e(_34=1), _e(o=-1, _34=-1), _e(o=1), _e(_34=1)],
    [_e(o=-1), {}, _e(_34=-1), _e(o=1, _34=1), _e(o=-1), _e(_34=-1)],
    [_e(o=1, _12=1), _e(o=-1, _12=-1), {}, {}, _e(o=1, _12=1), {}],
    [{}, {}, _e(o=1, _34=1), _e(o=-1, _34=-1), {}, _e(o=1, _34=1)],
]

# derived: the first negative principal minor of reversed -𝒥 on the sample grid
REVERSED_LAMBDA = {"o": F(1, 2), "12": F(1, 8), "34": F(1, 8)}
REVERSED_NEGATIVE_MINOR = ((0, 2), F(-15, 64))

# derived: futile -𝒥, rows {E*, F*} against columns {S, P} and back.
# The first is (λo + λ12)(λo + λ34); the second is λ12 λ34 - λo², which
# changes sign, so sign symmetry holds only where λ12 λ34 >= λo².
FUTILE_SS_PAIR = ((1, 3), (4, 5))
FUTILE_SS_MINOR_BA_AT = {  # (λo, λ12, λ34) -> λ12 λ34 - λo²
    (F(1), F(1), F(1)): F(0),
    (F(1, 2), F(1, 8), F(1, 8)): F(-15, 64),
    (F(1), F(2), F(2)): F(3),
}

# derived: determinant of the {E, F*, P} block of futile -𝒥 is λo (λo + λ12)(λo + λ34)
FUTILE_WITNESS = (0, 3, 5)
SIGNALING_WITNESS = (0, 2)

# derived: rooted spanning-tree weights of the Lotka triangle at k = (1, 2, 3)
LOTKA_TREE_CONSTANTS = {(1, 2, 3): (F(6), F(3), F(2))}

# derived: S̃⊥ of the signaling network is spanned by (0, -1, 1, 0)
SIGNALING_STILDE_PERP_SIGNS = {(0, 0, 0, 0), (0, -1, 1, 0), (0, 1, -1, 0)}

# reference: Lotka, Y I_Ω on the open upper-left orthant has the single sign (-,+,+);
# the closed orthant adds (0,+,+) among others
LOTKA_OPEN_UL = {(-1, 1, 1)}
LOTKA_CLOSED_UL_CONTAINS = (0, 1, 1)
