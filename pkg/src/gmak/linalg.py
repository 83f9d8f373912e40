"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction` and never rounds.
Matrices are small (a few dozen rows at most), so a dense immutable
row-major representation is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

Number = int | Fraction


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and strings like ``"3/4"`` exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        # exact binary expansion; callers wanting decimals should pass strings
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


class QMatrix:
    """Immutable dense matrix of exact rationals.

    Zero-sized shapes are allowed (e.g. an ``n x 0`` basis of the zero
    subspace), which is why the column count is stored explicitly.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix without rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix data")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def diag(cls, values: Sequence) -> "QMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def to_numpy(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self._data], dtype=float).reshape(
            self.rows, self.cols
        )

    # algebra ------------------------------------------------------------
    @property
    def T(self) -> "QMatrix":
        return QMatrix([self.col(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return QMatrix(
            [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in ocols] for r in self._data],
            other.cols,
        )

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self._data)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def __neg__(self) -> "QMatrix":
        return QMatrix([[-a for a in r] for r in self._data], self.cols)

    def scale(self, c) -> "QMatrix":
        c = as_fraction(c)
        return QMatrix([[c * a for a in r] for r in self._data], self.cols)

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return QMatrix([a + b for a, b in zip(self._data, other._data)], self.cols + other.cols)

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return QMatrix(self._data + other._data, self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix([[self._data[i][j] for j in cols] for i in rows], len(cols))

    def select_columns(self, cols: Sequence[int]) -> "QMatrix":
        return self.submatrix(range(self.rows), cols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"


# ---------------------------------------------------------------------------
# elimination


def rref(M: QMatrix) -> tuple[QMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot column indices."""
    A = M.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        if r == M.rows:
            break
        p = next((i for i in range(r, M.rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(M.rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return QMatrix(A, M.cols), tuple(pivots)


def empty_basis(n: int) -> QMatrix:
    """The ``n x 0`` matrix spanning the zero subspace."""
    return QMatrix([[] for _ in range(n)], 0)


def rank(M: QMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(rref(M)[1])


def kernel_basis(M: QMatrix) -> QMatrix:
    """Basis of ``{x : M x = 0}`` as the columns of a ``cols x nullity`` matrix."""
    R, pivots = rref(M) if M.rows else (M, ())
    free = [j for j in range(M.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(v)
    return QMatrix.from_columns(basis, M.cols)


def image_basis(M: QMatrix) -> QMatrix:
    """Basis of the column space, made of the pivot columns of ``M`` itself."""
    if M.rows == 0:
        return QMatrix([], 0)
    _, pivots = rref(M)
    return M.select_columns(pivots)


def orthogonal_complement(B: QMatrix) -> QMatrix:
    """Basis of the orthogonal complement of ``im B``."""
    if B.cols == 0:
        return QMatrix.identity(B.rows)
    return kernel_basis(B.T)


def in_span(B: QMatrix, v: Sequence) -> bool:
    if B.cols == 0:
        return all(x == 0 for x in v)
    return rank(B.hstack(QMatrix.from_columns([v], B.rows))) == rank(B)


def same_span(A: QMatrix, B: QMatrix) -> bool:
    """Exact equality of column spaces by mutual containment."""
    if A.rows != B.rows:
        return False
    ra, rb = rank(A), rank(B)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(A.hstack(B)) == ra


def intersect_subspaces(A: QMatrix, B: QMatrix) -> QMatrix:
    """Basis of ``im A ∩ im B`` (columns)."""
    A, B = image_basis(A), image_basis(B)
    if A.cols == 0 or B.cols == 0:
        return empty_basis(A.rows)
    K = kernel_basis(A.hstack(-B))
    if K.cols == 0:
        return empty_basis(A.rows)
    return image_basis(A @ K.submatrix(range(A.cols), range(K.cols)))


def inverse(M: QMatrix) -> QMatrix:
    n = M.rows
    if n != M.cols:
        raise ValueError("inverse of a non-square matrix")
    R, pivots = rref(M.hstack(QMatrix.identity(n)))
    if pivots[:n] != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))


# ---------------------------------------------------------------------------
# determinants


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns the rows and the product of the scales.

    Row scales are positive, so signs of minors are unchanged.
    """
    out, scale = [], Fraction(1)
    for r in rows:
        m = reduce(lcm, (x.denominator for x in r), 1)
        out.append([int(x * m) for x in r])
        scale *= m
    return out, scale


def bareiss_det(A: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination on an integer matrix (mutates ``A``)."""
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        akk = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def det(M: QMatrix) -> Fraction:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    rows, scale = integer_rows([M.row(i) for i in range(M.rows)])
    return Fraction(bareiss_det(rows)) / scale


def minor(M: QMatrix, row_set: Sequence[int], col_set: Sequence[int]) -> Fraction:
    """Determinant of the submatrix on ``row_set x col_set`` (empty minor is 1)."""
    if len(row_set) != len(col_set):
        raise ValueError("minor needs equally many rows and columns")
    for i in row_set:
        if not 0 <= i < M.rows:
            raise IndexError(f"row index {i} out of range")
    for j in col_set:
        if not 0 <= j < M.cols:
            raise IndexError(f"column index {j} out of range")
    return det(M.submatrix(row_set, col_set))


def principal_minors(M: QMatrix) -> dict[tuple[int, ...], Fraction]:
    """All nonempty principal minors keyed by the sorted index tuple."""
    n = M.rows
    return {a: minor(M, a, a) for k in range(1, n + 1) for a in combinations(range(n), k)}


# ---------------------------------------------------------------------------
# bases


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def orthogonal_basis(B: QMatrix) -> QMatrix:
    """Gram-Schmidt without normalisation, so the result stays rational.

    Raises ``ValueError`` if the columns of ``B`` are dependent.
    """
    out: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for v in B.columns():
        w = list(v)
        for u, nu in zip(out, norms):
            c = dot(v, u) / nu
            if c:
                w = [a - c * b for a, b in zip(w, u)]
        nw = dot(w, w)
        if nw == 0:
            raise ValueError("columns are linearly dependent")
        out.append(w)
        norms.append(nw)
    return QMatrix.from_columns(out, B.rows)


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive rescaling of ``v`` to coprime integers (signs preserved)."""
    m = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * m) for x in v]
    g = reduce(gcd, ints, 0)
    return tuple(x // g for x in ints) if g else tuple(ints)


# ---------------------------------------------------------------------------
# homogeneous sign-constrained feasibility


@dataclass(frozen=True)
class SignConstrainedSystem:
    """Homogeneous system ``strict z > 0, nonneg z >= 0, zero z = 0``."""

    strict: QMatrix
    nonneg: QMatrix
    zero: QMatrix

    def __post_init__(self):
        n = {self.strict.cols, self.nonneg.cols, self.zero.cols}
        if len(n) != 1:
            raise ValueError("all blocks must share the column count")

    @property
    def dim(self) -> int:
        return self.strict.cols

    @classmethod
    def build(cls, dim: int, strict=(), nonneg=(), zero=()) -> "SignConstrainedSystem":
        def block(rows):
            rows = list(rows)
            return QMatrix(rows, dim) if rows else QMatrix([], dim)

        return cls(block(strict), block(nonneg), block(zero))

    def check(self, z: Sequence) -> bool:
        return (
            all(x > 0 for x in self.strict.apply(z))
            and all(x >= 0 for x in self.nonneg.apply(z))
            and all(x == 0 for x in self.zero.apply(z))
        )


@dataclass(frozen=True)
class Infeasible:
    """Motzkin certificate: ``strictᵀ y_s + nonnegᵀ y_n + zeroᵀ y_z = 0``
    with ``y_s >= 0`` nonzero and ``y_n >= 0``."""

    y_strict: tuple[Fraction, ...]
    y_nonneg: tuple[Fraction, ...]
    y_zero: tuple[Fraction, ...]

    def verify(self, sys: SignConstrainedSystem) -> bool:
        if any(y < 0 for y in self.y_strict) or not any(self.y_strict):
            return False
        if any(y < 0 for y in self.y_nonneg):
            return False
        total = [Fraction(0)] * sys.dim
        for block, ys in ((sys.strict, self.y_strict), (sys.nonneg, self.y_nonneg), (sys.zero, self.y_zero)):
            for i, y in enumerate(ys):
                if y:
                    r = block.row(i)
                    total = [t + y * a for t, a in zip(total, r)]
        return not any(total)


@dataclass(frozen=True)
class Feasible:
    witness: tuple[Fraction, ...]


def feasible(sys: SignConstrainedSystem) -> Feasible | Infeasible:
    """Decide the homogeneous sign system exactly.

    Maximises a slack ``t`` with ``strict z >= t``, ``nonneg z >= 0``,
    ``zero z = 0`` and the box ``|z_j| <= 1`` (``z = p - q``,
    ``p_j + q_j <= 1``) by a dense rational simplex with Bland's rule.
    The system is feasible iff the optimum is positive; otherwise the
    optimal duals form a Motzkin infeasibility certificate.
    """
    n = sys.dim
    if sys.strict.rows == 0:
        return Feasible(tuple(Fraction(0) for _ in range(n)))

    # constraint rows over variables (p_1..p_n, q_1..q_n, t), all "<= b" with b >= 0
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    zero_f, one_f = Fraction(0), Fraction(1)
    for i in range(sys.strict.rows):
        r = sys.strict.row(i)
        A.append([-x for x in r] + list(r) + [one_f])
        b.append(zero_f)
    for i in range(sys.nonneg.rows):
        r = sys.nonneg.row(i)
        A.append([-x for x in r] + list(r) + [zero_f])
        b.append(zero_f)
    for i in range(sys.zero.rows):
        r = sys.zero.row(i)
        A.append(list(r) + [-x for x in r] + [zero_f])
        b.append(zero_f)
        A.append([-x for x in r] + list(r) + [zero_f])
        b.append(zero_f)
    for j in range(n):
        row = [zero_f] * (2 * n + 1)
        row[j] = row[n + j] = one_f
        A.append(row)
        b.append(one_f)
    row = [zero_f] * (2 * n + 1)
    row[2 * n] = one_f
    A.append(row)
    b.append(one_f)

    m, nv = len(A), 2 * n + 1
    # tableau: [A | I | b], objective row holds reduced costs (maximise t)
    T = [A[i] + [one_f if k == i else zero_f for k in range(m)] + [b[i]] for i in range(m)]
    obj = [zero_f] * (nv + m + 1)
    obj[2 * n] = Fraction(-1)
    basis = [nv + i for i in range(m)]

    while True:
        enter = next((j for j in range(nv + m) if obj[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded cannot happen: everything is boxed
            raise RuntimeError("simplex reported an unbounded homogeneous system")
        piv = T[leave][enter]
        prow = [x / piv for x in T[leave]]
        T[leave] = prow
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f:
                    T[i] = [x - f * y for x, y in zip(T[i], prow)]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, prow)]
        basis[leave] = enter

    x = [zero_f] * nv
    for i, bv in enumerate(basis):
        if bv < nv:
            x[bv] = T[i][-1]
    t_opt = x[2 * n]
    if t_opt > 0:
        z = tuple(x[j] - x[n + j] for j in range(n))
        if not sys.check(z):
            raise AssertionError("simplex witness failed exact re-check")
        return Feasible(z)

    y = obj[nv : nv + m]
    k = 0
    ys = tuple(y[k : k + sys.strict.rows])
    k += sys.strict.rows
    yn = tuple(y[k : k + sys.nonneg.rows])
    k += sys.nonneg.rows
    yz = tuple(-(y[k + 2 * i] - y[k + 2 * i + 1]) for i in range(sys.zero.rows))
    cert = Infeasible(ys, yn, yz)
    if not cert.verify(sys):
        raise AssertionError("simplex infeasibility certificate failed exact re-check")
    return cert
