"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding. Matrices are small (desk scale), and
the algorithms favour clarity over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence

Rational = Fraction


class ZeroVectorError(ValueError):
    pass


class NotFiniteError(ValueError):
    """The lattice quotient has a free part, so it is not a finite group."""


class NotSaturatedError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (ints are accepted as well)."""
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise TypeError(f"expected a rational string, got {type(text).__name__}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc
    return value


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# integer matrices


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = [list(c) for c in columns]
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)], cols=len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            cols = [other.column(j) for j in range(other.cols)]
            return IntMatrix.from_rows(
                [[sum(a * b for a, b in zip(self.row(i), c)) for c in cols] for i in range(self.rows)],
                cols=other.cols,
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(self.row(i), vec)) for i in range(self.rows))

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return int(rational_det(self.tolist()))

    def diagonal(self) -> tuple:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))


class SNFDecomposition(NamedTuple):
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariants(self) -> tuple:
        return self.D.diagonal()


def snf(A: IntMatrix) -> SNFDecomposition:
    """Smith normal form ``U @ A @ V == D`` by elimination with a minimal pivot.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative entries
    and each diagonal entry divides the next.
    """
    m, n = A.rows, A.cols
    D = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row[dst] += q * row[src]
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):  # col[dst] += q * col[src]
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        if all(D[i][j] == 0 for i in range(t, m) for j in range(t, n)):
            break

    return SNFDecomposition(
        IntMatrix.from_rows(U, cols=m),
        IntMatrix.from_rows(D, cols=n),
        IntMatrix.from_rows(V, cols=n),
    )


def hnf(A: IntMatrix) -> tuple:
    """Row Hermite normal form: returns ``(H, U)`` with ``U @ A == H``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)``, zero
    rows sit at the bottom.
    """
    m, n = A.rows, A.cols
    H = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[k] = H[k], H[r]
            U[r], U[k] = U[k], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    done = done and H[i][c] == 0
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return IntMatrix.from_rows(H, cols=n), IntMatrix.from_rows(U, cols=m)


# ---------------------------------------------------------------------------
# rational matrices


def rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form over Q. Returns ``(R, pivot_columns)``."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def kernel_basis(A: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of the right null space of a rational matrix.

    ``ncols`` is needed only when ``A`` has no rows.
    """
    if ncols is None:
        ncols = len(A[0]) if A else 0
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> list | None:
    """One solution of ``A x = b`` over Q, or ``None`` if inconsistent."""
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[-1]
    return x


def rational_det(M: Sequence[Sequence]) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c] != 0), None)
        if k is None:
            return Fraction(0)
        if k != c:
            A[c], A[k] = A[k], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] / A[c][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return det


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    n = M.rows
    aug = [list(M.row(i)) + [int(i == j) for j in range(n)] for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    inv = [[x for x in row[n:]] for row in R]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return IntMatrix.from_rows([[int(x) for x in row] for row in inv], cols=n)


def clear_denominators(v: Iterable) -> list:
    """Scale a rational vector by the lcm of its denominators."""
    v = [Fraction(x) for x in v]
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    return [int(x * lcm) for x in v]


def primitive(v: Iterable) -> tuple:
    """Divide a nonzero integer (or rational) vector by its content."""
    ints = clear_denominators(v)
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ZeroVectorError("the zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# lattices


def saturate(vs: Sequence[Sequence[int]], n: int | None = None) -> list:
    """Z-basis of ``span_R(vs) ∩ Z^n``.

    Computed from the SNF ``U M V = D`` of the matrix with rows ``vs``: the
    first ``rank`` rows of ``V^{-1}`` span the same real subspace and extend
    to a basis of ``Z^n``.
    """
    vs = [list(v) for v in vs]
    if not vs:
        return []
    if n is None:
        n = len(vs[0])
    dec = snf(IntMatrix.from_rows(vs, cols=n))
    r = sum(1 for d in dec.D.diagonal() if d)
    Vinv = inverse_unimodular(dec.V)
    return [tuple(Vinv.row(i)) for i in range(r)]


def quotient_projection(S: Sequence[Sequence[int]], n: int | None = None) -> IntMatrix:
    """Surjection ``Z^n -> Z^(n-r)`` whose kernel is the lattice spanned by ``S``.

    ``S`` must be saturated (a basis of its real span intersected with Z^n).
    """
    S = [list(s) for s in S]
    if n is None:
        if not S:
            raise ValueError("ambient dimension required for an empty basis")
        n = len(S[0])
    if not S:
        return IntMatrix.identity(n)
    dec = snf(IntMatrix.from_rows(S, cols=n))
    diag = dec.D.diagonal()
    if any(d == 0 for d in diag):
        raise ValueError("sublattice basis is linearly dependent")
    if any(d != 1 for d in diag):
        raise NotSaturatedError(f"sublattice is not saturated (invariants {list(diag)})")
    r = len(S)
    V = dec.V
    return IntMatrix.from_rows([[V[i, j] for i in range(n)] for j in range(r, n)], cols=n)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group in invariant-factor form (factors > 1 only)."""

    invariant_factors: tuple = ()

    def __post_init__(self):
        fs = tuple(int(f) for f in self.invariant_factors)
        if any(f < 2 for f in fs):
            raise ValueError("invariant factors must be at least 2")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError("each invariant factor must divide the next")
        object.__setattr__(self, "invariant_factors", fs)

    @property
    def order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self):
        if self.is_trivial:
            return "0"
        return " x ".join(f"Z/{f}" for f in self.invariant_factors)


def abelian_quotient(mus: Sequence[Sequence[int]], k: int | None = None) -> FiniteAbelianGroup:
    """The group ``Z^k / <mu_1, ..., mu_k>`` for ``k`` independent vectors."""
    mus = [list(m) for m in mus]
    if k is None:
        k = len(mus[0]) if mus else 0
    if len(mus) != k:
        raise NotFiniteError(f"{len(mus)} vectors cannot span a finite-index sublattice of Z^{k}")
    if k == 0:
        return FiniteAbelianGroup()
    diag = snf(IntMatrix.from_columns(mus, rows=k)).D.diagonal()
    if any(d == 0 for d in diag):
        raise NotFiniteError("vectors are linearly dependent; quotient has a free part")
    return FiniteAbelianGroup(tuple(d for d in diag if d > 1))


def read_int_matrix(text: str) -> IntMatrix:
    """Parse the plain-text matrix format: one row per line, whitespace separated."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer entry") from exc
    if not rows:
        return IntMatrix(0, 0, ())
    if len({len(r) for r in rows}) != 1:
        raise ValueError("rows have different lengths")
    return IntMatrix.from_rows(rows)
