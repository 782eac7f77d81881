"""Exact linear algebra over the rationals and prime fields.

Field elements are plain Python values: ``Fraction`` for the rationals and
``int`` in ``range(p)`` for F_p.  A field object carries the arithmetic
that differs between the two (reduction, inversion, parsing), so every
algorithm here is written once and works over both.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import reduce as _fold
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

from sympy import isprime

from .errors import ContractError, PreconditionError, ShapeError

DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)
PRIMES_ENV = "SECANTCERT_PRIMES"
MIN_PRIME = 10**6


def default_primes() -> tuple[int, ...]:
    """Prime list, overridable through ``$SECANTCERT_PRIMES`` (comma separated)."""
    raw = os.environ.get(PRIMES_ENV, "").strip()
    if not raw:
        return DEFAULT_PRIMES
    primes = tuple(int(tok) for tok in raw.split(",") if tok.strip())
    for p in primes:
        check_prime(p)
    return primes


def check_prime(p: int, minimum: int = MIN_PRIME) -> int:
    if p <= minimum or not isprime(p):
        raise PreconditionError(f"{p} is not a prime above {minimum}")
    return p


class RationalField:
    """The field Q; elements are ``fractions.Fraction``."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def reduce(self, x):
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def div(self, a, b):
        return Fraction(a) / b

    def random(self, rng, nonzero: bool = False, bound: int = 50) -> Fraction:
        while True:
            x = Fraction(rng.randint(-bound, bound))
            if x or not nonzero:
                return x

    def fmt(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def parse(self, s) -> Fraction:
        return Fraction(s)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def describe(self) -> dict:
        return {"field": "QQ"}


class PrimeField:
    """The prime field F_p; elements are ints in ``range(p)``."""

    zero = 0
    one = 1

    def __init__(self, p: int, check: bool = True):
        if check and not isprime(p):
            raise PreconditionError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % self.p

    def reduce(self, x) -> int:
        return x % self.p

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def div(self, a, b) -> int:
        return a * self.inv(b) % self.p

    def random(self, rng, nonzero: bool = False, bound=None) -> int:
        lo = 1 if nonzero else 0
        return rng.randrange(lo, self.p)

    def fmt(self, x) -> str:
        return str(x % self.p)

    def parse(self, s) -> int:
        return self(s)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def describe(self) -> dict:
        return {"field": "GF", "p": self.p}


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


class Matrix:
    """Immutable dense matrix over a field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows: Iterable[Iterable], ncols: int | None = None):
        self.field = field
        self.rows = tuple(tuple(field(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise ShapeError("ragged matrix rows")

    @classmethod
    def _raw(cls, field, rows, ncols=None):
        # rows already reduced; skip coercion
        m = object.__new__(cls)
        m.field = field
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = ncols if ncols is not None else (len(m.rows[0]) if m.rows else 0)
        return m

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int | None = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        return cls._raw(field, [[field.zero] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls._raw(
            field,
            [[field.one if i == j else field.zero for j in range(n)] for i in range(n)],
            n,
        )

    @classmethod
    def diagonal(cls, field, values: Sequence) -> "Matrix":
        n = len(values)
        return cls(field, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def random(cls, field, nrows: int, ncols: int, rng) -> "Matrix":
        return cls._raw(
            field, [[field.random(rng) for _ in range(ncols)] for _ in range(nrows)], ncols
        )

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block row must share heights."""
        field = grid[0][0].field
        rows = []
        for block_row in grid:
            h = block_row[0].nrows
            if any(b.nrows != h for b in block_row):
                raise ShapeError("block heights differ")
            for i in range(h):
                rows.append([x for b in block_row for x in b.rows[i]])
        return cls._raw(field, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        return f"Matrix({self.field!r}, {[list(r) for r in self.rows]})"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.field, zip(*self.rows), self.nrows) if self.rows else Matrix._raw(
            self.field, [[] for _ in range(self.ncols)], 0
        )

    T = property(transpose)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.field.reduce
        return Matrix._raw(
            self.field,
            [[red(a + b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.field.reduce
        return Matrix._raw(
            self.field,
            [[red(a - b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        red = self.field.reduce
        return Matrix._raw(self.field, [[red(-a) for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        red = self.field.reduce
        return Matrix._raw(self.field, [[red(c * a) for a in r] for r in self.rows], self.ncols)

    def add(self, other: "Matrix") -> "Matrix":
        return self + other

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        red = self.field.reduce
        cols = list(zip(*other.rows)) if other.rows else []
        zero = self.field.zero
        out = []
        for r in self.rows:
            out.append([red(sum((a * b for a, b in zip(r, c)), zero)) for c in cols])
        return Matrix._raw(self.field, out, other.ncols)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.ncols:
            raise ShapeError("vector length does not match column count")
        red = self.field.reduce
        zero = self.field.zero
        return [red(sum((a * b for a, b in zip(r, vec)), zero)) for r in self.rows]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def minor_matrix(self, i: int, j: int) -> "Matrix":
        rows = [r for r in range(self.nrows) if r != i]
        cols = [c for c in range(self.ncols) if c != j]
        return self.submatrix(rows, cols)

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_skew(self) -> bool:
        red = self.field.reduce
        return self.is_square() and all(
            red(self.rows[i][j] + self.rows[j][i]) == 0
            for i in range(self.nrows)
            for j in range(i + 1)
        )

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def to_json(self) -> list[list[str]]:
        return [[self.field.fmt(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, field, data) -> "Matrix":
        return cls(field, [[field.parse(str(x)) for x in r] for r in data])


# -- elimination ----------------------------------------------------------


def rref(M: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    F = M.field
    red = F.reduce
    A = [list(r) for r in M.rows]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        piv = next((i for i in range(r, M.nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [red(x * inv) for x in A[r]]
        prow = A[r]
        for i in range(M.nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [red(a - f * b) for a, b in zip(A[i], prow)]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return A, pivots


def rank(M: Matrix) -> int:
    """Rank over ``M.field`` by forward elimination."""
    F = M.field
    red = F.reduce
    A = [list(r) for r in M.rows if any(x != 0 for x in r)]
    if not A:
        return 0
    rk = 0
    m = len(A)
    for c in range(M.ncols):
        piv = next((i for i in range(rk, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[rk], A[piv] = A[piv], A[rk]
        prow = A[rk]
        inv = F.inv(prow[c])
        for i in range(rk + 1, m):
            if A[i][c] != 0:
                f = red(A[i][c] * inv)
                A[i] = [red(a - f * b) for a, b in zip(A[i], prow)]
        rk += 1
        if rk == m:
            break
    return rk


def kernel_basis(M: Matrix) -> list[list]:
    """Basis of the right kernel {v : M v = 0}."""
    F = M.field
    R, pivots = rref(M)
    pivset = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivset:
            continue
        v = [F.zero] * M.ncols
        v[free] = F.one
        for row_idx, pc in enumerate(pivots):
            v[pc] = F.reduce(-R[row_idx][free])
        basis.append(v)
    return basis


def independent_rows(vectors: Sequence[Sequence], field) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order."""
    if not vectors:
        return []
    T = Matrix._raw(field, zip(*vectors), len(vectors))
    _, pivots = rref(T)
    return pivots


def solve(M: Matrix, b: Sequence) -> list:
    """Unique solution of M x = b for square invertible M."""
    if not M.is_square() or len(b) != M.nrows:
        raise ShapeError("solve needs a square system")
    F = M.field
    aug = Matrix._raw(F, [list(r) + [F(x)] for r, x in zip(M.rows, b)], M.ncols + 1)
    R, pivots = rref(aug)
    if pivots != list(range(M.ncols)):
        raise ZeroDivisionError("singular system")
    return [R[i][-1] for i in range(M.ncols)]


def determinant(M: Matrix):
    """Determinant by fraction-free (Bareiss) elimination."""
    if not M.is_square():
        raise ShapeError(f"determinant of non-square {M.shape} matrix")
    n = M.nrows
    F = M.field
    if n == 0:
        return F.one
    if isinstance(F, RationalField):
        # clear denominators row by row, then run Bareiss over Z
        scales = [lcm(*(x.denominator for x in r)) for r in M.rows]
        A = [[int(x * s) for x in r] for r, s in zip(M.rows, scales)]
        d = _bareiss(A, lambda a, b: a // b)
        return Fraction(d, _fold(lambda a, b: a * b, scales, 1))
    p = F.p
    A = [list(r) for r in M.rows]
    return _bareiss(A, lambda a, b: a * pow(b, -1, p) % p, reduce=lambda x: x % p)


def _bareiss(A, exact_div, reduce=lambda x: x):
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = reduce(exact_div(akk * row_i[j] - aik * row_k[j], prev))
        prev = akk
    return reduce(sign * A[n - 1][n - 1])


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise ShapeError("inverse of non-square matrix")
    n = M.nrows
    F = M.field
    aug = Matrix._raw(
        F,
        [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(M.rows)],
        2 * n,
    )
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix._raw(F, [row[n:] for row in R[:n]], n)


def adjugate(M: Matrix, method: str = "auto") -> Matrix:
    """Classical adjoint: cofactors for small sizes, det(M) M^{-1} otherwise.

    The inverse route needs M invertible; a singular M falls back to
    cofactors whatever the size.
    """
    if not M.is_square():
        raise ShapeError("adjugate of non-square matrix")
    n = M.nrows
    F = M.field
    if n == 0:
        return M
    if n == 1:
        return Matrix._raw(F, [[F.one]], 1)
    if method == "auto":
        method = "cofactor" if n <= 5 else "inverse"
    if method == "inverse":
        d = determinant(M)
        if d != 0:
            return inverse(M).scale(d)
    red = F.reduce
    rows = [
        [red((-1) ** (i + j) * determinant(M.minor_matrix(j, i))) for j in range(n)]
        for i in range(n)
    ]
    return Matrix._raw(F, rows, n)


def pfaffian(M: Matrix):
    """Pfaffian of a skew-symmetric matrix by skew congruence elimination.

    Each step pivots on a 2x2 block and passes to the trailing skew block;
    only unimodular congruences are used, so the Pfaffian is the product of
    the pivots up to the sign of the pivot transpositions.
    """
    if not M.is_square():
        raise ShapeError("Pfaffian of non-square matrix")
    if not M.is_skew():
        raise ContractError("Pfaffian requires a skew-symmetric matrix")
    F = M.field
    n = M.nrows
    if n % 2:
        return F.zero
    red = F.reduce
    A = [list(r) for r in M.rows]
    pf = F.one
    for k in range(0, n - 1, 2):
        piv = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
        if piv is None:
            return F.zero
        if piv != k + 1:
            t = k + 1
            A[t], A[piv] = A[piv], A[t]
            for row in A:
                row[t], row[piv] = row[piv], row[t]
            pf = red(-pf)
        a = A[k][k + 1]
        pf = red(pf * a)
        inv = F.inv(a)
        rk, rk1 = A[k], A[k + 1]
        for i in range(k + 2, n):
            alpha = red(rk[i] * inv)
            beta = red(A[i][k + 1] * inv)
            if alpha == 0 and beta == 0:
                continue
            row = A[i]
            for j in range(k + 2, n):
                row[j] = red(row[j] - alpha * rk1[j] - beta * rk[j])
    return pf


def principal_pfaffians(M: Matrix, order: int):
    """Yield (index subset, Pfaffian) over all principal submatrices of given even order."""
    if order % 2:
        raise PreconditionError("Pfaffian order must be even")
    for idx in combinations(range(M.nrows), order):
        yield idx, pfaffian(M.submatrix(idx, idx))


def vector_is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)
