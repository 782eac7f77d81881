"""Ternary forms, matrices of linear forms and their determinants."""

from __future__ import annotations

import random
from typing import Callable, Iterable, Sequence

from .errors import DegenerateError, ShapeError
from .exactalg import Matrix, determinant, rank, solve

Exponent = tuple[int, int, int]


def monomials(degree: int) -> list[Exponent]:
    """Exponent triples of the given degree, graded lex with x > y > z."""
    return [(i, j, degree - i - j) for i in range(degree, -1, -1) for j in range(degree - i, -1, -1)]


class TernaryForm:
    """Homogeneous polynomial in x, y, z with exact coefficients.

    Coefficients live in a dict keyed by exponent triple; zero coefficients
    are never stored.  Two forms compare equal when field, degree and
    coefficients agree.
    """

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field, degree: int, coeffs: dict | None = None):
        self.field = field
        self.degree = degree
        clean = {}
        for e, c in (coeffs or {}).items():
            if sum(e) != degree or min(e) < 0:
                raise ShapeError(f"exponent {e} does not have degree {degree}")
            c = field(c)
            if c != 0:
                clean[tuple(e)] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, field, degree, coeffs):
        f = object.__new__(cls)
        f.field = field
        f.degree = degree
        f.coeffs = {e: c for e, c in coeffs.items() if c != 0}
        return f

    @classmethod
    def zero(cls, field, degree: int) -> "TernaryForm":
        return cls._raw(field, degree, {})

    @classmethod
    def constant(cls, field, c) -> "TernaryForm":
        return cls(field, 0, {(0, 0, 0): c})

    @classmethod
    def linear(cls, field, coeffs: Sequence) -> "TernaryForm":
        """The linear form c0*x + c1*y + c2*z."""
        a, b, c = coeffs
        return cls(field, 1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, TernaryForm)
            and self.field == other.field
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return f"0 (degree {self.degree})"
        terms = []
        for e in monomials(self.degree):
            if e in self.coeffs:
                mono = "*".join(
                    v if k == 1 else f"{v}^{k}" for v, k in zip("xyz", e) if k
                ) or "1"
                terms.append(f"{self.field.fmt(self.coeffs[e])}*{mono}")
        return " + ".join(terms)

    def coefficient(self, e: Exponent):
        return self.coeffs.get(tuple(e), self.field.zero)

    def coefficient_vector(self) -> list:
        return [self.coefficient(e) for e in monomials(self.degree)]

    def __add__(self, other: "TernaryForm") -> "TernaryForm":
        if self.degree != other.degree:
            raise ShapeError(f"cannot add forms of degree {self.degree} and {other.degree}")
        red = self.field.reduce
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = red(out.get(e, 0) + c)
        return TernaryForm._raw(self.field, self.degree, out)

    def __neg__(self) -> "TernaryForm":
        red = self.field.reduce
        return TernaryForm._raw(self.field, self.degree, {e: red(-c) for e, c in self.coeffs.items()})

    def __sub__(self, other: "TernaryForm") -> "TernaryForm":
        return self + (-other)

    def scale(self, c) -> "TernaryForm":
        c = self.field(c)
        red = self.field.reduce
        return TernaryForm._raw(self.field, self.degree, {e: red(c * v) for e, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, TernaryForm):
            return self.scale(other)
        red = self.field.reduce
        out: dict = {}
        for (a, b, c), u in self.coeffs.items():
            for (d, e, f), v in other.coeffs.items():
                key = (a + d, b + e, c + f)
                out[key] = out.get(key, 0) + u * v
        return TernaryForm._raw(
            self.field, self.degree + other.degree, {k: red(v) for k, v in out.items()}
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TernaryForm":
        out = TernaryForm.constant(self.field, 1)
        for _ in range(k):
            out = out * self
        return out

    def leading(self) -> tuple[Exponent, object] | None:
        for e in monomials(self.degree):
            if e in self.coeffs:
                return e, self.coeffs[e]
        return None

    def exact_div(self, other: "TernaryForm") -> "TernaryForm":
        """Quotient self / other; raises ArithmeticError if the division is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero form")
        qdeg = self.degree - other.degree
        if self.is_zero():
            return TernaryForm.zero(self.field, max(qdeg, 0))
        if qdeg < 0:
            raise ArithmeticError("divisor has larger degree")
        F = self.field
        lt_e, lt_c = other.leading()
        inv = F.inv(lt_c)
        rem = self
        quot: dict = {}
        while not rem.is_zero():
            e, c = rem.leading()
            q_e = tuple(a - b for a, b in zip(e, lt_e))
            if min(q_e) < 0:
                raise ArithmeticError("division is not exact")
            q_c = F.reduce(c * inv)
            quot[q_e] = q_c
            rem = rem - other * TernaryForm._raw(F, qdeg, {q_e: q_c})
        return TernaryForm._raw(F, qdeg, quot)

    def evaluate(self, point: Sequence):
        F = self.field
        x, y, z = (F(t) for t in point)
        total = F.zero
        for (a, b, c), v in self.coeffs.items():
            total += v * x**a * y**b * z**c
        return F.reduce(total)

    def normalized(self) -> "TernaryForm":
        """Scale so that the first nonzero coefficient (monomial order) is 1."""
        lead = self.leading()
        if lead is None:
            return self
        return self.scale(self.field.inv(lead[1]))

    def proportional_to(self, other: "TernaryForm") -> bool:
        if self.degree != other.degree:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.normalized() == other.normalized()

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [
                [*e, self.field.fmt(self.coeffs[e])] for e in monomials(self.degree) if e in self.coeffs
            ],
        }

    @classmethod
    def from_json(cls, field, data: dict) -> "TernaryForm":
        return cls(
            field,
            data["degree"],
            {(i, j, k): field.parse(str(c)) for i, j, k, c in data["coeffs"]},
        )


def variables(field) -> tuple[TernaryForm, TernaryForm, TernaryForm]:
    return tuple(TernaryForm.linear(field, row) for row in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def product(forms: Iterable[TernaryForm], field) -> TernaryForm:
    out = TernaryForm.constant(field, 1)
    for f in forms:
        out = out * f
    return out


class LinearFormMatrix:
    """Square matrix whose entries are linear forms in x, y, z."""

    def __init__(self, entries: Sequence[Sequence[TernaryForm]], symmetric: bool = False):
        self.entries = tuple(tuple(r) for r in entries)
        self.size = len(self.entries)
        if any(len(r) != self.size for r in self.entries):
            raise ShapeError("linear form matrix must be square")
        if any(e.degree != 1 for r in self.entries for e in r):
            raise ShapeError("entries must be linear forms")
        self.field = self.entries[0][0].field if self.size else None
        self.symmetric = symmetric
        if symmetric and any(
            self.entries[i][j] != self.entries[j][i] for i in range(self.size) for j in range(i)
        ):
            raise ShapeError("symmetric flag set on a non-symmetric matrix")

    @classmethod
    def from_slices(cls, slices: Sequence[Matrix], symmetric: bool = False) -> "LinearFormMatrix":
        """Entry (i, j) is sum_a slices[a][i, j] * x_a."""
        field = slices[0].field
        n = slices[0].nrows
        entries = [
            [TernaryForm.linear(field, [s[i, j] for s in slices]) for j in range(n)] for i in range(n)
        ]
        return cls(entries, symmetric=symmetric)

    def evaluate(self, point: Sequence) -> Matrix:
        return Matrix(self.field, [[e.evaluate(point) for e in r] for r in self.entries], self.size)


def det_bareiss_symbolic(M: LinearFormMatrix) -> TernaryForm:
    """Determinant by Bareiss elimination inside the polynomial ring."""
    n = M.size
    F = M.field
    if n == 0:
        return TernaryForm.constant(F, 1)
    A = [list(r) for r in M.entries]
    sign = 1
    prev = TernaryForm.constant(F, 1)
    for k in range(n - 1):
        if A[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if piv is None:
                return TernaryForm.zero(F, n)
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (akk * A[i][j] - A[i][k] * A[k][j]).exact_div(prev)
        prev = akk
    out = A[n - 1][n - 1]
    if out.is_zero():
        return TernaryForm.zero(F, n)
    return out if sign == 1 else -out


def det_interpolate(M: LinearFormMatrix, rng, retries: int = 5) -> TernaryForm:
    """Determinant recovered from its values at random points.

    Uses C(n+2, 2) nodes, one per monomial, and solves the evaluation
    system exactly.  A singular node set is resampled.
    """
    n = M.size
    F = M.field
    monos = monomials(n)
    for _ in range(retries):
        nodes = [[F.random(rng) for _ in range(3)] for _ in monos]
        V = Matrix(F, [[_monomial_value(F, e, p) for e in monos] for p in nodes], len(monos))
        if rank(V) < len(monos):
            continue
        values = [determinant(M.evaluate(p)) for p in nodes]
        coeffs = solve(V, values)
        return TernaryForm(F, n, dict(zip(monos, coeffs)))
    raise DegenerateError(f"interpolation nodes singular after {retries} attempts")


def _monomial_value(F, e, p):
    return F.reduce(F(p[0]) ** e[0] * F(p[1]) ** e[1] * F(p[2]) ** e[2])


def det_linear_matrix(M: LinearFormMatrix, rng=None, method: str = "auto") -> TernaryForm:
    """Determinant of a matrix of linear forms, a form of degree ``M.size``.

    ``method`` is "symbolic", "interpolate" or "auto"; auto runs both up to
    size 6 and insists they agree, interpolation alone above that.
    """
    if method == "symbolic":
        return det_bareiss_symbolic(M)
    rng = rng or random.Random(M.size)
    if method == "interpolate":
        return det_interpolate(M, rng)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    interp = det_interpolate(M, rng)
    if M.size <= 6:
        sym = det_bareiss_symbolic(M)
        if sym != interp:
            raise ArithmeticError("symbolic and interpolated determinants disagree")
    return interp


def restrict_to_pencil(
    func: Callable, f0, f1, degree_bound: int, extra_checks: int = 2
) -> int:
    """Degree in t of func(f0 + t*f1), by exact univariate interpolation.

    ``f0`` and ``f1`` are linear objects exposing ``field``, ``add`` and
    ``scale`` (matrices, tensors).  The interpolant of degree at most
    ``degree_bound`` is confirmed at ``extra_checks`` further nodes.
    """
    F = f0.field
    nodes = list(range(degree_bound + 1 + extra_checks))
    values = [F(func(f0.add(f1.scale(t)))) for t in nodes]
    fit_nodes = nodes[: degree_bound + 1]
    coeffs = _newton_coefficients(F, fit_nodes, values[: degree_bound + 1])
    for t, v in zip(nodes[degree_bound + 1 :], values[degree_bound + 1 :]):
        if _newton_eval(F, fit_nodes, coeffs, t) != v:
            raise ArithmeticError("restriction exceeds the stated degree bound")
    poly = _newton_to_monomial(F, fit_nodes, coeffs)
    deg = max((i for i, c in enumerate(poly) if c != 0), default=None)
    if deg is None:
        raise DegenerateError("restriction to the pencil is identically zero")
    return deg


def _newton_coefficients(F, xs, ys):
    c = [F(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            c[i] = F.div(F.reduce(c[i] - c[i - 1]), F(xs[i] - xs[i - j]))
    return c


def _newton_eval(F, xs, coeffs, t):
    acc = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        acc = F.reduce(acc * (t - xs[i]) + coeffs[i])
    return acc


def _newton_to_monomial(F, xs, coeffs):
    poly = [coeffs[-1]]
    for i in range(len(coeffs) - 2, -1, -1):
        # poly * (t - xs[i]) + coeffs[i]
        shifted = [F.zero] + poly
        for k in range(len(poly)):
            shifted[k] = F.reduce(shifted[k] - xs[i] * poly[k])
        shifted[0] = F.reduce(shifted[0] + coeffs[i])
        poly = shifted
    return poly
