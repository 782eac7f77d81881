"""Plane curves as symmetric determinants of linear forms.

A symmetric tensor f in U (x) S^2 V gives an n x n symmetric matrix of
linear forms on the plane, entry (i, j) = sum_a f[a][i][j] x_a; its
determinant ``delta(f)`` is a curve of degree n.  Vectors u in U are read
as lines u(x) = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import DegenerateError, PreconditionError, ShapeError
from .exactalg import Matrix, determinant, rank
from .forms import LinearFormMatrix, TernaryForm, det_linear_matrix, monomials, product
from .sampling import DEFAULT_RETRY_CAP, make_rng, prime_field, run_pairs
from .secant import SEGRE_VERONESE, VarietySpec, terracini_dimension
from .tensor import DecompSample, SymTensor3, Tensor3, random_sample, realize

log = logging.getLogger(__name__)


def linear_matrix(f: Tensor3) -> LinearFormMatrix:
    return LinearFormMatrix.from_slices(f.slices, symmetric=f.symmetric)


def delta(f: Tensor3, rng=None, method: str = "auto") -> TernaryForm:
    """Determinant of the symmetric matrix of linear forms attached to f."""
    return det_linear_matrix(linear_matrix(f), rng=rng, method=method)


def line(u: Sequence, field) -> TernaryForm:
    return TernaryForm.linear(field, u)


def cross(a: Sequence, b: Sequence, field) -> list:
    red = field.reduce
    return [
        red(a[1] * b[2] - a[2] * b[1]),
        red(a[2] * b[0] - a[0] * b[2]),
        red(a[0] * b[1] - a[1] * b[0]),
    ]


@dataclass
class GonConfig:
    """A configuration of lines with their pairwise intersection points."""

    lines: list
    vertices: list
    pairs: list
    field: object

    @classmethod
    def from_lines(cls, lines: Sequence[Sequence], field, check: bool = True) -> "GonConfig":
        """Build from line coefficient vectors; vertex (p, q) is lines[p] x lines[q]."""
        pairs = list(combinations(range(len(lines)), 2))
        vertices = [cross(lines[p], lines[q], field) for p, q in pairs]
        gon = cls([list(l) for l in lines], vertices, pairs, field)
        if check and not gon.is_complete():
            raise DegenerateError("lines do not form a complete polygon")
        return gon

    def is_complete(self) -> bool:
        """All vertices defined and distinct, each on exactly two edges."""
        if any(all(x == 0 for x in v) for v in self.vertices):
            return False
        for v, (p, q) in zip(self.vertices, self.pairs):
            for idx, l in enumerate(self.lines):
                if idx in (p, q):
                    continue
                if line(l, self.field).evaluate(v) == 0:
                    return False
        return True

    def edges(self) -> list[TernaryForm]:
        return [line(l, self.field) for l in self.lines]

    def to_json(self) -> dict:
        fmt = self.field.fmt
        return {
            "edges": [line(l, self.field).to_json() for l in self.lines],
            "vertices": [[fmt(x) for x in v] for v in self.vertices],
        }


def gon_from_json(data: dict, field, check: bool = True) -> GonConfig:
    """Accept {"lines": [[a, b, c], ...]} or the {"edges": [...]} form written by ``to_json``."""
    if "lines" in data:
        lines = [[field.parse(str(x)) for x in l] for l in data["lines"]]
    elif "edges" in data:
        forms = [TernaryForm.from_json(field, e) for e in data["edges"]]
        lines = [[t.coefficient(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] for t in forms]
    else:
        raise ValueError("gon JSON needs 'lines' or 'edges'")
    return GonConfig.from_lines(lines, field, check=check)


@dataclass
class CurveWithGon:
    curve: TernaryForm
    gon: GonConfig
    sample: DecompSample
    incidence: list

    @property
    def inscribed(self) -> bool:
        return all(self.incidence) and not self.curve.is_zero()

    def to_json(self) -> dict:
        out = {"curve": self.curve.to_json(), **self.gon.to_json()}
        out["incidence"] = list(self.incidence)
        out["inscribed"] = self.inscribed
        return out


def lines_check(sample: DecompSample, rng=None) -> bool:
    """For n summands u_i (x) v_i^2, delta is proportional to the product of the lines u_i."""
    if sample.kind != SEGRE_VERONESE:
        raise PreconditionError("lines check needs a symmetric sample")
    if sample.k != sample.n:
        raise PreconditionError("lines check needs exactly n summands")
    F = sample.field
    curve = delta(realize(sample), rng=rng)
    lines = product((line(u, F) for u, _ in sample.summands), F)
    return not curve.is_zero() and curve.proportional_to(lines)


def darboux_certificate(sample: DecompSample, rng=None) -> CurveWithGon:
    """Curve of n+1 summands together with the polygon cut out by the u_i."""
    if sample.kind != SEGRE_VERONESE:
        raise PreconditionError("Darboux certificate needs a symmetric sample")
    if sample.k != sample.n + 1:
        raise PreconditionError("Darboux certificate needs n+1 summands")
    F = sample.field
    gon = GonConfig.from_lines([u for u, _ in sample.summands], F)
    curve = delta(realize(sample), rng=rng)
    if curve.is_zero():
        log.warning("sample lies in the indeterminacy locus: delta vanishes identically")
    incidence = [curve.evaluate(v) == 0 for v in gon.vertices]
    return CurveWithGon(curve, gon, sample, incidence)


def random_darboux_sample(n: int, field, rng, retry_cap: int = DEFAULT_RETRY_CAP) -> DecompSample:
    for _ in range(retry_cap):
        sample = random_sample(SEGRE_VERONESE, n, n + 1, field, rng)
        if GonConfig.from_lines([u for u, _ in sample.summands], field, check=False).is_complete():
            return sample
    raise DegenerateError("could not draw a complete polygon")


def gon_matrix(lines: Sequence[TernaryForm]) -> LinearFormMatrix:
    """diag(l_1, ..., l_n) + l_{n+1} * (all-ones matrix)."""
    *ls, last = lines
    n = len(ls)
    zero = TernaryForm.zero(last.field, 1)
    entries = [[(ls[i] if i == j else zero) + last for j in range(n)] for i in range(n)]
    return LinearFormMatrix(entries, symmetric=True)


def gon_sum(lines: Sequence[TernaryForm]) -> TernaryForm:
    """Sum over i of the product of all lines except the i-th."""
    F = lines[0].field
    total = TernaryForm.zero(F, len(lines) - 1)
    for i in range(len(lines)):
        total = total + product((l for j, l in enumerate(lines) if j != i), F)
    return total


def gon_matrix_curve(lines: Sequence[TernaryForm], rng=None) -> TernaryForm:
    """Determinant of the polygon matrix; checked against the symmetric-function expansion."""
    if len(lines) < 2:
        raise PreconditionError("need at least two lines")
    det = det_linear_matrix(gon_matrix(lines), rng=rng)
    if det != gon_sum(lines):
        raise ArithmeticError("polygon determinant differs from its expansion")
    return det


def gon_tensor(line_vectors: Sequence[Sequence], field) -> SymTensor3:
    """The symmetric tensor sum_i l_i (x) e_i^2 + l_{n+1} (x) (sum e_i)^2 realizing the polygon matrix."""
    *ls, last = line_vectors
    n = len(ls)
    one, zero = field.one, field.zero
    summands = [(list(l), [one if j == i else zero for j in range(n)]) for i, l in enumerate(ls)]
    summands.append((list(last), [one] * n))
    return realize(DecompSample(SEGRE_VERONESE, summands, field))


def evaluation_matrix(points: Sequence[Sequence], degree: int, field) -> Matrix:
    """Rows: monomials of the degree; columns: points."""
    monos = monomials(degree)
    red = field.reduce
    return Matrix._raw(
        field,
        [[red(p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2]) for p in points] for e in monos],
        len(points),
    )


def independent_conditions(gon: GonConfig, n: int) -> int:
    """Rank of the conditions the polygon vertices impose on curves of degree n."""
    if len(gon.lines) != n + 1:
        raise ShapeError("expected an (n+1)-gon")
    return rank(evaluation_matrix(gon.vertices, n, gon.field))


def curves_through_vertices(gon: GonConfig, n: int) -> int:
    """Dimension of the space of degree-n forms through all vertices."""
    return comb(n + 2, 2) - independent_conditions(gon, n)


def delta_equivariance(f: SymTensor3, g: Matrix, rng=None) -> bool:
    """delta(g f g^t) == det(g)^2 delta(f), coefficient by coefficient."""
    dg = determinant(g)
    if dg == 0:
        raise PreconditionError("g must be invertible")
    lhs = delta(f.congruence(g), rng=rng)
    rhs = delta(f, rng=rng).scale(f.field.reduce(dg * dg))
    return lhs == rhs


def stabilizer_equations(f: Tensor3) -> Matrix:
    """Linear conditions on A (row-major n^2 unknowns): A P + P A^t = 0 per slice, trace A = 0."""
    F = f.field
    n = f.n
    red = F.reduce
    rows = []
    for P in f.slices:
        for i in range(n):
            for j in range(i, n):
                # (A P + P A^t)[i][j] = sum_k A[i][k] P[k][j] + P[i][k] A[j][k]
                row = [F.zero] * (n * n)
                for k in range(n):
                    row[i * n + k] = red(row[i * n + k] + P.rows[k][j])
                    row[j * n + k] = red(row[j * n + k] + P.rows[i][k])
                rows.append(row)
    rows.append([F.one if i == j else F.zero for i in range(n) for j in range(n)])
    return Matrix._raw(F, rows, n * n)


def infinitesimal_stabilizer_dim(f: Tensor3) -> int:
    """Dimension of the Lie algebra of the SL(V)-stabilizer of f."""
    n = f.n
    return n * n - rank(stabilizer_equations(f))


def cauchy_binet_side(r: Sequence[TernaryForm], H: Matrix) -> TernaryForm:
    """Sum over n-subsets I of det(H_I)^2 * prod_{j in I} r_j."""
    F = H.field
    k, n = H.shape
    total = TernaryForm.zero(F, n)
    for I in combinations(range(k), n):
        m = determinant(H.submatrix(I, range(n)))
        if m == 0:
            continue
        total = total + product((r[j] for j in I), F).scale(F.reduce(m * m))
    return total


def jumping_expansion(r: Sequence, H: Matrix, rng=None) -> tuple[TernaryForm, TernaryForm]:
    """Both sides of delta(sum_i r_i (x) h_i^2) = sum_I h_I^2 prod_{j in I} r_j."""
    F = H.field
    k, n = H.shape
    r = [x if isinstance(x, TernaryForm) else line(x, F) for x in r]
    if len(r) != k:
        raise ShapeError("need one linear form per row of H")
    if k < n:
        log.warning("k < n: both sides vanish identically")
        zero = TernaryForm.zero(F, n)
        return zero, zero
    summands = [([r_i.coefficient(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))], list(H.rows[i]))
                for i, r_i in enumerate(r)]
    f = _realize_allow_zero(summands, F, n)
    return delta(f, rng=rng), cauchy_binet_side(r, H)


def _realize_allow_zero(summands, field, n) -> SymTensor3:
    # rows of H may vanish; sum them directly instead of via DecompSample
    red = field.reduce
    acc = [[[field.zero] * n for _ in range(n)] for _ in range(3)]
    for u, h in summands:
        for a in range(3):
            for i in range(n):
                for j in range(n):
                    acc[a][i][j] = red(acc[a][i][j] + u[a] * h[i] * h[j])
    return SymTensor3([Matrix._raw(field, blk, n) for blk in acc])


@dataclass
class DarbouxLocusReport:
    n: int
    secant_projective_dim: int
    stabilizer_dim: int
    group_dim: int
    locus_dim: int
    expected: int
    status: str

    @property
    def passed(self) -> bool:
        return self.status == "ok" and self.locus_dim == self.expected


def darboux_locus_expected(n: int) -> int:
    return 13 if n == 4 else 3 * n + 2


def darboux_locus_dims(n: int, primes=None, seeds=None, rng=None) -> DarbouxLocusReport:
    """Dimension of the image under delta of the (n+1)-th secant.

    Generic fibres of delta are SL(V)-orbits; they have dimension n^2 - 1 when
    the stabilizer of a generic point of the secant is finite.
    """
    if n < 4:
        raise PreconditionError("the Darboux locus is considered for n >= 4")
    report = terracini_dimension(VarietySpec(SEGRE_VERONESE, n), n + 1, primes, seeds)
    p, s = run_pairs(primes, seeds)[0]
    F = prime_field(p)
    rng = rng or make_rng(p, s, "darboux-stabilizer")
    stab = infinitesimal_stabilizer_dim(realize(random_sample(SEGRE_VERONESE, n, n + 1, F, rng)))
    group = n * n - 1 - stab
    return DarbouxLocusReport(
        n=n,
        secant_projective_dim=report.projective_dim,
        stabilizer_dim=stab,
        group_dim=n * n - 1,
        locus_dim=report.projective_dim - group,
        expected=darboux_locus_expected(n),
        status=report.status,
    )
