"""Tensors in U (x) V (x) V' with dim U = 3, their contraction matrices and
the commutator identities relating them.

A tensor is stored through its three n x n slices, one per basis vector of U.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import ContractError, DegenerateError, PreconditionError, ShapeError
from .exactalg import Matrix, adjugate, determinant, inverse, rank
from .sampling import DEFAULT_RETRY_CAP, random_vector

SEGRE = "segre"
SEGRE_VERONESE = "segre-veronese"


class Tensor3:
    """A 3 x n x n tensor given by slices (P, Q, R)."""

    symmetric = False
    kind = SEGRE

    def __init__(self, slices: Sequence[Matrix]):
        if len(slices) != 3:
            raise ShapeError("a 3 x n x n tensor has exactly three slices")
        self.slices = tuple(slices)
        n = self.slices[0].nrows
        for s in self.slices:
            if s.shape != (n, n):
                raise ShapeError("slices must all be n x n")
            if s.field != self.slices[0].field:
                raise ShapeError("slices over different fields")
        self.n = n
        self.field = self.slices[0].field

    @classmethod
    def zero(cls, field, n: int):
        return cls([Matrix.zeros(field, n)] * 3)

    @property
    def P(self) -> Matrix:
        return self.slices[0]

    @property
    def Q(self) -> Matrix:
        return self.slices[1]

    @property
    def R(self) -> Matrix:
        return self.slices[2]

    def _like(self, slices):
        return type(self)(slices)

    def add(self, other: "Tensor3") -> "Tensor3":
        slices = [a + b for a, b in zip(self.slices, other.slices)]
        if type(self) is type(other):
            return self._like(slices)
        return Tensor3(slices)

    __add__ = add

    def scale(self, c) -> "Tensor3":
        return self._like([s.scale(c) for s in self.slices])

    def __eq__(self, other):
        return isinstance(other, Tensor3) and self.slices == other.slices

    def __hash__(self):
        return hash(self.slices)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, field={self.field!r})"

    def coordinates(self) -> list:
        """Flattened coordinates, index (a, i, j) -> a*n*n + i*n + j."""
        return [x for s in self.slices for row in s.rows for x in row]

    def to_json(self) -> dict:
        return {
            "kind": "sym" if self.symmetric else "segre",
            "n": self.n,
            "slices": [s.to_json() for s in self.slices],
        }


class SymTensor3(Tensor3):
    """Element of U (x) S^2 V: all three slices symmetric."""

    symmetric = True
    kind = SEGRE_VERONESE

    def __init__(self, slices: Sequence[Matrix]):
        super().__init__(slices)
        if not all(s.is_symmetric() for s in self.slices):
            raise ContractError("slices of a symmetric tensor must be symmetric")

    def congruence(self, g: Matrix) -> "SymTensor3":
        """The action of GL(V): every slice P goes to g P g^t."""
        gt = g.T
        return SymTensor3([g @ s @ gt for s in self.slices])

    def coordinates(self) -> list:
        """Coordinates on U (x) S^2 V: upper-triangle entries of each slice."""
        n = self.n
        return [s.rows[i][j] for s in self.slices for i in range(n) for j in range(i, n)]


@dataclass
class DecompSample:
    """A sum of decomposable tensors u(x)v(x)w (segre) or u(x)v^2 (segre-veronese)."""

    kind: str
    summands: list
    field: object = dc_field(repr=False)

    def __post_init__(self):
        if self.kind not in (SEGRE, SEGRE_VERONESE):
            raise ValueError(f"unknown sample kind {self.kind!r}")
        width = 3 if self.kind == SEGRE else 2
        for s in self.summands:
            if len(s) != width:
                raise ShapeError(f"{self.kind} summands have {width} factors")
            if len(s[0]) != 3:
                raise ShapeError("first factor lives in the 3-dimensional space U")
            if any(all(x == 0 for x in vec) for vec in s):
                raise PreconditionError("decomposable factors must be nonzero")
        ns = {len(vec) for s in self.summands for vec in s[1:]}
        if len(ns) > 1:
            raise ShapeError("inconsistent dimensions among summand factors")

    @property
    def n(self) -> int:
        return len(self.summands[0][1])

    @property
    def k(self) -> int:
        return len(self.summands)

    def to_json(self) -> dict:
        fmt = self.field.fmt
        return {
            "kind": "sym" if self.kind == SEGRE_VERONESE else "segre",
            "n": self.n,
            "summands": [[[fmt(x) for x in vec] for vec in s] for s in self.summands],
        }


def realize(sample: DecompSample) -> Tensor3:
    """Sum the summands into slices: slice a = sum_i u_i[a] * v_i w_i^t."""
    F = sample.field
    red = F.reduce
    n = sample.n
    acc = [[[F.zero] * n for _ in range(n)] for _ in range(3)]
    for s in sample.summands:
        u, v = s[0], s[1]
        w = s[2] if sample.kind == SEGRE else v
        for a in range(3):
            if u[a] == 0:
                continue
            block = acc[a]
            for i in range(n):
                c = u[a] * v[i]
                if c == 0:
                    continue
                row = block[i]
                for j in range(n):
                    row[j] = red(row[j] + c * w[j])
    slices = [Matrix._raw(F, block, n) for block in acc]
    return SymTensor3(slices) if sample.kind == SEGRE_VERONESE else Tensor3(slices)


def random_sample(kind: str, n: int, k: int, field, rng) -> DecompSample:
    summands = []
    for _ in range(k):
        u = random_vector(field, 3, rng)
        v = random_vector(field, n, rng)
        if kind == SEGRE:
            summands.append((u, v, random_vector(field, n, rng)))
        else:
            summands.append((u, v))
    return DecompSample(kind, summands, field)


def random_tensor(n: int, field, rng, symmetric: bool = False) -> Tensor3:
    slices = []
    for _ in range(3):
        if symmetric:
            M = [[field.zero] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    M[i][j] = M[j][i] = field.random(rng)
            slices.append(Matrix._raw(field, M, n))
        else:
            slices.append(Matrix.random(field, n, n, rng))
    return SymTensor3(slices) if symmetric else Tensor3(slices)


def _block_contraction(P: Matrix, Q: Matrix, R: Matrix) -> Matrix:
    Z = Matrix.zeros(P.field, P.nrows)
    return Matrix.blocks([[Z, P, Q], [-P, Z, R], [-Q, -R, Z]])


def contraction_segre(phi: Tensor3) -> Matrix:
    """The 3n x 3n matrix [[0, P, Q], [-P, 0, R], [-Q, -R, 0]]."""
    return _block_contraction(*phi.slices)


def contraction_sym(f: Tensor3) -> Matrix:
    """Same block layout for a symmetric tensor; the result is skew-symmetric."""
    if not all(s.is_symmetric() for s in f.slices):
        raise ContractError("symmetric contraction needs symmetric slices")
    S = _block_contraction(*f.slices)
    if not S.is_skew():  # pragma: no cover - guaranteed by the block layout
        raise ContractError("contraction failed to be skew-symmetric")
    return S


def contraction(t: Tensor3) -> Matrix:
    return contraction_sym(t) if t.symmetric else contraction_segre(t)


def strassen_commutator(P: Matrix, Q: Matrix, R: Matrix) -> Matrix:
    """P adj(Q) R - R adj(Q) P."""
    if not (P.is_square() and P.shape == Q.shape == R.shape):
        raise ShapeError("Strassen commutator needs three square matrices of equal size")
    A = adjugate(Q)
    return P @ A @ R - R @ A @ P


@dataclass
class CongruenceWitness:
    n: int
    det_Q: object
    det_contraction: object
    det_commutator: object
    three_factor_holds: bool
    scalar_holds: bool

    def __bool__(self):
        return self.three_factor_holds and self.scalar_holds


def check_congruence_identity(P: Matrix, Q: Matrix, R: Matrix) -> CongruenceWitness:
    """Verify the block congruence that reduces the contraction to Q and Z.

    With Z = P Q^{-1} R - R Q^{-1} P, left and right multiplication by unipotent
    block matrices turns [[0,P,Q],[-P,0,R],[-Q,-R,0]] into [[0,0,Q],[0,Z,R],
    [-Q,-R,0]]; the scalar consequence
    det(A) det(Q)^(n-2) = det(P adj(Q) R - R adj(Q) P) is checked as well.
    """
    F = P.field
    n = P.nrows
    dQ = determinant(Q)
    if dQ == 0:
        raise PreconditionError("Q must be invertible")
    Qi = inverse(Q)
    I = Matrix.identity(F, n)
    O = Matrix.zeros(F, n)
    PQi = P @ Qi
    QiP = Qi @ P
    left = Matrix.blocks([[I, O, O], [O, I, -PQi], [O, O, I]])
    right = Matrix.blocks([[I, O, O], [O, I, O], [O, -QiP, I]])
    A = contraction_segre(Tensor3([P, Q, R]))
    Z = PQi @ R - R @ QiP
    target = Matrix.blocks([[O, O, Q], [O, Z, R], [-Q, -R, O]])
    three = (left @ A @ right) == target
    dA = determinant(A)
    dC = determinant(strassen_commutator(P, Q, R))
    lhs = F.reduce(dA * dQ ** (n - 2)) if n >= 2 else F.div(dA, F.reduce(dQ ** (2 - n)))
    return CongruenceWitness(n, dQ, dA, dC, three, lhs == dC)


def witness_segre(lams: Sequence, mus: Sequence, field) -> Tensor3:
    """P = diag(lams), Q = I, R cyclic with R[i, i+1] = mus[i] (indices mod n)."""
    n = len(lams)
    if len(mus) != n:
        raise ShapeError("need n lambdas and n mus")
    R = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        R[i][(i + 1) % n] = field(mus[i])
    return Tensor3([Matrix.diagonal(field, lams), Matrix.identity(field, n), Matrix(field, R, n)])


def generic_witness_segre(n: int, field, rng, retry_cap: int = DEFAULT_RETRY_CAP) -> Tensor3:
    """Explicit tensor whose contraction has full rank 3n (n odd)."""
    if n < 3 or n % 2 == 0:
        raise PreconditionError("the Segre witness is defined for odd n >= 3")
    for _ in range(retry_cap):
        phi = witness_segre(random_vector(field, n, rng), random_vector(field, n, rng), field)
        if rank(contraction_segre(phi)) == 3 * n:
            return phi
    raise DegenerateError(f"no full-rank Segre witness after {retry_cap} draws")


def witness_sym(lams: Sequence, mus: Sequence, field) -> SymTensor3:
    """u1 (x) sum v_i^2 + u2 (x) sum lam_i v_i^2 + u3 (x) sum_{i<=h} mu_i (v_i + v_{i+h})^2."""
    n = len(lams)
    h = n // 2
    if n % 2 or len(mus) != h:
        raise ShapeError("need n (even) lambdas and n/2 mus")
    red = field.reduce
    R = [[field.zero] * n for _ in range(n)]
    for i in range(h):
        m = field(mus[i])
        for a in (i, i + h):
            for b in (i, i + h):
                R[a][b] = red(R[a][b] + m)
    return SymTensor3(
        [Matrix.identity(field, n), Matrix.diagonal(field, lams), Matrix._raw(field, R, n)]
    )


def generic_witness_sym(n: int, field, rng, retry_cap: int = DEFAULT_RETRY_CAP) -> SymTensor3:
    """Explicit symmetric tensor whose contraction has full rank 3n (n even)."""
    if n < 2 or n % 2:
        raise PreconditionError("the symmetric witness is defined for even n >= 2")
    for _ in range(retry_cap):
        f = witness_sym(random_vector(field, n, rng), random_vector(field, n // 2, rng), field)
        if rank(contraction_sym(f)) == 3 * n:
            return f
    raise DegenerateError(f"no full-rank symmetric witness after {retry_cap} draws")


def tensor_from_json(data: dict, field) -> Tensor3:
    """Parse {"kind", "n", "slices"} or {"kind", "summands"}."""
    kind = data.get("kind", "segre")
    if kind not in ("segre", "sym"):
        raise ValueError(f"unknown tensor kind {kind!r}")
    if "slices" in data:
        slices = [Matrix.from_json(field, s) for s in data["slices"]]
        t = SymTensor3(slices) if kind == "sym" else Tensor3(slices)
    elif "summands" in data:
        summands = [[[field.parse(str(x)) for x in vec] for vec in s] for s in data["summands"]]
        t = realize(DecompSample(SEGRE_VERONESE if kind == "sym" else SEGRE, summands, field))
    else:
        raise ValueError("tensor JSON needs 'slices' or 'summands'")
    if "n" in data and data["n"] != t.n:
        raise ShapeError(f"declared n={data['n']} but slices have size {t.n}")
    return t


def sample_from_json(data: dict, field) -> DecompSample:
    kind = SEGRE_VERONESE if data.get("kind", "segre") == "sym" else SEGRE
    summands = [[[field.parse(str(x)) for x in vec] for vec in s] for s in data["summands"]]
    return DecompSample(kind, summands, field)
