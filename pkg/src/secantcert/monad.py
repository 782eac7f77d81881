"""Section spaces of the Barth monad V^ (x) Omega^1(2) -> V (x) O(1) on the plane.

A global section of Omega^1(d) is realized, through the Euler sequence, as a
triple (g_1, g_2, g_3) of forms of degree d-1 with sum_a x_a g_a = 0.  The
morphism Omega^1(d) -> O(d-1) attached to u in U sends such a triple to
sum_a u_a g_a, and a symmetric tensor f = sum_a e_a (x) P_a acts on
V^ (x) H^0(Omega^1(d)) by e_j^ (x) g |-> sum_a P_a e_j (x) g_a.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import ContractError, PreconditionError
from .exactalg import Matrix, kernel_basis, rank
from .forms import TernaryForm, monomials
from .sampling import random_vector
from .tensor import SEGRE_VERONESE, DecompSample, SymTensor3, Tensor3, random_sample, realize

# Volume-form basis of H^0(Omega^1(2)) ~ wedge^2 U^ and the matching ordered,
# signed basis of H^0(O(1)); with these the section map is literally the
# block matrix [[0, P, Q], [-P, 0, R], [-Q, -R, 0]].
_WEDGE_BASIS = (
    ((0, 1, 0), (-1, 0, 0), (0, 0, 0)),  # (y, -x, 0)
    ((0, 0, 1), (0, 0, 0), (-1, 0, 0)),  # (z, 0, -x)
    ((0, 0, 0), (0, 0, 1), (0, -1, 0)),  # (0, z, -y)
)
_LINEAR_TARGET = (((0, 0, 1), 1), ((0, 1, 0), -1), ((1, 0, 0), 1))


@dataclass
class EulerSections:
    """Basis of ker(U^ (x) S^{d-1} U^ -> S^d U^), i.e. of H^0(Omega^1(d))."""

    d: int
    basis: list
    field: object

    def __len__(self):
        return len(self.basis)

    def products(self) -> list[TernaryForm]:
        """sum_a x_a g_a for each basis element; all of them vanish."""
        xs = [TernaryForm.linear(self.field, row) for row in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
        out = []
        for g in self.basis:
            total = TernaryForm.zero(self.field, self.d)
            for x, ga in zip(xs, g):
                total = total + x * ga
            out.append(total)
        return out


def multiplication_matrix(d: int, field) -> Matrix:
    """Matrix of U^ (x) S^{d-1} U^ -> S^d U^; column (a, m) has index a*len + m."""
    src = monomials(d - 1)
    tgt = {e: i for i, e in enumerate(monomials(d))}
    cols = []
    for a in range(3):
        for m in src:
            e = list(m)
            e[a] += 1
            col = [field.zero] * len(tgt)
            col[tgt[tuple(e)]] = field.one
            cols.append(col)
    return Matrix._raw(field, zip(*cols), len(cols))


def euler_sections(d: int, field) -> EulerSections:
    if d not in (2, 3):
        raise PreconditionError("Euler sections are implemented for twists 2 and 3")
    if d == 2:
        basis = [tuple(TernaryForm.linear(field, g) for g in elem) for elem in _WEDGE_BASIS]
        return EulerSections(2, basis, field)
    src = monomials(d - 1)
    basis = []
    for vec in kernel_basis(multiplication_matrix(d, field)):
        parts = []
        for a in range(3):
            chunk = vec[a * len(src) : (a + 1) * len(src)]
            parts.append(TernaryForm(field, d - 1, dict(zip(src, chunk))))
        basis.append(tuple(parts))
    return EulerSections(d, basis, field)


def _section_map(f: Tensor3, sections: EulerSections, target: Sequence) -> Matrix:
    F = f.field
    red = F.reduce
    n = f.n
    ns, nt = len(sections), len(target)
    rows = [[F.zero] * (ns * n) for _ in range(nt * n)]
    for s, g in enumerate(sections.basis):
        for t, (mono, sign) in enumerate(target):
            weights = [red(sign * g[c].coefficient(mono)) for c in range(3)]
            if not any(weights):
                continue
            for i in range(n):
                row = rows[t * n + i]
                for j in range(n):
                    row[s * n + j] = red(sum(w * P.rows[i][j] for w, P in zip(weights, f.slices)))
    return Matrix._raw(F, rows, ns * n)


def h0_f(f: Tensor3) -> Matrix:
    """H^0 of the monad map: V^ (x) H^0(Omega^1(2)) -> V (x) H^0(O(1)), a 3n x 3n matrix."""
    return _section_map(f, euler_sections(2, f.field), _LINEAR_TARGET)


def h0_f1(f: Tensor3, sections: EulerSections | None = None) -> Matrix:
    """H^0 of the twisted map: V^ (x) H^0(Omega^1(3)) (8n) -> V (x) S^2 U^ (6n)."""
    sections = sections or euler_sections(3, f.field)
    return _section_map(f, sections, [(m, 1) for m in monomials(2)])


@dataclass
class MonadReport:
    n: int
    r: int
    rank_h0f: int
    dimker_h0f1: int
    h0E1: int
    krn_member: bool
    stability_violation: bool = False

    def to_json(self) -> dict:
        return asdict(self)


def brill_noether(f: Tensor3, r: int) -> MonadReport:
    """h^0(E(1)) = dim ker H^0(f(1)) - 3(n - r) together with the rank of H^0(f)."""
    n = f.n
    if r % 2 or r < 0 or r > n:
        raise PreconditionError("r must be even with 0 <= r <= n")
    rk = rank(h0_f(f))
    dimker = 8 * n - rank(h0_f1(f))
    h0E1 = dimker - 3 * (n - r)
    return MonadReport(
        n=n,
        r=r,
        rank_h0f=rk,
        dimker_h0f1=dimker,
        h0E1=h0E1,
        krn_member=rk == 2 * n + r,
        stability_violation=h0E1 < 0,
    )


def secant_tensor(n: int, k: int, field, rng) -> SymTensor3:
    return realize(random_sample(SEGRE_VERONESE, n, k, field, rng))


def brill_noether_generic(n: int, r: int, field, rng) -> MonadReport:
    """Report for a random point of the (n + r/2)-th secant."""
    return brill_noether(secant_tensor(n, n + r // 2, field, rng), r)


def four_term_check(u: Sequence, v: Sequence, field) -> bool:
    """For f = u (x) v^2 the twisted section map has image of dimension exactly 5."""
    if all(x == 0 for x in u) or all(x == 0 for x in v):
        raise PreconditionError("u and v must be nonzero")
    f = realize(DecompSample(SEGRE_VERONESE, [(list(u), list(v))], field))
    return rank(h0_f1(f)) == 5


def commutator(P: Matrix, Q: Matrix) -> Matrix:
    if not (P.is_symmetric() and Q.is_symmetric()):
        raise ContractError("commutator rank is defined for symmetric matrices")
    C = P @ Q - Q @ P
    if not C.is_skew():  # pragma: no cover - algebraic identity
        raise ContractError("commutator of symmetric matrices must be skew")
    return C


def commutator_rank(P: Matrix, Q: Matrix) -> int:
    return rank(commutator(P, Q))


def random_symmetric(n: int, field, rng) -> Matrix:
    M = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = field.random(rng)
    return Matrix._raw(field, M, n)


def low_rank_commutator_pair(n: int, r: int, field, rng) -> tuple[Matrix, Matrix]:
    """Symmetric P, Q with rank [P, Q] <= r: a generic r x r block plus commuting diagonals."""
    if r > n:
        raise PreconditionError("r must not exceed n")

    def build(block):
        diag = random_vector(field, n - r, rng)
        M = [[field.zero] * n for _ in range(n)]
        for i in range(r):
            for j in range(r):
                M[i][j] = block.rows[i][j]
        for i, d in enumerate(diag):
            M[r + i][r + i] = d
        return Matrix._raw(field, M, n)

    return build(random_symmetric(r, field, rng)), build(random_symmetric(r, field, rng))


# -- closed-form counts -----------------------------------------------------


def plane_curve_genus(n: int) -> int:
    return comb(n - 1, 2)


def even_theta_count(n: int) -> int:
    """Theta characteristics with no sections on a general plane curve of degree n."""
    g = plane_curve_genus(n)
    base = 2 ** (g - 1) * (2**g + 1)
    if n % 2 == 1 and n % 8 in (1, 7):
        return base - 1
    return base


def odd_theta_count(g: int) -> int:
    return 2 ** (g - 1) * (2**g - 1)


def barth_product(g: int) -> int:
    """(degree of the Barth map) x (degree of its image) when not in the theta locus."""
    if g < 2:
        raise PreconditionError("the product formula needs g >= 2")
    return 3 * 2 ** (g - 2) * (2**g + 1)


def symplectic_moduli_dim(r: int, n: int) -> int:
    return (r + 2) * n - comb(r + 1, 2)


def moduli_dim(r: int, n: int) -> int:
    return 2 * r * n - r * r + 1


def barth_image_codim(r: int, n: int) -> int:
    return comb(n - r, 2)


def jumping_family_dim(n: int) -> int:
    if n % 2:
        raise PreconditionError("the jumping family is defined for even n")
    k = 3 * n // 2 - 1
    return k * (n + 2) - 1 - (3 * comb(n + 1, 2) - 2)


def pirola_h0(h: int) -> int:
    if h < 3:
        raise PreconditionError("Pirola's curves need h >= 3")
    return 1 + comb(h - 1, 2)


def brill_noether_tangent_bound(r: int, n: int) -> int:
    # n(2 + r/2) + (3r^2 - 2r)/4, exact for even r
    return int(n * (2 + Fraction(r, 2)) + Fraction(3 * r * r - 2 * r, 4))


def darboux_image_dim(r: int, n: int) -> int:
    return n * (2 + r // 2) + r


def pullback_degree(n: int, hypersurface_degree: int) -> int:
    return n * hypersurface_degree


def numerology(n: int, r: int | None = None) -> dict:
    """All closed-form counts applicable to (n, r)."""
    if n < 3:
        raise PreconditionError("n >= 3 is required")
    g = plane_curve_genus(n)
    out: dict = {"n": n, "genus": g, "theta_even_h0_zero": even_theta_count(n)}
    out["theta_odd"] = odd_theta_count(g)
    if g >= 2:
        out["barth_product"] = barth_product(g)
    out["darboux_locus_dim"] = 13 if n == 4 else 3 * n + 2
    if n % 2 == 0:
        out["pfaffian_degree"] = 3 * n // 2
        out["jumping_family_dim"] = jumping_family_dim(n)
        out["jumping_family_dim_closed_form"] = n // 2 - 1
        if n >= 6:
            h = n // 2
            out["pirola_h0"] = pirola_h0(h)
            out["pirola_parity"] = "even" if h % 4 in (0, 3) else "odd"
    if n == 4:
        out["luroth_degree"] = 54
        out["luroth_pullback_degree"] = pullback_degree(n, 54)
    if r is not None:
        if r % 2 or r < 2 or r > n:
            raise PreconditionError("r must be even with 2 <= r <= n")
        out["r"] = r
        out["msp_dim"] = symplectic_moduli_dim(r, n)
        out["m_dim"] = moduli_dim(r, n)
        out["barth_image_codim"] = barth_image_codim(r, n)
        out["barth_image_codim_alt"] = 1 + (n + 1 - r) * (n - 2 - r) // 2
        out["chi_E1"] = 3 * r - n
        out["hulsbergen_bound"] = r // 2
        out["hulsbergen_meaningful"] = 2 * n > 5 * r
        out["bn_tangent_bound"] = brill_noether_tangent_bound(r, n)
        out["darboux_image_dim"] = darboux_image_dim(r, n)
        out["bn_matches_secant_image"] = out["bn_tangent_bound"] == out["darboux_image_dim"]
    return out
