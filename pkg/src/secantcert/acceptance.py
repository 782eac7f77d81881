"""Acceptance checks: every rank, dimension and identity claim, run exactly.

Each ``criterion_*`` function returns a :class:`CriterionResult`; the CLI
``all-acceptance`` command and ``tests/test_acceptance.py`` both drive them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Callable, Sequence

from . import curves, monad
from .exactalg import QQ, Matrix, determinant, pfaffian, rank
from .forms import TernaryForm
from .sampling import make_rng, prime_field, random_vector, run_pairs
from .secant import (
    SEGRE,
    SEGRE_VERONESE,
    VarietySpec,
    pfaffian_hypersurface_check,
    terracini_dimension,
)
from .tensor import (
    check_congruence_identity,
    contraction_segre,
    contraction_sym,
    generic_witness_segre,
    random_sample,
    random_tensor,
    realize,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = dc_field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f}s)"

    def to_json(self, timing: bool = True) -> dict:
        out = {"number": self.number, "title": self.title, "passed": self.passed, "details": self.details}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _pairs(primes, seeds):
    return run_pairs(primes, seeds)


def _seeded_fields(primes, count: int, salt: str):
    """``count`` (field, rng) draws cycling through the primes."""
    plist = sorted({p for p, _ in _pairs(primes, None)})
    for s in range(count):
        p = plist[s % len(plist)]
        yield prime_field(p), make_rng(p, s, salt)


def criterion_1(primes=None, seeds=None) -> CriterionResult:
    """Block congruence and det A * det(Q)^(n-2) = det(P adj(Q) R - R adj(Q) P), over Q."""
    failures = []
    checked = 0
    for n in range(2, 7):
        for seed in range(20):
            rng = random.Random(f"congruence:{n}:{seed}")
            while True:
                P, Q, R = (Matrix.random(QQ, n, n, rng) for _ in range(3))
                if determinant(Q) != 0:
                    break
            w = check_congruence_identity(P, Q, R)
            checked += 1
            if not w:
                failures.append([n, seed])
    return CriterionResult(1, "congruence identity for the Strassen commutator", not failures,
                           {"checked": checked, "failures": failures})


def criterion_2(primes=None, seeds=None) -> CriterionResult:
    """Contraction rank: 2 on decomposables, <= 2k on k summands, 3n on the explicit witness."""
    bad = []
    witness = {}
    for p, s in _pairs(primes, seeds):
        F = prime_field(p)
        rng = make_rng(p, s, "segre-rank")
        for n in range(1, 9):
            r1 = rank(contraction_segre(realize(random_sample(SEGRE, n, 1, F, rng))))
            if r1 != 2:
                bad.append(["decomposable", p, n, r1])
            for k in range(1, 9):
                rk = rank(contraction_segre(realize(random_sample(SEGRE, n, k, F, rng))))
                if rk > 2 * k:
                    bad.append(["bound", p, n, k, rk])
        for n in (3, 5, 7):
            rk = rank(contraction_segre(generic_witness_segre(n, F, rng)))
            witness.setdefault(n, []).append(rk)
            if rk != 3 * n:
                bad.append(["witness", p, n, rk])
    return CriterionResult(2, "contraction rank of Segre tensors", not bad,
                           {"violations": bad, "witness_ranks": witness})


def criterion_3(primes=None, seeds=None) -> CriterionResult:
    rows = []
    ok = True
    for n in (4, 6, 8):
        rep = terracini_dimension(VarietySpec(SEGRE_VERONESE, n), 3 * n // 2 - 1, primes, seeds)
        rows.append([n, rep.k, rep.computed_affine, rep.expected_affine, rep.defect, rep.status])
        ok &= rep.defect == 1 and rep.status == "ok"
        if n == 4:
            ok &= rep.computed_affine == 29 and rep.expected_affine == 30
    return CriterionResult(3, "Segre-Veronese defect 1 at k = 3n/2 - 1 (quartic case 29 of 30)", ok,
                           {"n_k_computed_expected_defect_status": rows})


def criterion_4(primes=None, seeds=None) -> CriterionResult:
    rows = []
    ok = True
    for n in (3, 5):
        rep = terracini_dimension(VarietySpec(SEGRE, n), (3 * n - 1) // 2, primes, seeds)
        rows.append([n, rep.k, rep.computed_affine, rep.expected_affine, rep.defect, rep.status])
        ok &= rep.defect == 1 and rep.status == "ok"
    rep = terracini_dimension(VarietySpec(SEGRE, 4), 5, primes, seeds)
    rows.append([4, 5, rep.computed_affine, rep.expected_affine, rep.defect, rep.status])
    ok &= rep.projective_dim == 43 and rep.status == "ok"
    return CriterionResult(4, "Segre defectivity for odd n and the 43-dimensional secant", ok,
                           {"n_k_computed_expected_defect_status": rows})


def criterion_5(primes=None, seeds=None) -> CriterionResult:
    rows = []
    ok = True
    for n in (5, 6, 7):
        rep = terracini_dimension(VarietySpec(SEGRE_VERONESE, n), n + 1, primes, seeds)
        target = (n + 1) ** 2 + n
        rows.append([n, rep.projective_dim, target, rep.status])
        ok &= rep.projective_dim == target and rep.status == "ok"
    return CriterionResult(5, "(n+1)-secant of the Segre-Veronese has dimension (n+1)^2 + n", ok,
                           {"n_projdim_target_status": rows})


def criterion_6(primes=None, seeds=None) -> CriterionResult:
    reports = []
    ok = True
    for p, s in _pairs(primes, seeds):
        F = prime_field(p)
        for n in (4, 6):
            rep = pfaffian_hypersurface_check(n, F, make_rng(p, s, f"pfaffian-{n}"))
            reports.append([p, n, rep.pencil_degree, rep.passed])
            ok &= rep.passed
        rng = make_rng(p, s, "pf-squared")
        for size in range(0, 13):
            A = Matrix.random(F, size, size, rng)
            K = A - A.T
            ok &= F.reduce(pfaffian(K) ** 2) == determinant(K)
    rng = random.Random("pf-squared-QQ")
    for size in range(0, 11):
        A = Matrix.random(QQ, size, size, rng)
        K = A - A.T
        ok &= pfaffian(K) ** 2 == determinant(K)
    return CriterionResult(6, "Pfaffian hypersurface of degree 3n/2 and Pf^2 = det", ok,
                           {"prime_n_degree_passed": reports})


def criterion_7(primes=None, seeds=None) -> CriterionResult:
    failures = []
    count = 0
    for n in range(3, 7):
        for F, rng in _seeded_fields(primes, 20, f"darboux-{n}"):
            count += 1
            if not curves.lines_check(random_sample(SEGRE_VERONESE, n, n, F, rng), rng):
                failures.append(["lines", n])
            forms = [TernaryForm.linear(F, random_vector(F, 3, rng)) for _ in range(n + 1)]
            try:
                curves.gon_matrix_curve(forms, rng)
            except ArithmeticError:
                failures.append(["gon-identity", n])
            cert = curves.darboux_certificate(curves.random_darboux_sample(n, F, rng), rng)
            if not cert.inscribed:
                failures.append(["vertices", n])
    return CriterionResult(7, "n lines, polygon determinant identity, vanishing at all vertices",
                           not failures, {"samples": count, "failures": failures})


def criterion_8(primes=None, seeds=None) -> CriterionResult:
    rows = []
    ok = True
    for p, s in _pairs(primes, seeds):
        F = prime_field(p)
        rng = make_rng(p, s, "vertex-conditions")
        for n in (4, 5, 6):
            gon = curves.GonConfig.from_lines([random_vector(F, 3, rng) for _ in range(n + 1)], F)
            rk = curves.independent_conditions(gon, n)
            rows.append([p, n, rk])
            ok &= rk == comb(n + 1, 2)
    return CriterionResult(8, "polygon vertices impose independent conditions", ok, {"prime_n_rank": rows})


def criterion_9(primes=None, seeds=None) -> CriterionResult:
    ok = True
    rows = []
    for p, s in _pairs(primes, seeds):
        F = prime_field(p)
        rng = make_rng(p, s, "jumping")
        for n, k in ((4, 5), (6, 8)):
            H = Matrix.random(F, k, n, rng)
            r = [random_vector(F, 3, rng) for _ in range(k)]
            lhs, rhs = curves.jumping_expansion(r, H, rng)
            eq = lhs == rhs and not lhs.is_zero()
            rows.append([p, n, k, eq])
            ok &= eq
    dims = {n: monad.jumping_family_dim(n) for n in range(4, 17, 2)}
    ok &= all(d == n // 2 - 1 for n, d in dims.items())
    return CriterionResult(9, "Cauchy-Binet expansion of the jumping curve and family dimension", ok,
                           {"prime_n_k_equal": rows, "family_dims": dims})


def criterion_10(primes=None, seeds=None) -> CriterionResult:
    ok = True
    details: dict = {"h0f_equals_Sf": [], "rank_one_codim": [], "h0E1": []}
    for p, s in _pairs(primes, seeds):
        F = prime_field(p)
        rng = make_rng(p, s, "monad")
        for n in range(1, 7):
            f = random_tensor(n, F, rng, symmetric=True)
            eq = monad.h0_f(f) == contraction_sym(f)
            details["h0f_equals_Sf"].append([p, n, eq])
            ok &= eq
        for n in range(1, 9):
            good = monad.four_term_check(random_vector(F, 3, rng), random_vector(F, n, rng), F)
            details["rank_one_codim"].append([p, n, good])
            ok &= good
        rep = monad.brill_noether_generic(4, 2, F, rng)
        details["h0E1"].append([p, 4, 2, rep.h0E1, rep.dimker_h0f1])
        ok &= rep.h0E1 == 2 and rep.dimker_h0f1 == 8 and rep.krn_member
        for n, r in ((6, 2), (8, 2), (8, 4), (10, 4)):
            rep = monad.brill_noether_generic(n, r, F, rng)
            details["h0E1"].append([p, n, r, rep.h0E1, rep.dimker_h0f1])
            ok &= rep.h0E1 >= r // 2 and rep.krn_member
    return CriterionResult(10, "monad sections: H0(f) = S_f, rank-one codim 5, h0(E(1)) bounds", ok, details)


def criterion_11(primes=None, seeds=None) -> CriterionResult:
    ok = True
    rows = []
    for p, s in _pairs(primes, seeds):
        F = prime_field(p)
        rng = make_rng(p, s, "stabilizer")
        for n in range(3, 7):
            f = random_tensor(n, F, rng, symmetric=True)
            dim = curves.infinitesimal_stabilizer_dim(f)
            while True:
                g = Matrix.random(F, n, n, rng)
                if determinant(g) != 0:
                    break
            eq = curves.delta_equivariance(f, g, rng)
            rows.append([p, n, dim, eq])
            ok &= dim == 0 and eq
    return CriterionResult(11, "finite stabilizers and equivariance of the determinantal map", ok,
                           {"prime_n_stabdim_equivariant": rows})


def criterion_12(primes=None, seeds=None) -> CriterionResult:
    ok = True
    num = monad.numerology(4, 2)
    ok &= num["theta_even_h0_zero"] == 36 and num["theta_odd"] == 28
    ok &= monad.barth_product(3) == 54
    msp = {}
    for n in range(2, 11):
        for r in range(2, n + 1, 2):
            formula = monad.symplectic_moduli_dim(r, n)
            # fibration count: symmetric matrices + commutator variety - GL(V)
            fibration = 3 * comb(n + 1, 2) - comb(n - r, 2) - n * n
            msp[f"{r},{n}"] = formula
            ok &= formula == fibration
    darboux = {}
    for n in (4, 5, 6, 7):
        rep = curves.darboux_locus_dims(n, primes, seeds)
        darboux[n] = rep.locus_dim
        ok &= rep.passed and rep.locus_dim == (13 if n == 4 else 3 * n + 2)
    return CriterionResult(12, "theta counts, Barth product 54, moduli and Darboux locus dimensions", ok,
                           {"quartic": num, "msp_dims": msp, "darboux_locus": darboux})


CRITERIA: list[Callable[..., CriterionResult]] = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
]


def run_criterion(fn, primes=None, seeds=None) -> CriterionResult:
    start = time.perf_counter()
    res = fn(primes, seeds)
    res.seconds = time.perf_counter() - start
    return res


def run_all(primes: Sequence[int] | None = None, seeds: Sequence[int] | None = None) -> list[CriterionResult]:
    return [run_criterion(fn, primes, seeds) for fn in CRITERIA]
