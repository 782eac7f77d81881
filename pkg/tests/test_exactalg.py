import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import cofactor_det, column_rank, recursive_pfaffian
from secantcert.errors import ContractError, PreconditionError, ShapeError
from secantcert.exactalg import (
    DEFAULT_PRIMES,
    GF,
    PRIMES_ENV,
    QQ,
    Matrix,
    adjugate,
    check_prime,
    default_primes,
    determinant,
    independent_rows,
    inverse,
    kernel_basis,
    pfaffian,
    principal_pfaffians,
    rank,
    rref,
    solve,
)

P = DEFAULT_PRIMES[0]
SMALL = st.integers(min_value=-9, max_value=9)


def matrices(n, m=None):
    m = n if m is None else m
    return st.lists(st.lists(SMALL, min_size=m, max_size=m), min_size=n, max_size=n)


def random_skew(field, n, rng):
    A = Matrix.random(field, n, n, rng)
    return A - A.T


def test_default_primes_are_prime():
    for p in DEFAULT_PRIMES:
        assert check_prime(p) == p


def test_prime_list_env_override(monkeypatch):
    monkeypatch.setenv(PRIMES_ENV, "1000003, 1000033")
    assert default_primes() == (1000003, 1000033)
    monkeypatch.setenv(PRIMES_ENV, "1000001")
    with pytest.raises(PreconditionError):
        default_primes()


@pytest.mark.parametrize("bad", [1000001, 999983, 2147483646])
def test_check_prime_rejects(bad):
    with pytest.raises(PreconditionError):
        check_prime(bad)


def test_field_arithmetic():
    F = GF(P)
    assert F(-1) == P - 1
    assert F.div(1, 2) * 2 % P == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    assert QQ.div(1, 3) == Fraction(1, 3)
    assert QQ.parse(QQ.fmt(Fraction(-7, 4))) == Fraction(-7, 4)


def test_determinant_matches_cofactor_oracle_over_Q():
    rng = random.Random("det-Q")
    for trial in range(120):
        n = trial % 8
        M = Matrix.random(QQ, n, n, rng)
        assert determinant(M) == cofactor_det(M.tolist())


def test_determinant_matches_cofactor_oracle_over_Fp():
    F = GF(P)
    rng = random.Random("det-Fp")
    for trial in range(120):
        n = trial % 8
        M = Matrix.random(F, n, n, rng)
        assert determinant(M) == cofactor_det(M.tolist(), P)


def test_determinant_with_fractions():
    rng = random.Random("det-frac")
    for n in range(1, 6):
        rows = [[Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(n)] for _ in range(n)]
        assert determinant(Matrix(QQ, rows)) == cofactor_det(rows)


@settings(max_examples=60, deadline=None)
@given(matrices(4), matrices(4))
def test_determinant_multiplicative(a, b):
    A, B = Matrix(QQ, a), Matrix(QQ, b)
    assert determinant(A @ B) == determinant(A) * determinant(B)
    assert determinant(A.T) == determinant(A)


def test_pfaffian_matches_recursive_oracle(field):
    rng = random.Random(f"pf-{field!r}")
    mod = None if field == QQ else P
    for n in range(0, 9):
        for _ in range(6):
            K = random_skew(field, n, rng)
            assert pfaffian(K) == recursive_pfaffian(K.tolist(), mod)


def test_pfaffian_squared_is_determinant(field):
    rng = random.Random(f"pf2-{field!r}")
    for n in range(0, 13):
        K = random_skew(field, n, rng)
        assert field.reduce(pfaffian(K) ** 2) == determinant(K)


def test_pfaffian_of_degenerate_skew():
    # a skew matrix whose leading 2x2 block is zero forces a pivot swap
    F = GF(P)
    rows = [[0, 0, 1, 2], [0, 0, 3, 4], [-1, -3, 0, 5], [-2, -4, -5, 0]]
    K = Matrix(F, rows)
    assert pfaffian(K) == recursive_pfaffian(K.tolist(), P)


@settings(max_examples=40, deadline=None)
@given(matrices(4), matrices(4))
def test_pfaffian_congruence(b, a):
    B, A = Matrix(QQ, b), Matrix(QQ, a)
    K = A - A.T
    assert pfaffian(B @ K @ B.T) == determinant(B) * pfaffian(K)


def test_pfaffian_rejects_non_skew():
    with pytest.raises(ContractError):
        pfaffian(Matrix(QQ, [[1, 0], [0, 0]]))


def test_odd_pfaffian_is_zero():
    assert pfaffian(random_skew(QQ, 5, random.Random(1))) == 0


def test_principal_pfaffians_cover_all_subsets():
    K = random_skew(QQ, 5, random.Random(2))
    got = dict(principal_pfaffians(K, 4))
    assert len(got) == 5
    for idx, val in got.items():
        assert val == recursive_pfaffian(K.submatrix(idx, idx).tolist())
    with pytest.raises(PreconditionError):
        list(principal_pfaffians(K, 3))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 6), st.randoms(use_true_random=False))
def test_rank_matches_oracle_and_kernel(m, n, r, rnd):
    # product of m x r and r x n has rank <= r; compare with the column-elimination oracle
    F = GF(P)
    A = Matrix.random(F, m, r, rnd) if r else Matrix.zeros(F, m, 0)
    B = Matrix.random(F, r, n, rnd) if r else Matrix.zeros(F, 0, n)
    M = A @ B if r else Matrix.zeros(F, m, n)
    rk = rank(M)
    assert rk == column_rank(M.tolist(), P)
    assert rk <= min(m, n, r)
    ker = kernel_basis(M)
    assert rk + len(ker) == n
    for v in ker:
        assert all(x == 0 for x in M.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrices(3, 5))
def test_rank_over_Q_matches_oracle(rows):
    assert rank(Matrix(QQ, rows)) == column_rank(rows)


def test_rank_invariant_under_invertible_multiplication():
    F = GF(P)
    rng = random.Random("rank-inv")
    for _ in range(30):
        m, n, r = rng.randint(1, 6), rng.randint(1, 6), rng.randint(0, 4)
        M = Matrix.random(F, m, r, rng) @ Matrix.random(F, r, n, rng) if r else Matrix.zeros(F, m, n)
        while True:
            G = Matrix.random(F, m, m, rng)
            H = Matrix.random(F, n, n, rng)
            if determinant(G) and determinant(H):
                break
        assert rank(G @ M @ H) == rank(M)


def test_row_permutation_flips_determinant_sign():
    rng = random.Random("perm")
    M = Matrix.random(QQ, 5, 5, rng)
    rows = M.tolist()
    rows[0], rows[3] = rows[3], rows[0]
    assert determinant(Matrix(QQ, rows)) == -determinant(M)


def test_rref_is_reduced():
    M = Matrix(QQ, [[2, 4, 1], [1, 2, 0], [3, 6, 1]])
    rows, pivots = rref(M)
    assert pivots == [0, 2]
    for i, c in enumerate(pivots):
        assert rows[i][c] == 1
        assert all(rows[j][c] == 0 for j in range(len(rows)) if j != i)


def test_independent_rows_picks_greedy_basis():
    F = GF(P)
    vecs = [[1, 0, 0], [2, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]
    assert independent_rows(vecs, F) == [0, 2, 4]


def test_inverse_adjugate_solve(field):
    rng = random.Random(f"inv-{field!r}")
    for n in range(1, 8):
        while True:
            M = Matrix.random(field, n, n, rng)
            d = determinant(M)
            if d:
                break
        I = Matrix.identity(field, n)
        assert M @ inverse(M) == I
        adj = adjugate(M)
        assert M @ adj == I.scale(d)
        assert adjugate(M, method="cofactor") == adjugate(M, method="inverse")
        b = [field.random(rng) for _ in range(n)]
        assert M.apply(solve(M, b)) == [field.reduce(x) for x in b]


def test_adjugate_of_singular_matrix():
    M = Matrix(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert M @ adjugate(M) == Matrix.zeros(QQ, 3)


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        inverse(Matrix(QQ, [[1, 2], [2, 4]]))


def test_shape_errors():
    with pytest.raises(ShapeError):
        Matrix(QQ, [[1, 2], [3]])
    with pytest.raises(ShapeError):
        Matrix(QQ, [[1, 2]]) @ Matrix(QQ, [[1, 2]])
    with pytest.raises(ShapeError):
        determinant(Matrix(QQ, [[1, 2]]))


def test_blocks_and_json_roundtrip(field):
    rng = random.Random("blocks")
    A = Matrix.random(field, 2, 2, rng)
    B = Matrix.blocks([[A, Matrix.zeros(field, 2)], [Matrix.identity(field, 2), A]])
    assert B.shape == (4, 4)
    assert determinant(B) == field.reduce(determinant(A) ** 2)
    assert Matrix.from_json(field, B.to_json()) == B


def test_symmetric_and_skew_predicates():
    S = Matrix(QQ, [[1, 2], [2, 3]])
    K = Matrix(QQ, [[0, 2], [-2, 0]])
    assert S.is_symmetric() and not S.is_skew()
    assert K.is_skew() and not K.is_symmetric()
