import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import leibniz_det_forms
from secantcert.curves import delta
from secantcert.errors import DegenerateError, ShapeError
from secantcert.exactalg import GF, QQ, Matrix, determinant
from secantcert.forms import (
    LinearFormMatrix,
    TernaryForm,
    det_bareiss_symbolic,
    det_interpolate,
    det_linear_matrix,
    monomials,
    product,
    restrict_to_pencil,
    variables,
)
from secantcert.sampling import random_vector
from secantcert.tensor import random_tensor

from conftest import P0


def random_form(field, degree, rng):
    return TernaryForm(field, degree, {e: field.random(rng) for e in monomials(degree)})


def random_linear_matrix(field, n, rng, symmetric=True):
    t = random_tensor(n, field, rng, symmetric=symmetric)
    return LinearFormMatrix.from_slices(t.slices, symmetric=symmetric)


def test_monomial_count_and_order():
    for d in range(6):
        ms = monomials(d)
        assert len(ms) == (d + 1) * (d + 2) // 2
        assert all(sum(m) == d for m in ms)
    assert monomials(1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


forms_st = st.builds(
    lambda d, cs: TernaryForm(QQ, d, dict(zip(monomials(d), cs))),
    st.just(2),
    st.lists(st.integers(-5, 5), min_size=6, max_size=6),
)


@settings(max_examples=50, deadline=None)
@given(forms_st, forms_st, forms_st)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == TernaryForm.zero(QQ, 2)


@settings(max_examples=50, deadline=None)
@given(forms_st, forms_st, st.tuples(*[st.integers(-4, 4)] * 3))
def test_evaluation_is_a_ring_map(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


def test_exact_division(Fp, rng):
    a, b = random_form(Fp, 3, rng), random_form(Fp, 2, rng)
    assert (a * b).exact_div(b) == a
    with pytest.raises(ArithmeticError):
        (a * b + TernaryForm.constant(Fp, 1) * random_form(Fp, 5, rng)).exact_div(random_form(Fp, 4, rng))


def test_power_and_product(Fp):
    x, y, z = variables(Fp)
    s = x + y + z
    assert s**2 == x * x + y * y + z * z + (x * y + y * z + x * z).scale(2)
    assert product([x, y, z], Fp).coefficient((1, 1, 1)) == 1


def test_proportionality(Fp, rng):
    a = random_form(Fp, 3, rng)
    assert a.proportional_to(a.scale(17))
    assert not a.proportional_to(random_form(Fp, 3, rng))


def test_json_roundtrip(field, rng):
    a = random_form(field, 4, rng)
    assert TernaryForm.from_json(field, a.to_json()) == a


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_symbolic_and_interpolated_determinants_agree(Fp, rng, n):
    for symmetric in (True, False):
        M = random_linear_matrix(Fp, n, rng, symmetric)
        d1 = det_bareiss_symbolic(M)
        d2 = det_interpolate(M, rng)
        assert d1 == d2
        assert d1.degree == n
        assert det_linear_matrix(M, rng) == d1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_determinant_matches_leibniz_oracle(field, rng, n):
    M = random_linear_matrix(field, n, rng, symmetric=False)
    oracle = leibniz_det_forms(M.entries, lambda a, b: a * b, lambda a, b: a + b, TernaryForm.constant(field, 1))
    assert det_bareiss_symbolic(M) == oracle


@pytest.mark.parametrize("n", [2, 4, 6])
def test_determinant_commutes_with_evaluation(Fp, rng, n):
    M = random_linear_matrix(Fp, n, rng)
    d = det_linear_matrix(M, rng)
    for _ in range(5):
        pt = random_vector(Fp, 3, rng, nonzero_entries=False)
        assert d.evaluate(pt) == determinant(M.evaluate(pt))


def test_block_diagonal_multiplicativity(Fp, rng):
    A = random_linear_matrix(Fp, 2, rng)
    B = random_linear_matrix(Fp, 3, rng)
    zero = TernaryForm.zero(Fp, 1)
    entries = [list(row) + [zero] * 3 for row in A.entries] + [[zero] * 2 + list(row) for row in B.entries]
    D = LinearFormMatrix(entries, symmetric=True)
    assert det_linear_matrix(D, rng) == det_linear_matrix(A, rng) * det_linear_matrix(B, rng)


def test_polygon_example_determinant():
    # diag(x, y, z) + (x + y + z) * ones has determinant xyz + s(xy + yz + zx)
    x, y, z = variables(QQ)
    s = x + y + z
    zero = TernaryForm.zero(QQ, 1)
    ls = [x, y, z]
    entries = [[(ls[i] if i == j else zero) + s for j in range(3)] for i in range(3)]
    got = det_linear_matrix(LinearFormMatrix(entries, symmetric=True), random.Random(0))
    assert got == x * y * z + s * (x * y + y * z + x * z)


def test_pencil_degree_of_determinant(Fp, rng):
    for n in (2, 3, 5):
        A = Matrix.random(Fp, n, n, rng)
        B = Matrix.random(Fp, n, n, rng)
        assert restrict_to_pencil(determinant, A, B, degree_bound=n) == n


def test_pencil_of_zero_function_is_degenerate(Fp, rng):
    A = Matrix.random(Fp, 2, 2, rng)
    with pytest.raises(DegenerateError):
        restrict_to_pencil(lambda M: 0, A, A, degree_bound=2)


def test_pencil_detects_degree_above_bound(Fp, rng):
    A = Matrix.random(Fp, 4, 4, rng)
    B = Matrix.random(Fp, 4, 4, rng)
    with pytest.raises(ArithmeticError):
        restrict_to_pencil(determinant, A, B, degree_bound=2)


def test_delta_on_pencil_has_degree_n(Fp, rng):
    # delta is homogeneous of degree n in f
    for n in (2, 3, 4):
        f0 = random_tensor(n, Fp, rng, symmetric=True)
        f1 = random_tensor(n, Fp, rng, symmetric=True)
        pt = random_vector(Fp, 3, rng)
        deg = restrict_to_pencil(lambda f: delta(f, rng).evaluate(pt), f0, f1, degree_bound=n)
        assert deg == n


def test_linear_matrix_rejects_nonlinear_entries():
    x, y, _ = variables(QQ)
    with pytest.raises(ShapeError):
        LinearFormMatrix([[x * y]])


def test_prime_field_coefficients_reduce():
    F = GF(P0)
    a = TernaryForm(F, 1, {(1, 0, 0): P0 + 3})
    assert a.coefficient((1, 0, 0)) == 3
