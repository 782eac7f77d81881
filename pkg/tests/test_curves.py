import logging
from math import comb

import pytest

from oracles import leibniz_det_forms
from secantcert import curves
from secantcert.errors import DegenerateError, PreconditionError, ShapeError
from secantcert.exactalg import Matrix, determinant
from secantcert.forms import TernaryForm, product
from secantcert.sampling import random_vector
from secantcert.tensor import SEGRE_VERONESE, DecompSample, SymTensor3, random_sample, random_tensor, realize


def random_lines(F, count, rng):
    return [random_vector(F, 3, rng) for _ in range(count)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_delta_matches_leibniz_oracle(Fp, rng, n):
    f = random_tensor(n, Fp, rng, symmetric=True)
    M = curves.linear_matrix(f)
    oracle = leibniz_det_forms(M.entries, lambda a, b: a * b, lambda a, b: a + b, TernaryForm.constant(Fp, 1))
    assert curves.delta(f, rng) == oracle


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_n_summands_give_n_lines(Fp, rng, n):
    for _ in range(3):
        assert curves.lines_check(random_sample(SEGRE_VERONESE, n, n, Fp, rng), rng)


def test_lines_constant_is_gram_determinant_squared(Fp, rng):
    # delta(sum u_i (x) v_i^2) = det(v)^2 * prod u_i
    n = 3
    sample = random_sample(SEGRE_VERONESE, n, n, Fp, rng)
    V = Matrix(Fp, [v for _, v in sample.summands])
    lines = product((curves.line(u, Fp) for u, _ in sample.summands), Fp)
    assert curves.delta(realize(sample), rng) == lines.scale(Fp.reduce(determinant(V) ** 2))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_darboux_curve_inscribed(Fp, rng, n):
    cert = curves.darboux_certificate(curves.random_darboux_sample(n, Fp, rng), rng)
    assert cert.inscribed
    assert len(cert.incidence) == comb(n + 1, 2)
    assert cert.curve.degree == n
    js = cert.to_json()
    assert js["inscribed"] is True and len(js["vertices"]) == comb(n + 1, 2)


def test_darboux_requires_n_plus_one_summands(Fp, rng):
    with pytest.raises(PreconditionError):
        curves.darboux_certificate(random_sample(SEGRE_VERONESE, 3, 3, Fp, rng))
    with pytest.raises(PreconditionError):
        curves.lines_check(random_sample(SEGRE_VERONESE, 3, 4, Fp, rng))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_gon_identity(Fp, rng, n):
    forms = [curves.line(l, Fp) for l in random_lines(Fp, n + 1, rng)]
    assert curves.gon_matrix_curve(forms, rng) == curves.gon_sum(forms)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gon_tensor_realizes_gon_matrix(Fp, rng, n):
    ls = random_lines(Fp, n + 1, rng)
    f = curves.gon_tensor(ls, Fp)
    assert curves.delta(f, rng) == curves.gon_sum([curves.line(l, Fp) for l in ls])


def test_gon_curve_passes_through_vertices(Fp, rng):
    ls = random_lines(Fp, 5, rng)
    gon = curves.GonConfig.from_lines(ls, Fp)
    curve = curves.gon_sum(gon.edges())
    assert all(curve.evaluate(v) == 0 for v in gon.vertices)


def test_incomplete_gon_rejected(Fp):
    # three concurrent lines through (0:0:1)
    with pytest.raises(DegenerateError):
        curves.GonConfig.from_lines([[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]], Fp)
    gon = curves.GonConfig.from_lines([[1, 0, 0], [0, 1, 0], [1, 1, 0]], Fp, check=False)
    assert not gon.is_complete()


def test_gon_json_roundtrip(Fp, rng):
    gon = curves.GonConfig.from_lines(random_lines(Fp, 5, rng), Fp)
    again = curves.gon_from_json(gon.to_json(), Fp)
    assert again.vertices == gon.vertices
    assert curves.gon_from_json({"lines": gon.lines}, Fp).lines == gon.lines
    with pytest.raises(ValueError):
        curves.gon_from_json({}, Fp)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_vertices_impose_independent_conditions(Fp, rng, n):
    gon = curves.GonConfig.from_lines(random_lines(Fp, n + 1, rng), Fp)
    assert curves.independent_conditions(gon, n) == comb(n + 1, 2)
    assert curves.curves_through_vertices(gon, n) == n + 1


def test_evaluation_matrix_shape(Fp, rng):
    pts = [random_vector(Fp, 3, rng) for _ in range(4)]
    assert curves.evaluation_matrix(pts, 3, Fp).shape == (10, 4)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_equivariance(Fp, rng, n):
    f = random_tensor(n, Fp, rng, symmetric=True)
    g = Matrix.random(Fp, n, n, rng)
    assert curves.delta_equivariance(f, g, rng)


def test_equivariance_needs_invertible(Fp, rng):
    f = random_tensor(2, Fp, rng, symmetric=True)
    with pytest.raises(PreconditionError):
        curves.delta_equivariance(f, Matrix.zeros(Fp, 2), rng)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_generic_stabilizer_is_finite(Fp, rng, n):
    assert curves.infinitesimal_stabilizer_dim(random_tensor(n, Fp, rng, symmetric=True)) == 0


def test_decomposable_has_large_stabilizer(Fp, rng):
    # u (x) v^2 is fixed by every A with A v = 0 and trace 0
    n = 4
    f = realize(random_sample(SEGRE_VERONESE, n, 1, Fp, rng))
    assert curves.infinitesimal_stabilizer_dim(f) > 0


def test_identity_slices_have_orthogonal_stabilizer(Fp):
    # for f with identity slices, so(n) is the stabilizer: dim n(n-1)/2
    n = 3
    I = Matrix.identity(Fp, n)
    assert curves.infinitesimal_stabilizer_dim(SymTensor3([I, I, I])) == n * (n - 1) // 2


@pytest.mark.parametrize("n,k", [(4, 5), (6, 8), (3, 3), (4, 6)])
def test_jumping_expansion(Fp, rng, n, k):
    H = Matrix.random(Fp, k, n, rng)
    r = random_lines(Fp, k, rng)
    lhs, rhs = curves.jumping_expansion(r, H, rng)
    assert lhs == rhs and not lhs.is_zero()


def test_jumping_expansion_with_zero_rows(Fp, rng):
    H = Matrix(Fp, [[1, 2], [0, 0], [3, 5]])
    r = random_lines(Fp, 3, rng)
    lhs, rhs = curves.jumping_expansion(r, H, rng)
    assert lhs == rhs


def test_jumping_expansion_small_k_warns(Fp, rng, caplog):
    with caplog.at_level(logging.WARNING):
        lhs, rhs = curves.jumping_expansion(random_lines(Fp, 2, rng), Matrix.random(Fp, 2, 4, rng), rng)
    assert lhs.is_zero() and rhs.is_zero()
    assert "k < n" in caplog.text


def test_jumping_expansion_shape_error(Fp, rng):
    with pytest.raises(ShapeError):
        curves.jumping_expansion(random_lines(Fp, 2, rng), Matrix.random(Fp, 3, 2, rng), rng)


@pytest.mark.parametrize("n,expected", [(4, 13), (5, 17), (6, 20)])
def test_darboux_locus_dims(n, expected):
    rep = curves.darboux_locus_dims(n)
    assert rep.passed and rep.locus_dim == expected


def test_coincident_lines_rejected(Fp, rng):
    # all u_i equal: no polygon, so no certificate
    n = 3
    u = random_vector(Fp, 3, rng)
    sample = DecompSample(SEGRE_VERONESE, [(u, random_vector(Fp, n, rng)) for _ in range(n + 1)], Fp)
    with pytest.raises(DegenerateError):
        curves.darboux_certificate(sample, rng)
