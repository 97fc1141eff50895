import random

import pytest
from hypothesis import given, strategies as st

from colposet.algebra import (GF, QQ, ZZ, DimensionError, Matrix, NotAComplexError, Ring, RingMismatch,
                              homology_at, kernel, kernel_basis, kron, mat_mul, rank, rank_over_field,
                              smith_normal_form, solve)
from colposet.generate import random_unimodular

import oracles


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, lo=-6, hi=6):
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(0, max_cols))
    data = draw(st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols),
                         min_size=rows, max_size=rows))
    return data, rows, cols


def as_matrix(data, ring, cols):
    return Matrix.from_rows(data, ring, cols)


def test_identity_product():
    m = Matrix.from_rows([[1, 2], [3, 4]], ZZ)
    assert mat_mul(Matrix.identity(2, ZZ), m) == m


def test_row_times_column():
    row = Matrix.from_rows([[1, 1]], ZZ)
    col = Matrix.from_rows([[1], [1]], ZZ)
    assert (row @ col).to_rows() == [[2]]
    assert (row.over(GF(2)) @ col.over(GF(2))).is_zero()


def test_mismatched_shapes_rejected():
    with pytest.raises(DimensionError):
        mat_mul(Matrix.zeros(2, 3, QQ), Matrix.zeros(2, 2, QQ))
    with pytest.raises(RingMismatch):
        mat_mul(Matrix.zeros(2, 2, QQ), Matrix.zeros(2, 2, ZZ))


def test_ring_parsing():
    assert Ring.parse("Z") == ZZ
    assert Ring.parse("Q") == QQ
    assert Ring.parse("Fp:3") == GF(3)
    with pytest.raises(ValueError):
        GF(4)


def test_rank_examples():
    assert rank_over_field(Matrix.zeros(3, 2, QQ)) == 0
    assert rank_over_field(Matrix.from_rows([[1, 2], [2, 4]], QQ)) == 1
    assert rank_over_field(Matrix.from_rows([[1, 1], [1, 0]], GF(2))) == 2
    with pytest.raises(RingMismatch):
        rank_over_field(Matrix.identity(2, ZZ))


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(3, QQ)) == []
    (v,) = kernel_basis(Matrix.from_rows([[1, 1]], QQ))
    assert v[0] == -v[1] != 0
    assert len(kernel_basis(Matrix.from_rows([[1, 1], [1, 1]], GF(2)))) == 1


def test_snf_examples():
    assert smith_normal_form(Matrix.identity(2, ZZ)).invariant_factors == (1, 1)
    assert smith_normal_form(Matrix.from_rows([[2, 4], [0, 6]], ZZ)).invariant_factors == (2, 6)
    assert smith_normal_form(Matrix.from_rows([[2]], ZZ)).invariant_factors == (2,)
    assert smith_normal_form(Matrix.zeros(0, 0, ZZ)).invariant_factors == ()


def test_homology_at_examples():
    times_two = Matrix.from_rows([[2]], ZZ)
    assert homology_at(Matrix.zeros(0, 1, ZZ), times_two) == (0, (2,))
    assert homology_at(Matrix.zeros(0, 3, QQ), Matrix.zeros(3, 0, QQ)) == (3, ())
    d_in = Matrix.from_rows([[1], [1]], QQ)
    d_out = Matrix.from_rows([[-1, 1]], QQ)
    assert homology_at(d_out, d_in) == (0, ())


def test_homology_at_rejects_non_complex():
    with pytest.raises(NotAComplexError):
        homology_at(Matrix.from_rows([[1]], QQ), Matrix.from_rows([[1]], QQ))


def test_solve_inconsistent():
    m = Matrix.from_rows([[1, 1], [1, 1]], QQ)
    with pytest.raises(ValueError):
        solve(m, Matrix.from_rows([[1], [0]], QQ))


@given(int_matrices())
def test_snf_matches_determinantal_divisors(mat):
    data, rows, cols = mat
    got = smith_normal_form(as_matrix(data, ZZ, cols)).invariant_factors
    assert list(got) == oracles.invariant_factors_by_minors(data)


@given(int_matrices(), st.integers(0, 10 ** 6))
def test_snf_invariant_under_unimodular_change(mat, seed):
    data, rows, cols = mat
    m = as_matrix(data, ZZ, cols)
    rng = random.Random(seed)
    left, _ = random_unimodular(rows, rng)
    right, _ = random_unimodular(cols, rng)
    assert smith_normal_form(left @ m @ right) == smith_normal_form(m)


@given(int_matrices())
def test_rank_over_q_counts_invariant_factors(mat):
    data, rows, cols = mat
    m = as_matrix(data, ZZ, cols)
    assert rank(m.over(QQ)) == smith_normal_form(m).rank == oracles.rank_q(data)


@given(int_matrices(), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_oracle(mat, p):
    data, rows, cols = mat
    assert rank(as_matrix(data, GF(p), cols)) == oracles.rank_mod_p(data, p)


@given(int_matrices(), st.sampled_from([QQ, GF(2), GF(3)]))
def test_kernel_is_null_space(mat, ring):
    data, rows, cols = mat
    m = as_matrix(data, ring, cols)
    kd = kernel(m)
    assert (m @ kd.basis).is_zero()
    assert kd.basis.cols == cols - rank(m)
    assert rank(kd.basis) == kd.basis.cols


@given(int_matrices(), st.integers(0, 10 ** 6), st.sampled_from([QQ, GF(5)]))
def test_solve_reproduces_consistent_rhs(mat, seed, ring):
    data, rows, cols = mat
    m = as_matrix(data, ring, cols)
    rng = random.Random(seed)
    x = Matrix.from_rows([[rng.randint(-3, 3) for _ in range(2)] for _ in range(cols)], ring, 2)
    rhs = m @ x
    assert m @ solve(m, rhs) == rhs


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_kron_mixed_product(n, k, seed):
    rng = random.Random(seed)
    a, a_inv = random_unimodular(n, rng)
    b, b_inv = random_unimodular(k, rng)
    assert kron(a, b) @ kron(a_inv, b_inv) == Matrix.identity(n * k, ZZ)


@st.composite
def small_complexes(draw):
    """Integer ``C_2 -> C_1 -> C_0`` built as ``d_1 = A``, ``d_2 = B`` with ``A B = 0``."""
    n0, n1, n2 = draw(st.integers(0, 3)), draw(st.integers(1, 4)), draw(st.integers(0, 3))
    seed = draw(st.integers(0, 10 ** 6))
    rng = random.Random(seed)
    g, g_inv = random_unimodular(n1, rng)
    split = draw(st.integers(0, n1))
    # d_2 lands in the first `split` coordinates (after g), d_1 only reads the rest
    d2_rows = [[rng.randint(-3, 3) if i < split else 0 for _ in range(n2)] for i in range(n1)]
    d1_rows = [[rng.randint(-3, 3) if j >= split else 0 for j in range(n1)] for _ in range(n0)]
    d2 = g @ Matrix.from_rows(d2_rows, ZZ, n2)
    d1 = Matrix.from_rows(d1_rows, ZZ, n1) @ g_inv
    return d1, d2


@given(small_complexes(), st.sampled_from([2, 3, 5]))
def test_universal_coefficients(cx, p):
    # dim H_1(F_p) = b_1 + #(p | t_1) + #(p | t_0), with t_0 the torsion of H_0 = coker d_1
    d1, d2 = cx
    b1, t1 = homology_at(d1, d2)
    _, t0 = homology_at(Matrix.zeros(0, d1.rows, ZZ), d1)
    bp, _ = homology_at(d1.over(GF(p)), d2.over(GF(p)))
    assert bp == b1 + sum(1 for t in t1 if t % p == 0) + sum(1 for t in t0 if t % p == 0)


@given(small_complexes())
def test_homology_matches_dense_oracle(cx):
    d1, d2 = cx
    dims = [d1.rows, d1.cols, d2.cols]
    expected = oracles.betti_from_dense(dims, {1: d1.to_rows(), 2: d2.to_rows()})
    assert homology_at(d1, d2)[0] == expected[1]
    assert homology_at(d1.over(QQ), d2.over(QQ))[0] == expected[1]
