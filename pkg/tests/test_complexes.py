import random

import pytest
from hypothesis import given, strategies as st

from colposet.algebra import GF, QQ, ZZ, Matrix, NotAComplexError
from colposet.coloured import (ColouredPoset, Gluing, constant_colouring, dual_coloured,
                               identity_morphism, union_coloured)
from colposet.complexes import (BUILD_STATS, ChainComplex, ChainMap, ChainMapError, build_C,
                                build_D_truncated, build_K, build_S_truncated,
                                chain_map_of_morphism, check_short_exact, cohomology, connecting_delta,
                                cube_ses, gluing_complexes, homology, homotopy_defect, homotopy_h,
                                identity_map, induced_map_on_homology, is_invertible, is_quasi_isomorphism,
                                map_phi, map_phi_prime, split_S, split_sign, verify_les, verify_main,
                                verify_ses)
from colposet.generate import random_colouring, random_graded_poset, random_instance, random_poset_with_top
from colposet.khovanov import build_khovanov_colouring, standard_diagrams
from colposet.poset import BooleanLattice, PosetError, chain_poset

import oracles

B1, B2 = BooleanLattice(1), BooleanLattice(2)


def one(ring=ZZ):
    return Matrix.identity(1, ring)


def dense_data(cp):
    return {k: m.to_rows() for k, m in cp.edge_maps.items()}


def c_oracle_betti(cp, p=None):
    dims, diffs = oracles.chain_complex_oracle(len(cp.carrier), cp.carrier.covers, cp.top, cp.ranks,
                                               dense_data(cp))
    return dims, oracles.betti_from_dense(dims, diffs, p)


# --------------------------------------------------------------------------
# worked examples


def test_c_of_b1_identity_is_acyclic():
    cp = ColouredPoset(B1, QQ, [1, 1], {(0, 1): one(QQ)})
    c = build_C(cp)
    assert c.dims == (1, 1)
    assert homology(c).is_zero()


def test_c_of_constant_b2():
    c = build_C(constant_colouring(B2, 1, QQ))
    assert c.dims == (1, 3, 2)
    assert c.dim(3) == 0 and c.d(3).is_zero()


def test_k_examples():
    k3 = build_K(constant_colouring(BooleanLattice(3), 1, QQ))
    assert k3.dims == (1, 3, 3, 1)
    k2 = build_K(constant_colouring(B2, 1, QQ))
    assert k2.d(2).to_rows() == [[1], [1]]
    assert k2.d(1).to_rows() == [[-1, 1]]
    assert homology(k2).is_zero()
    cp = random_instance(4, 3)
    k = build_K(cp)
    assert k.dim(0) == cp.ranks[cp.top] and k.dim(3) == cp.ranks[0]
    with pytest.raises(PosetError):
        build_K(constant_colouring(chain_poset(3), 1, QQ))


def test_phi_examples():
    cp = constant_colouring(B2, 1, QQ)
    phi = map_phi(cp)
    assert phi[0] == Matrix.identity(1, QQ)
    c = phi.target
    col = phi[2].column(0)
    assert col == {c.index_of(2, ((0, 1), 0)): -1, c.index_of(2, ((0, 2), 0)): 1}


def test_zero_map_on_b1():
    cp = ColouredPoset(B1, ZZ, [1, 1], {(0, 1): Matrix.zeros(1, 1, ZZ)})
    h = homology(build_C(cp))
    assert h.betti == {0: 1, 1: 1}


def test_s_and_d_on_b1():
    cp = ColouredPoset(B1, QQ, [1, 1], {(0, 1): one(QQ)})
    s = build_S_truncated(cp, 4)
    assert s.labels[2] == (((0, 0), 0),)
    strict, rep = split_S(s)
    assert strict[2] == [] and rep[2] == [0]
    # d(lambda 00): F_0^0 and the dropped interior 0 cancel
    assert s.d(2).is_zero()


def test_homotopy_examples():
    cp = ColouredPoset(B1, QQ, [1, 1], {(0, 1): one(QQ)})
    d = build_D_truncated(cp, 5)
    h = homotopy_h(d)
    two, three = d.index_of(2, ((0, 0), 0)), d.index_of(3, ((0, 0, 0), 0))
    assert h[2].column(two) == {three: 1}
    assert h[3].column(d.index_of(3, ((0, 0, 0), 0))) == {}
    assert d.d(3).column(three) == {two: 1}
    assert all(m.is_zero() for m in homotopy_defect(d, h).values())


def test_homotopy_rejects_strict_chain():
    s = build_S_truncated(constant_colouring(B2, 1, QQ), 3)
    with pytest.raises(PosetError):
        homotopy_h(s)


def test_bad_differential_rejected():
    ones = Matrix.from_rows([[1]], QQ)
    with pytest.raises(NotAComplexError):
        ChainComplex(QQ, 0, [1, 1, 1], {1: ones, 2: ones})


def test_non_chain_map_rejected():
    c = build_C(constant_colouring(B1, 1, QQ))
    with pytest.raises(ChainMapError):
        ChainMap(c, c, 0, {0: Matrix.identity(1, QQ), 1: Matrix.zeros(1, 1, QQ)})


def test_pi_examples():
    cp = random_instance(21, 2, 2, QQ)
    g = Gluing.from_boolean_split(cp, 1)
    gc = gluing_complexes(g)
    top1 = g.emb1[g.part1.top]
    for seq, b in gc.quotient.labels[2]:
        col = gc.pi[2].column(gc.quotient.index_of(2, (seq, b)))
        if seq[-1] == top1:
            x = g.emb1.index(seq[0])
            assert col == {gc.c_part1.index_of(1, ((x,), b)): 1}
        else:
            assert col == {}


def test_quotient_counts_and_exactness():
    src = random_instance(2, 2, 2, QQ)
    g = Gluing.from_boolean_split(src, 2)
    gc = gluing_complexes(g)
    for n in gc.c_glued.degrees:
        assert gc.quotient.dim(n) == gc.c_glued.dim(n) - gc.c_part2.dim(n)
        assert (gc.q[n] @ gc.i[n]).is_zero()
    assert not check_short_exact(gc.i, gc.q)


def test_delta_vanishes_on_split_sequence():
    a = build_C(random_instance(3, 2, 2, QQ))
    b_cx = build_C(random_instance(8, 2, 2, QQ))
    dims = [a.dim(n) + b_cx.dim(n) for n in range(3)]
    diffs = {n: _block(a.d(n), b_cx.d(n)) for n in (1, 2)}
    total = ChainComplex(QQ, 0, dims, diffs)
    inc = ChainMap(a, total, 0, {n: _block(Matrix.identity(a.dim(n), QQ), Matrix.zeros(b_cx.dim(n), 0, QQ))
                                 for n in range(3)})
    proj = ChainMap(total, b_cx, 0, {n: _block(Matrix.zeros(0, a.dim(n), QQ), Matrix.identity(b_cx.dim(n), QQ))
                                     for n in range(3)})
    for n in range(4):
        assert connecting_delta(inc, proj, n).is_zero()
    assert verify_ses(inc, proj)


def _block(x, y):
    from colposet.algebra import block_diag
    return block_diag([x, y], QQ)


def test_constant_colouring_les_is_exact():
    cp = constant_colouring(BooleanLattice(3), 2, QQ)
    for ell in (1, 2, 3):
        assert verify_les(Gluing.from_boolean_split(cp, ell))


def test_boolean_split_les_over_f2():
    cp = random_instance(17, 3, 3, GF(2))
    for ell in (1, 2, 3):
        g = Gluing.from_boolean_split(cp, ell)
        assert verify_les(g)
        assert verify_ses(*cube_ses(g))


def test_phi_prime_shift_and_lemma():
    cp = random_instance(23, 3, 2, QQ)
    for ell in (1, 2, 3):
        g = Gluing.from_boolean_split(cp, ell)
        gc = gluing_complexes(g)
        k0 = build_K(g.part1)
        pp = map_phi_prime(g, gc.quotient, k0)
        for n in k0.degrees:
            assert pp[n].shape == (gc.quotient.dim(n + 1), k0.dim(n))
        lhs = gc.pi.compose(pp)
        rhs = map_phi(g.part1, k0, gc.c_part1)
        assert all(lhs[n] == rhs[n].scale(split_sign(ell)) for n in k0.degrees)
    assert split_sign(1) == 1 and split_sign(2) == -1


def test_khovanov_complexes_preserve_internal_degree():
    d = standard_diagrams()["trefoil_left"]
    cp = build_khovanov_colouring(d, QQ)
    assert build_K(cp).qdeg is not None and build_C(cp).qdeg is not None


def test_identity_morphism_gives_identity_map():
    cp = random_colouring(random_poset_with_top(random.Random(5), 5), 5, 2, QQ)
    fm = chain_map_of_morphism(identity_morphism(cp), cp, cp)
    assert fm.equals(identity_map(fm.source))
    for n in fm.source.degrees:
        hb = induced_map_on_homology(fm, n)
        assert hb == Matrix.identity(hb.rows, QQ)


def test_cohomology_of_zero_complex():
    assert cohomology(ChainComplex(QQ, 0, [0, 0], {})).is_zero()


def test_build_stats_are_counted():
    before = BUILD_STATS["d2_checked"]
    build_C(random_instance(1, 2))
    assert BUILD_STATS["d2_checked"] > before
    assert BUILD_STATS[("d2_failures", "C")] == 0


# --------------------------------------------------------------------------
# properties


@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.sampled_from([None, 2, 3]))
def test_c_matches_dense_oracle(seed, size, p):
    cp = random_colouring(random_poset_with_top(random.Random(seed), size), seed, 2)
    dims, betti = c_oracle_betti(cp, p)
    c = build_C(cp if p is None else cp.over(GF(p)))
    if p is None:
        c = c.over(QQ)
    assert list(c.dims) == dims
    assert {n: b for n, b in betti.items() if b} == homology(c).betti


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_k_matches_dense_oracle(seed, r):
    cp = random_instance(seed, r, 2)
    dims, diffs = oracles.cube_complex_oracle(r, cp.ranks, dense_data(cp))
    k = build_K(cp)
    assert list(k.dims) == dims
    for n, m in diffs.items():
        assert k.d(n).to_rows() == m


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_euler_characteristics_agree(seed, r):
    cp = random_instance(seed, r, 3)
    assert build_C(cp).euler_characteristic() == build_K(cp).euler_characteristic()


@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.sampled_from([QQ, GF(2), GF(3), ZZ]))
def test_main_theorem_small(seed, r, ring):
    assert verify_main(random_instance(seed, r, 2, ring))


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_decomposition_and_homotopy(seed, size):
    cp = random_colouring(random_poset_with_top(random.Random(seed), size), seed, 2, QQ)
    s = build_S_truncated(cp, 4)
    strict, rep = split_S(s)
    c = build_C(cp)
    for n in s.degrees:
        assert s.dim(n) == len(strict[n]) + len(rep[n])
        assert len(strict[n]) == c.dim(n)
    d = s.subcomplex(rep)
    assert all(m.is_zero() for m in homotopy_defect(d, homotopy_h(d)).values())


@given(st.integers(0, 10 ** 6))
def test_constant_colouring_acyclic(seed):
    p = random_graded_poset(random.Random(seed))
    assert homology(build_C(constant_colouring(p, 2, ZZ))).is_zero()


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_union_splits(seed1, seed2):
    a = random_colouring(random_poset_with_top(random.Random(seed1), 4), seed1, 2, QQ)
    b = random_colouring(random_poset_with_top(random.Random(seed2), 4), seed2, 2, QQ)
    hu, ha, hb = (homology(build_C(x)) for x in (union_coloured(a, b), a, b))
    degrees = range(0, 6)
    assert hu.dims(degrees) == [x + y for x, y in zip(ha.dims(degrees), hb.dims(degrees))]


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_cohomology_dims_over_field(seed, size):
    cp = random_colouring(random_poset_with_top(random.Random(seed), size), seed, 3, QQ)
    c = build_C(cp)
    assert homology(c).betti == cohomology(c).betti


@given(st.integers(0, 10 ** 6))
def test_morphism_chain_maps_compose(seed):
    from colposet.coloured import compose_morphisms
    from colposet.generate import random_composable
    c1, c2, c3, f, g = random_composable(seed, 2, QQ)
    fs = chain_map_of_morphism(f, c1, c2)
    gs = chain_map_of_morphism(g, c2, c3, fs.target)
    gf = chain_map_of_morphism(compose_morphisms(g, f), c1, c3, fs.source, gs.target)
    assert gf.equals(gs.compose(fs))


@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_pi_is_quasi_isomorphism(seed, r):
    cp = random_instance(seed, r, 2, QQ)
    gc = gluing_complexes(Gluing.from_boolean_split(cp, 1))
    ok, bad = is_quasi_isomorphism(gc.pi)
    assert ok, bad


def test_invertibility_helper():
    assert is_invertible(Matrix.identity(0, QQ))
    assert not is_invertible(Matrix.zeros(1, 2, QQ))


def test_dual_of_boolean_uses_plain_carrier():
    cp = random_instance(2, 2, 2, QQ)
    dual = dual_coloured(cp)
    assert not isinstance(dual.carrier, BooleanLattice)
    assert dual.top == 0


def test_public_surface():
    import colposet
    for name in ("build_C", "build_K", "homology", "verify_main", "verify_les"):
        assert hasattr(colposet, name)
