"""Acceptance criteria, one test each; the summary lists their outcome."""
import random
import time

import pytest

from colposet.algebra import GF, QQ, ZZ, Matrix
from colposet.chromatic import AlgebraM, all_graphs, build_chromatic_colouring, chromatic_polynomial, evaluate
from colposet.coloured import (ColouredPoset, Gluing, compose_morphisms, constant_colouring, dual_coloured,
                               identity_morphism, union_coloured)
from colposet.complexes import (BUILD_STATS, build_C, build_D_truncated, build_K, build_S_truncated,
                                chain_map_of_morphism, cohomology, cube_ses, gluing_complexes, homology,
                                homotopy_defect, homotopy_h, identity_map, induced_map_on_homology,
                                is_quasi_isomorphism, map_phi, map_phi_prime, split_S, split_sign,
                                verify_les, verify_main, verify_ses)
from colposet.generate import (random_colouring, random_composable, random_graded_poset, random_instance,
                               random_morphism, random_poset_with_top)
from colposet.khovanov import (build_khovanov_colouring, graded_dimensions, graded_euler_characteristic,
                               kauffman_state_sum, khovanov_table, standard_diagrams)
from colposet.poset import chain_poset

import oracles

KINDS = ("C", "K", "S", "D", "Q")


def small_poset_colouring(seed, size, max_rank=2, ring=QQ):
    return random_colouring(random_poset_with_top(random.Random(seed), size), seed, max_rank, ring)


def general_gluings(count=12):
    for seed in range(count):
        src, tgt, m = random_morphism(seed, 3, QQ)
        yield Gluing.from_morphism(src, tgt, m)


def boolean_splits(count=4):
    for seed in range(count):
        cp = random_instance(100 + seed, 2 + seed % 3, 3, QQ)
        for ell in range(1, cp.carrier.r + 1):
            yield Gluing.from_boolean_split(cp, ell)


@pytest.mark.criterion("AC1", "phi: K -> C is a quasi-isomorphism on 50 random lattices per ring")
def test_ac1_main_theorem():
    start = time.perf_counter()
    failures = []
    for ring in (QQ, GF(2), GF(3), ZZ):
        for seed in range(50):
            r = 1 + seed % 4
            rep = verify_main(random_instance(seed, r, 3, ring))
            if not rep:
                failures.append((str(ring), seed, r, rep.failures))
    elapsed = time.perf_counter() - start
    assert not failures, failures
    assert elapsed < 60, f"took {elapsed:.1f} s"


@pytest.mark.criterion("AC2", "d^2 = 0 for every C, K, S, D and Q built")
def test_ac2_d_squared():
    for seed in range(10):
        cp = random_instance(seed, 1 + seed % 3, 3, QQ)
        build_C(cp)
        build_K(cp)
        build_S_truncated(cp, 4)
        build_D_truncated(small_poset_colouring(seed, 5), 5)
        gluing_complexes(Gluing.from_boolean_split(cp, 1))
    for kind in KINDS:
        assert BUILD_STATS[("d2_checked", kind)] > 0, kind
        assert BUILD_STATS[("d2_failures", kind)] == 0, kind


@pytest.mark.criterion("AC3", "hd + dh = id on truncated repeat complexes up to degree 5")
def test_ac3_null_homotopy():
    checked = 0
    for seed in range(12):
        cp = small_poset_colouring(seed, 2 + seed % 5)
        dc = build_D_truncated(cp, 6)
        defect = homotopy_defect(dc, homotopy_h(dc))
        assert set(range(1, 6)) <= set(defect)
        for n, m in defect.items():
            assert m.is_zero(), (seed, n)
        checked += 1
    assert checked >= 10


@pytest.mark.criterion("AC4", "S_k = C_k + D_k basis-wise with d closed on each block, k <= 6")
def test_ac4_decomposition():
    for seed in range(10):
        cp = small_poset_colouring(seed, 2 + seed % 5)
        s = build_S_truncated(cp, 6)
        strict, rep = split_S(s)
        c = build_C(cp)
        strict_part = s.subcomplex(strict)
        s.subcomplex(rep)  # raises if d leaves the repeat block
        for n in s.degrees:
            assert sorted(strict[n] + rep[n]) == list(range(s.dim(n)))
            assert strict_part.dim(n) == c.dim(n)
            if n in c.degrees:
                assert strict_part.d(n) == c.d(n)


@pytest.mark.criterion("AC5", "constant colourings of posets with 0 and 1 are acyclic")
def test_ac5_constant_acyclic():
    for seed in range(12):
        p = random_graded_poset(random.Random(seed))
        for rank in (1, 4):
            assert homology(build_C(constant_colouring(p, rank, ZZ))).is_zero(), (seed, rank)


@pytest.mark.criterion("AC6", "homology of a union is the sum of the homologies")
def test_ac6_union():
    for seed in range(12):
        a = small_poset_colouring(seed, 1 + seed % 6, 3)
        b = small_poset_colouring(1000 + seed, 1 + (seed * 5) % 6, 3)
        hu, ha, hb = (homology(build_C(x)) for x in (union_coloured(a, b), a, b))
        degrees = range(0, 8)
        assert hu.dims(degrees) == [x + y for x, y in zip(ha.dims(degrees), hb.dims(degrees))]


@pytest.mark.criterion("AC7", "long exact sequences of gluings and the cube short exact sequence")
def test_ac7_les():
    count = 0
    for g in general_gluings():
        rep = verify_les(g)
        assert rep, rep.failures
        count += 1
    for g in boolean_splits():
        assert verify_les(g)
        assert verify_ses(*cube_ses(g))
        count += 1
    assert count >= 20


@pytest.mark.criterion("AC8", "pi_* is an isomorphism and pi phi' = phi")
def test_ac8_pi_and_lemma():
    for g in list(general_gluings()) + list(boolean_splits()):
        gc = gluing_complexes(g)
        ok, bad = is_quasi_isomorphism(gc.pi)
        assert ok, bad
        if g.ell is None:
            continue
        lhs = gc.pi.compose(map_phi_prime(g, gc.quotient))
        rhs = map_phi(g.part1, None, gc.c_part1)
        for n in rhs.source.degrees:
            assert lhs[n] == rhs[n].scale(split_sign(g.ell))
            if g.ell == 1:
                assert lhs[n] == rhs[n]


def duality_dims(cp):
    n = cp.carrier.rank_of(cp.top)
    lhs = homology(build_C(dual_coloured(cp)))
    rhs = cohomology(build_C(cp))
    return [lhs.betti.get(k, 0) for k in range(n + 1)], [rhs.betti.get(n - k, 0) for k in range(n + 1)]


def duality_counterexample():
    """Chain ``0 < m < 1`` coloured by ``Q`` at the top and zero elsewhere."""
    p = chain_poset(3)
    return ColouredPoset(p, QQ, [0, 0, 1], {(0, 1): Matrix.zeros(0, 0, QQ), (1, 2): Matrix.zeros(1, 0, QQ)})


def test_duality_counterexample_is_a_counterexample():
    lhs, rhs = duality_dims(duality_counterexample())
    assert lhs == [0, 0, 0] and rhs == [0, 0, 1]


@pytest.mark.criterion("AC9", "H_k(P^op, F^dual) has the dimension of H^(n-k)(P, F)")
@pytest.mark.xfail(strict=True, raises=AssertionError,
                   reason="the identity fails on posets such as a coloured 3-chain, see the ledger")
def test_ac9_duality():
    instances = [duality_counterexample()]
    for seed in range(12):
        instances.append(random_colouring(random_graded_poset(random.Random(seed)), seed, 2, QQ))
    mismatches = []
    for i, cp in enumerate(instances):
        lhs, rhs = duality_dims(cp)
        if lhs != rhs:
            mismatches.append((i, lhs, rhs))
    assert not mismatches, mismatches


@pytest.mark.criterion("AC10", "Khovanov cube matches the state sum and unknot tables coincide")
def test_ac10_khovanov():
    start = time.perf_counter()
    for name, d in standard_diagrams().items():
        chi = graded_euler_characteristic(graded_dimensions(build_khovanov_colouring(d)))
        sign = -1 if len(d) % 2 else 1
        assert chi == {k: sign * v for k, v in kauffman_state_sum(d).items()}, name
    diagrams = standard_diagrams()
    tables = [khovanov_table(diagrams[n]) for n in ("unknot", "unknot_kink_pos", "unknot_kink_neg",
                                                    "unknot_two_kinks")]
    assert all(t == tables[0] for t in tables)
    assert {k: b for k, (b, _) in tables[0].items() if b} == oracles.KH_UNKNOT
    elapsed = time.perf_counter() - start
    assert elapsed < 30, f"took {elapsed:.1f} s"


@pytest.mark.criterion("AC11", "chromatic Euler identity on every graph with <= 4 vertices and <= 6 edges")
def test_ac11_chromatic():
    alg = AlgebraM.truncated_polynomial(2)
    count = 0
    for g in all_graphs(4, 6):
        r = len(g.edges)
        k = build_K(build_chromatic_colouring(g, alg))
        lhs = (-1) ** r * k.euler_characteristic()
        assert lhs == evaluate(chromatic_polynomial(g), 2) == oracles.count_colourings(g.n, g.edges, 2), g
        count += 1
    assert count == 1 + 2 + 8 + 64


@pytest.mark.criterion("AC12", "(g f)_* = g_* f_* and id_* = id on homology")
def test_ac12_functor():
    for seed in range(15):
        c1, c2, c3, f, g = random_composable(seed, 2, QQ)
        fs = chain_map_of_morphism(f, c1, c2)
        gs = chain_map_of_morphism(g, c2, c3, fs.target)
        gf = chain_map_of_morphism(compose_morphisms(g, f), c1, c3, fs.source, gs.target)
        ids = chain_map_of_morphism(identity_morphism(c2), c2, c2, fs.target, fs.target)
        assert ids.equals(identity_map(fs.target))
        for n in fs.source.degrees:
            assert induced_map_on_homology(gf, n) == induced_map_on_homology(gs, n) @ induced_map_on_homology(fs, n)
            hid = induced_map_on_homology(ids, n)
            assert hid == Matrix.identity(hid.rows, QQ)
