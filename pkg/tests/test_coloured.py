import random

import pytest
from hypothesis import given, strategies as st

from colposet.algebra import GF, QQ, ZZ, Matrix
from colposet.coloured import (ColouredMorphism, ColouredPoset, ColouringError, Gluing, MorphismError,
                               composite_map, compose_morphisms, constant_colouring, dual_coloured, glue,
                               identity_morphism, product_coloured, restrict, restrict_boolean_face,
                               union_coloured, validate_colouring, validate_morphism)
from colposet.generate import random_colouring, random_composable, random_instance, \
    random_poset_with_top
from colposet.khovanov import build_khovanov_colouring, standard_diagrams
from colposet.poset import BooleanLattice, FinitePoset, PosetError, chain_poset, point

B2 = BooleanLattice(2)


def scalar(v, ring=ZZ):
    return Matrix.from_rows([[v]], ring)


def b2_colouring(m1, m2, n1, n2):
    """Rank-1 colouring of B_2: m_i on 0 < a_i, n_i on a_i < 1."""
    maps = {(0, 1): scalar(m1), (0, 2): scalar(m2), (1, 3): scalar(n1), (2, 3): scalar(n2)}
    return ColouredPoset(B2, ZZ, [1] * 4, maps)


def test_composite_examples():
    cp = b2_colouring(2, 3, 3, 2)
    assert composite_map(cp, 1, 1) == Matrix.identity(1, ZZ)
    assert composite_map(cp, 0, 3) == scalar(6)
    assert validate_colouring(cp)
    const = constant_colouring(chain_poset(4), 2, QQ)
    assert composite_map(const, 0, 3) == Matrix.identity(2, QQ)
    with pytest.raises(PosetError):
        composite_map(cp, 1, 2)


def test_anticommuting_square_reported():
    rep = validate_colouring(b2_colouring(1, 1, 1, -1))
    assert not rep
    assert rep.witness[0] == 0 and rep.witness[-1] == 3 and set(rep.witness[1:3]) == {1, 2}


def test_bad_shapes_rejected():
    with pytest.raises(ColouringError):
        ColouredPoset(B2, ZZ, [1, 1, 1, 2], {(0, 1): scalar(1), (0, 2): scalar(1),
                                             (1, 3): scalar(1), (2, 3): scalar(1)})
    with pytest.raises(ColouringError):
        ColouredPoset(B2, ZZ, [1] * 4, {(0, 3): scalar(1)})


def test_missing_top_rejected():
    with pytest.raises(PosetError):
        ColouredPoset(FinitePoset(["x", "y"], []), ZZ, [1, 1], {})


def test_khovanov_colourings_are_functors():
    for name, d in standard_diagrams().items():
        if len(d) <= 4:
            assert validate_colouring(build_khovanov_colouring(d)), name


def test_morphism_examples():
    cp = random_instance(5, 2)
    assert validate_morphism(identity_morphism(cp), cp, cp)
    p = chain_poset(3)
    src = constant_colouring(p, 1, ZZ)
    bad = ColouredMorphism((0, 2, 2), tuple(Matrix.identity(1, ZZ) for _ in range(3)))
    rep = validate_morphism(bad, src, src)
    assert not rep and "condition (1)" in rep.message
    g = Gluing.from_boolean_split(random_instance(11, 3), 2)
    assert validate_morphism(g.morphism, g.part1, g.part2)


def test_naturality_failure_reported():
    cp = constant_colouring(chain_poset(2), 1, ZZ)
    m = ColouredMorphism((0, 1), (scalar(2), scalar(1)))
    rep = validate_morphism(m, cp, cp)
    assert not rep and "naturality" in rep.message
    with pytest.raises(MorphismError):
        glue(cp, cp, m)


def test_gluing_two_rank_one_booleans():
    a = random_instance(1, 1)
    iso = identity_morphism(a)
    glued = glue(a, a, iso)
    assert len(glued.carrier) == 4 and glued.carrier.is_graded
    assert [glued.carrier.rank_of(x) for x in range(4)] == [0, 1, 1, 2]
    assert validate_colouring(glued)


def test_glue_point_into_poset():
    target = random_colouring(chain_poset(3), 2, max_rank=2)
    src = ColouredPoset(point(), ZZ, [target.ranks[target.top]], {})
    m = ColouredMorphism((target.top,), (Matrix.identity(target.ranks[target.top], ZZ),))
    glued = glue(src, target, m)
    assert len(glued.carrier) == 4 and validate_colouring(glued)


@given(st.integers(0, 10 ** 6), st.integers(1, 4), st.data())
def test_regluing_a_split_gives_back_the_lattice(seed, r, data):
    cp = random_instance(seed, r, 2)
    ell = data.draw(st.integers(1, r))
    g = Gluing.from_boolean_split(cp, ell)
    again = Gluing.from_morphism(g.part1, g.part2, g.morphism)
    where = list(g.emb1) + list(g.emb2)
    p, q = again.glued.carrier, cp.carrier
    assert all(p.leq(x, y) == q.leq(where[x], where[y]) for x in range(len(p)) for y in range(len(p)))
    for x, y in p.covers:
        assert again.glued.edge_maps[(x, y)] == cp.edge_maps[(where[x], where[y])]
    assert validate_colouring(again.glued)


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_random_colourings_validate(seed, size):
    p = random_poset_with_top(random.Random(seed), size)
    assert validate_colouring(random_colouring(p, seed, 3))


def test_union_examples():
    a, b = random_instance(3, 2), random_instance(4, 1)
    u = union_coloured(a, b)
    assert u.ranks[u.top] == a.ranks[a.top] + b.ranks[b.top]
    assert validate_colouring(u)
    empty_point = ColouredPoset(point(), ZZ, [0], {})
    v = union_coloured(a, empty_point)
    assert len(v.carrier) == len(a.carrier) and v.ranks == a.ranks


def test_product_examples():
    a, b = random_instance(6, 1, 2), random_instance(7, 2, 2)
    prod = product_coloured(a, b)
    assert isinstance(prod.carrier, BooleanLattice) and prod.carrier.r == 3
    for x in range(2):
        for y in range(4):
            assert prod.ranks[x | (y << 1)] == a.ranks[x] * b.ranks[y]
    assert validate_colouring(prod)
    unit = ColouredPoset(point(), ZZ, [1], {})
    c = random_colouring(chain_poset(3), 8, 2)
    same = product_coloured(c, unit)
    assert same.ranks == c.ranks and all(same.edge_maps[k] == c.edge_maps[k] for k in c.edge_maps)


def test_constant_colouring_examples():
    p = random_poset_with_top(random.Random(2), 5)
    cp = constant_colouring(p, 3, GF(3))
    assert validate_colouring(cp)
    assert all(composite_map(cp, x, p.top) == Matrix.identity(3, GF(3)) for x in range(len(p)))


def test_dual_examples():
    p = chain_poset(2)
    cp = ColouredPoset(p, ZZ, [2, 1], {(0, 1): Matrix.from_rows([[1, 2]], ZZ)})
    dual = dual_coloured(cp)
    assert dual.edge_maps[(1, 0)].to_rows() == [[1], [2]]
    back = dual_coloured(dual)
    assert back.edge_maps == cp.edge_maps and back.ranks == cp.ranks


def test_restrict_examples():
    cp = random_instance(9, 3, 2)
    whole = restrict(cp, range(len(cp.carrier)))
    assert whole.ranks == cp.ranks
    assert all(whole.edge_maps[k] == cp.edge_maps[k] for k in cp.edge_maps)
    upper = [x for x in range(8) if x & 1]
    face = restrict(cp, upper)
    assert len(face.carrier) == 4 and face.ranks == restrict_boolean_face(cp, 1, True).ranks
    top_only = restrict(cp, [cp.top])
    assert top_only.ranks == (cp.ranks[cp.top],)
    with pytest.raises(PosetError):
        restrict(cp, [1, 2])


@given(st.integers(0, 10 ** 6))
def test_morphism_composition_is_a_morphism(seed):
    c1, c2, c3, f, g = random_composable(seed)
    assert validate_morphism(f, c1, c2) and validate_morphism(g, c2, c3)
    assert validate_morphism(compose_morphisms(g, f), c1, c3)
    assert compose_morphisms(identity_morphism(c2), f) == f
