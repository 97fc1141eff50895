"""Seeded random posets, colourings and morphisms.

Colourings are built as direct sums of interval modules with scalar
structure maps, then conjugated elementwise by random unimodular integer
matrices.  Commuting squares therefore hold by construction, and the data is
integral so it can be read over any of the supported rings.
"""
from __future__ import annotations

import random
from typing import Sequence

from .algebra import ZZ, Matrix, Ring, block_diag, mat_mul
from .coloured import ColouredMorphism, ColouredPoset, composite_map
from .poset import BooleanLattice, FinitePoset

SCALARS = (1, 1, 1, -1, 2, 3, 0)


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_unimodular(n: int, rng: random.Random, steps: int | None = None) -> tuple[Matrix, Matrix]:
    """A random integer matrix of determinant +-1 together with its inverse."""
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    inv = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1, 2, -2))
        # row_i += c row_j on a; the inverse gets col_j -= c col_i
        for k in range(n):
            a[i][k] += c * a[j][k]
        for k in range(n):
            inv[k][j] -= c * inv[k][i]
    if n and rng.random() < 0.5:
        i = rng.randrange(n)
        a[i] = [-v for v in a[i]]
        for row in inv:
            row[i] = -row[i]
    return Matrix.from_rows(a, ZZ, n), Matrix.from_rows(inv, ZZ, n)


def random_graded_poset(rng, height: int | None = None, max_width: int = 3) -> FinitePoset:
    """Graded poset with a bottom ``0`` and a top ``1``; covers join consecutive levels."""
    rng = _rng(rng)
    height = height if height is not None else rng.randint(1, 4)
    levels = [[0]]
    names = ["0"]
    for k in range(1, height):
        width = rng.randint(1, max_width)
        levels.append(list(range(len(names), len(names) + width)))
        names.extend(f"x{k}_{i}" for i in range(width))
    if height >= 1:
        levels.append([len(names)])
        names.append("1")
    covers = set()
    for lower, upper in zip(levels, levels[1:]):
        for y in upper:
            covers.add((rng.choice(lower), y))
        for x in lower:
            if not any(c[0] == x for c in covers if c[1] in upper):
                covers.add((x, rng.choice(upper)))
        for x in lower:
            for y in upper:
                if rng.random() < 0.3:
                    covers.add((x, y))
    return FinitePoset(names, sorted(covers))


def random_poset_with_top(rng, size: int) -> FinitePoset:
    """Arbitrary (often ungraded) poset on ``size`` elements whose last element is the top."""
    rng = _rng(rng)
    n = max(size, 1)
    rel = [(i, j) for i in range(n - 1) for j in range(i + 1, n - 1) if rng.random() < 0.35]
    rel += [(i, n - 1) for i in range(n - 1)]
    return FinitePoset.from_relation([f"p{i}" for i in range(n - 1)] + ["1"], rel)


def _heights(p: FinitePoset) -> list[int]:
    h = [0] * len(p)
    for x in p.linear_extension():
        for y in p.covers_of(x):
            h[y] = max(h[y], h[x] + 1)
    return h


def _interval_colouring(p: FinitePoset, rng: random.Random, max_rank: int, boolean: bool) -> ColouredPoset:
    n = len(p)
    ranks = [0] * n
    summands = []
    for _ in range(rng.randint(1, 2 * max_rank + 1)):
        # long intervals are favoured so that larger lattices get full fibers
        a = rng.choice(p.minimal) if rng.random() < 0.5 else rng.randrange(n)
        above = p.upset(a)
        b = p.top if p.top is not None and rng.random() < 0.5 else rng.choice(above)
        members = [x for x in above if p.leq(x, b)]
        if any(ranks[x] >= max_rank for x in members):
            continue
        for x in members:
            ranks[x] += 1
        if boolean:
            weights = [rng.choice(SCALARS) for _ in range(p.r)]
            summands.append((set(members), ("atoms", weights)))
        else:
            summands.append((set(members), ("height", rng.choice((1, 1, -1, 2, 0)))))
    heights = _heights(p)

    def scalar(kind, x, y):
        tag, w = kind
        if tag == "atoms":
            s = 1
            for i in range(p.r):
                if (y >> i) & 1 and not (x >> i) & 1:
                    s *= w[i]
            return s
        return w ** (heights[y] - heights[x])

    # basis of F(x): the summands containing x, in summand order
    slots = [[k for k, (mem, _) in enumerate(summands) if x in mem] for x in range(n)]
    maps = {}
    for x, y in p.covers:
        pos = {k: i for i, k in enumerate(slots[y])}
        cols = []
        for k in slots[x]:
            mem, kind = summands[k]
            cols.append({pos[k]: scalar(kind, x, y)} if k in pos else {})
        maps[(x, y)] = Matrix(len(slots[y]), len(slots[x]), ZZ, cols)
    gs = [random_unimodular(r, rng) for r in ranks]
    conj = {(x, y): mat_mul(mat_mul(gs[y][0], m), gs[x][1]) for (x, y), m in maps.items()}
    return ColouredPoset(p, ZZ, ranks, conj)


def random_colouring(p: FinitePoset, seed, max_rank: int = 3, ring: Ring = ZZ) -> ColouredPoset:
    rng = _rng(seed)
    cp = _interval_colouring(p, rng, max_rank, isinstance(p, BooleanLattice))
    return cp if ring == ZZ else cp.over(ring)


def random_instance(seed, r: int, max_rank: int = 3, ring: Ring = ZZ) -> ColouredPoset:
    """Deterministic random coloured Boolean lattice of rank ``r``."""
    if not 0 <= r <= 6:
        raise ValueError("Boolean rank must lie in 0..6")
    return random_colouring(BooleanLattice(r), seed, max_rank, ring)


def _random_order_map(p1: FinitePoset, p2: FinitePoset, rng: random.Random) -> tuple[int, ...] | None:
    t1, t2 = p1.require_top(), p2.require_top()
    f = [None] * len(p1)
    for x in p1.linear_extension():
        if x == t1:
            f[x] = t2
            continue
        lows = [f[z] for z in p1.covered_by(x)]
        choices = [y for y in range(len(p2)) if y != t2 and all(p2.leq(v, y) for v in lows)]
        if not choices:
            return None
        f[x] = rng.choice(choices)
    return tuple(f)


def pullback_extension(target: ColouredPoset, p1: FinitePoset, f: Sequence[int], rng: random.Random,
                       max_rank: int = 3, scale: int = 1) -> tuple[ColouredPoset, ColouredMorphism]:
    """A colouring of ``p1`` with a morphism to ``target`` over the order map ``f``.

    The colouring is ``g (F_2 f + E) g^{-1}`` for a random extra functor ``E``
    and the morphism is ``scale`` times projection onto the first summand
    after ``g^{-1}``.
    """
    ring = target.ring
    extra = _interval_colouring(p1, rng, max_rank, False)
    ranks = [target.ranks[f[x]] + extra.ranks[x] for x in range(len(p1))]
    gs = [random_unimodular(r, rng) for r in ranks]
    maps = {}
    for x, y in p1.covers:
        base = block_diag([composite_map(target, f[x], f[y]), extra.edge_maps[(x, y)].over(ring)], ring)
        maps[(x, y)] = mat_mul(mat_mul(gs[y][0].over(ring), base), gs[x][1].over(ring))
    src = ColouredPoset(p1, ring, ranks, maps)
    tau = []
    for x in range(len(p1)):
        r2 = target.ranks[f[x]]
        proj = Matrix(r2, ranks[x], ring, [{j: scale} for j in range(r2)] + [{} for _ in range(extra.ranks[x])])
        tau.append(mat_mul(proj, gs[x][1].over(ring)))
    return src, ColouredMorphism(tuple(f), tuple(tau))


def random_morphism(seed, max_rank: int = 2, ring: Ring = ZZ, tries: int = 50
                    ) -> tuple[ColouredPoset, ColouredPoset, ColouredMorphism]:
    """Random ``(P_1, F_1) -> (P_2, F_2)`` between small graded posets."""
    rng = _rng(seed)
    for _ in range(tries):
        p2 = random_graded_poset(rng, rng.randint(1, 3), 2)
        p1 = random_graded_poset(rng, rng.randint(1, 3), 2)
        f = _random_order_map(p1, p2, rng)
        if f is None:
            continue
        tgt = _interval_colouring(p2, rng, max_rank, False)
        src, m = pullback_extension(tgt, p1, f, rng, max_rank, rng.choice((1, 1, -1, 2)))
        if ring != ZZ:
            src, tgt = src.over(ring), tgt.over(ring)
            m = ColouredMorphism(m.f, tuple(t.over(ring) for t in m.tau))
        return src, tgt, m
    raise RuntimeError("could not find an order map; try another seed")


def random_composable(seed, max_rank: int = 2, ring: Ring = ZZ, tries: int = 50):
    """``(F_1, F_2, F_3, f, g)`` with ``f: F_1 -> F_2`` and ``g: F_2 -> F_3``."""
    rng = _rng(seed)
    for _ in range(tries):
        p3 = random_graded_poset(rng, rng.randint(1, 3), 2)
        p2 = random_graded_poset(rng, rng.randint(1, 3), 2)
        p1 = random_graded_poset(rng, rng.randint(1, 3), 2)
        g_map = _random_order_map(p2, p3, rng)
        f_map = _random_order_map(p1, p2, rng)
        if g_map is None or f_map is None:
            continue
        c3 = _interval_colouring(p3, rng, max_rank, False)
        c2, g = pullback_extension(c3, p2, g_map, rng, max_rank)
        c1, f = pullback_extension(c2, p1, f_map, rng, max_rank)
        if ring != ZZ:
            c1, c2, c3 = c1.over(ring), c2.over(ring), c3.over(ring)
            f = ColouredMorphism(f.f, tuple(t.over(ring) for t in f.tau))
            g = ColouredMorphism(g.f, tuple(t.over(ring) for t in g.tau))
        return c1, c2, c3, f, g
    raise RuntimeError("could not find composable order maps; try another seed")
