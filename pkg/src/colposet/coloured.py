"""Colourings of posets by free modules, their morphisms, and the standard constructions."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .algebra import Matrix, Ring, block_diag, kron, mat_mul, vstack
from .poset import (BooleanLattice, FinitePoset, PosetError, boolean_split, compress_mask,
                    expand_mask, product_poset, union_poset)


class ColouringError(ValueError):
    pass


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Report:
    """Outcome of a validation; falsy when something failed."""

    ok: bool
    message: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


OK = Report(True)


class ColouredPoset:
    """A poset with unique top and a functor to free modules.

    ``ranks[x]`` is the rank of the module at ``x`` and ``edge_maps[(x, y)]``
    the matrix on the cover ``x <_c y``.  Covers whose map is omitted are
    allowed only when one end has rank 0.  ``degrees`` optionally assigns an
    internal degree to every basis vector (bigraded mode).
    """

    def __init__(self, carrier: FinitePoset, ring: Ring, ranks: Sequence[int],
                 edge_maps: Mapping[tuple[int, int], Matrix],
                 degrees: Sequence[Sequence[int]] | None = None):
        self.carrier = carrier
        self.ring = ring
        self.top = carrier.require_top()
        if len(ranks) != len(carrier):
            raise ColouringError(f"{len(ranks)} ranks for {len(carrier)} elements")
        self.ranks = tuple(int(r) for r in ranks)
        if any(r < 0 for r in self.ranks):
            raise ColouringError("ranks must be nonnegative")
        maps = {}
        cover_set = set(carrier.covers)
        for key in edge_maps:
            if tuple(key) not in cover_set:
                a, b = key
                raise ColouringError(f"map given on non-cover {carrier.names[a]} < {carrier.names[b]}")
        for x, y in carrier.covers:
            m = edge_maps.get((x, y))
            if m is None:
                if self.ranks[x] and self.ranks[y]:
                    raise ColouringError(f"missing map on cover {carrier.names[x]} < {carrier.names[y]}")
                m = Matrix.zeros(self.ranks[y], self.ranks[x], ring)
            if m.ring != ring:
                raise ColouringError(f"map on {carrier.names[x]} < {carrier.names[y]} is over {m.ring}, not {ring}")
            if m.shape != (self.ranks[y], self.ranks[x]):
                raise ColouringError(
                    f"map on cover {carrier.names[x]} < {carrier.names[y]} has shape {m.shape}, "
                    f"expected {(self.ranks[y], self.ranks[x])}")
            maps[(x, y)] = m
        self.edge_maps = maps
        if degrees is not None:
            degrees = tuple(tuple(int(d) for d in ds) for ds in degrees)
            if len(degrees) != len(carrier) or any(len(d) != r for d, r in zip(degrees, self.ranks)):
                raise ColouringError("degrees must list one internal degree per basis vector")
        self.degrees = degrees
        self._composites: dict[tuple[int, int], Matrix] = {}

    def __repr__(self):
        return f"ColouredPoset({self.carrier!r}, ranks={self.ranks}, over {self.ring})"

    @property
    def is_boolean(self) -> bool:
        return isinstance(self.carrier, BooleanLattice)

    @property
    def is_bigraded(self) -> bool:
        return self.degrees is not None

    def composite(self, x, y) -> Matrix:
        return composite_map(self, x, y)

    def over(self, ring: Ring) -> "ColouredPoset":
        """Reinterpret integer data over another ring."""
        return ColouredPoset(self.carrier, ring, self.ranks,
                             {k: m.over(ring) for k, m in self.edge_maps.items()}, self.degrees)

    @cached_property
    def validation(self) -> Report:
        return validate_colouring(self)

    def check(self) -> "ColouredPoset":
        rep = self.validation
        if not rep:
            raise ColouringError(rep.message)
        return self

    def same_as(self, other: "ColouredPoset") -> bool:
        return (self.carrier.names == other.carrier.names and self.carrier.covers == other.carrier.covers
                and self.ring == other.ring and self.ranks == other.ranks
                and self.edge_maps == other.edge_maps and self.degrees == other.degrees)


def composite_map(cp: ColouredPoset, x, y) -> Matrix:
    """``F_x^y`` along the lexicographically smallest saturated chain."""
    p = cp.carrier
    x, y = p.index(x), p.index(y)
    key = (x, y)
    hit = cp._composites.get(key)
    if hit is not None:
        return hit
    if x == y:
        m = Matrix.identity(cp.ranks[x], cp.ring)
    else:
        if not p.leq(x, y):
            raise PosetError(f"{p.names[x]} is not below {p.names[y]}")
        z = next(z for z in p.covers_of(x) if p.leq(z, y))
        m = mat_mul(composite_map(cp, z, y), cp.edge_maps[(x, z)])
    cp._composites[key] = m
    return m


def _minimal(p: FinitePoset, elems: list[int]) -> list[int]:
    return [y for y in elems if not any(u != y and p.leq(u, y) for u in elems)]


def validate_colouring(cp: ColouredPoset) -> Report:
    """Check functoriality with the local cover-pair criterion.

    For each ``x`` and covers ``z1 != z2`` of ``x`` the two routes to every
    minimal common upper bound must agree; by induction on interval length
    this gives path independence everywhere.  Elements are visited top down,
    so the reported triple is a lowest-lying failure above the rest.
    """
    p = cp.carrier
    for x in reversed(p.linear_extension()):
        cov = p.covers_of(x)
        for a in range(len(cov)):
            for b in range(a + 1, len(cov)):
                z1, z2 = cov[a], cov[b]
                common = [y for y in p.upset(z1) if p.leq(z2, y)]
                for y in _minimal(p, common):
                    left = mat_mul(composite_map(cp, z1, y), cp.edge_maps[(x, z1)])
                    right = mat_mul(composite_map(cp, z2, y), cp.edge_maps[(x, z2)])
                    if left != right:
                        n = p.names
                        return Report(False, f"not a functor: routes {n[x]}->{n[z1]}->{n[y]} and "
                                             f"{n[x]}->{n[z2]}->{n[y]} differ", (x, z1, z2, y))
    return OK


@dataclass(frozen=True)
class ColouredMorphism:
    """``f`` maps element indices; ``tau[x]`` is ``F_1(x) -> F_2(f(x))``."""

    f: tuple[int, ...]
    tau: tuple[Matrix, ...]


def validate_morphism(m: ColouredMorphism, src: ColouredPoset, dst: ColouredPoset) -> Report:
    p1, p2 = src.carrier, dst.carrier
    if len(m.f) != len(p1) or len(m.tau) != len(p1):
        return Report(False, "morphism data does not match the source poset")
    for x, fx in enumerate(m.f):
        if not 0 <= fx < len(p2):
            return Report(False, f"f({p1.names[x]}) is not an element of the target", (x,))
    for x, y in p1.covers:
        if not p2.leq(m.f[x], m.f[y]):
            return Report(False, f"f is not order preserving on {p1.names[x]} < {p1.names[y]}", (x, y))
    for x, fx in enumerate(m.f):
        if (fx == dst.top) != (x == src.top):
            return Report(False, f"condition (1) fails: f({p1.names[x]}) = {p2.names[fx]}", (x,))
    for x, t in enumerate(m.tau):
        if t.ring != src.ring or t.shape != (dst.ranks[m.f[x]], src.ranks[x]):
            return Report(False, f"tau at {p1.names[x]} has the wrong shape or ring", (x,))
    for x, y in p1.covers:
        left = mat_mul(m.tau[y], src.edge_maps[(x, y)])
        right = mat_mul(composite_map(dst, m.f[x], m.f[y]), m.tau[x])
        if left != right:
            return Report(False, f"naturality fails on {p1.names[x]} < {p1.names[y]}", (x, y))
    return OK


def identity_morphism(cp: ColouredPoset) -> ColouredMorphism:
    return ColouredMorphism(tuple(range(len(cp.carrier))),
                            tuple(Matrix.identity(r, cp.ring) for r in cp.ranks))


def compose_morphisms(g: ColouredMorphism, f: ColouredMorphism) -> ColouredMorphism:
    """``g`` after ``f``."""
    return ColouredMorphism(tuple(g.f[fx] for fx in f.f),
                            tuple(mat_mul(g.tau[fx], t) for fx, t in zip(f.f, f.tau)))


# --------------------------------------------------------------------------
# constructions

def constant_colouring(p: FinitePoset, rank: int, ring: Ring) -> ColouredPoset:
    ident = Matrix.identity(rank, ring)
    return ColouredPoset(p, ring, [rank] * len(p), {c: ident for c in p.covers})


def restrict(cp: ColouredPoset, subset: Sequence[int], new_top=None) -> ColouredPoset:
    """Colouring restricted to ``subset`` with the induced order.

    Element ``k`` of the result is ``subset[k]``.
    """
    p = cp.carrier
    sub = [p.index(x) for x in subset]
    names = [p.names[x] for x in sub]
    rel = [(i, j) for i, a in enumerate(sub) for j, b in enumerate(sub) if i != j and p.leq(a, b)]
    q = FinitePoset.from_relation(names, rel)
    if q.top is None:
        raise PosetError("subset has no unique maximal element")
    if new_top is not None and sub[q.top] != p.index(new_top):
        raise PosetError(f"{new_top!r} is not the top of the subset")
    maps = {(i, j): composite_map(cp, sub[i], sub[j]) for i, j in q.covers}
    deg = None if cp.degrees is None else [cp.degrees[x] for x in sub]
    return ColouredPoset(q, cp.ring, [cp.ranks[x] for x in sub], maps, deg)


def restrict_boolean_face(cp: ColouredPoset, ell: int, with_atom: bool) -> ColouredPoset:
    """Face of a coloured Boolean lattice as a Boolean lattice of rank ``r - 1``.

    Remaining atoms keep their relative order.
    """
    b = cp.carrier
    if not isinstance(b, BooleanLattice):
        raise PosetError("carrier is not a Boolean lattice")
    face = BooleanLattice(b.r - 1)
    emb = [expand_mask(x, ell, with_atom) for x in range(1 << face.r)]
    maps = {(x, y): cp.edge_maps[(emb[x], emb[y])] for x, y in face.covers}
    deg = None if cp.degrees is None else [cp.degrees[e] for e in emb]
    return ColouredPoset(face, cp.ring, [cp.ranks[e] for e in emb], maps, deg)


def union_coloured(cp1: ColouredPoset, cp2: ColouredPoset) -> ColouredPoset:
    if cp1.ring != cp2.ring:
        raise ColouringError("rings differ")
    ring = cp1.ring
    p, emb1, emb2 = union_poset(cp1.carrier, cp2.carrier)
    t1, t2 = cp1.top, cp2.top
    r1, r2 = cp1.ranks[t1], cp2.ranks[t2]
    ranks = [0] * len(p)
    for x, e in enumerate(emb1):
        ranks[e] = cp1.ranks[x]
    for x, e in enumerate(emb2):
        ranks[e] = cp2.ranks[x]
    ranks[p.top] = r1 + r2
    maps = {}
    for cp, emb, first in ((cp1, emb1, True), (cp2, emb2, False)):
        for (x, y), m in cp.edge_maps.items():
            if y == cp.top:
                z = Matrix.zeros(r2 if first else r1, m.cols, ring)
                m = vstack([m, z] if first else [z, m], ring, m.cols)
            maps[(emb[x], emb[y])] = m
    return ColouredPoset(p, ring, ranks, maps)


def product_coloured(cp1: ColouredPoset, cp2: ColouredPoset) -> ColouredPoset:
    """Tensor-product colouring on the product poset (first factor major).

    For two Boolean carriers the result is Boolean with the atoms of the
    first factor first: element ``(a, b)`` becomes mask ``a | b << r1``.
    """
    if cp1.ring != cp2.ring:
        raise ColouringError("rings differ")
    ring = cp1.ring
    p1, p2 = cp1.carrier, cp2.carrier
    n2 = len(p2)
    if isinstance(p1, BooleanLattice) and isinstance(p2, BooleanLattice):
        p = BooleanLattice(p1.r + p2.r)
        idx = lambda a, b: a | (b << p1.r)  # noqa: E731
    else:
        p = product_poset(p1, p2)
        idx = lambda a, b: a * n2 + b  # noqa: E731
    ranks = [0] * len(p)
    deg = None
    if cp1.degrees is not None and cp2.degrees is not None:
        deg = [()] * len(p)
    for a in range(len(p1)):
        for b in range(n2):
            ranks[idx(a, b)] = cp1.ranks[a] * cp2.ranks[b]
            if deg is not None:
                deg[idx(a, b)] = tuple(u + v for u in cp1.degrees[a] for v in cp2.degrees[b])
    maps = {}
    for (a, a2), m in cp1.edge_maps.items():
        for b in range(n2):
            maps[(idx(a, b), idx(a2, b))] = kron(m, Matrix.identity(cp2.ranks[b], ring))
    for (b, b2), m in cp2.edge_maps.items():
        for a in range(len(p1)):
            maps[(idx(a, b), idx(a, b2))] = kron(Matrix.identity(cp1.ranks[a], ring), m)
    return ColouredPoset(p, ring, ranks, maps, deg)


def dual_coloured(cp: ColouredPoset) -> ColouredPoset:
    """Dual modules on the opposite poset; maps transposed onto reversed covers."""
    op = cp.carrier.opposite()
    if isinstance(cp.carrier, BooleanLattice):
        # keep the same names but a plain carrier: index order is not the Boolean one
        op = FinitePoset(cp.carrier.names, op.covers)
    maps = {(y, x): m.T for (x, y), m in cp.edge_maps.items()}
    return ColouredPoset(op, cp.ring, cp.ranks, maps)


# --------------------------------------------------------------------------
# gluing

@dataclass
class Gluing:
    """``P_1 cup_f P_2`` together with its two parts and their index maps into it."""

    glued: ColouredPoset
    part1: ColouredPoset
    part2: ColouredPoset
    emb1: tuple[int, ...]
    emb2: tuple[int, ...]
    morphism: ColouredMorphism | None = None
    ell: int | None = None

    @classmethod
    def from_morphism(cls, cp1: ColouredPoset, cp2: ColouredPoset, m: ColouredMorphism) -> "Gluing":
        rep = validate_morphism(m, cp1, cp2)
        if not rep:
            raise MorphismError(rep.message)
        p1, p2 = cp1.carrier, cp2.carrier
        n1 = len(p1)
        emb1 = tuple(range(n1))
        emb2 = tuple(n1 + y for y in range(len(p2)))
        names = [f"1:{s}" for s in p1.names] + [f"2:{s}" for s in p2.names]
        rel = [(a, b) for a, b in p1.covers] + [(n1 + a, n1 + b) for a, b in p2.covers]
        rel += [(a, n1 + m.f[a]) for a in range(n1)]
        p = FinitePoset.from_relation(names, rel)
        maps = {}
        for x, y in p.covers:
            if y < n1:
                maps[(x, y)] = composite_map(cp1, x, y)
            elif x >= n1:
                maps[(x, y)] = composite_map(cp2, x - n1, y - n1)
            else:
                maps[(x, y)] = mat_mul(composite_map(cp2, m.f[x], y - n1), m.tau[x])
        deg = None
        if cp1.degrees is not None and cp2.degrees is not None:
            deg = list(cp1.degrees) + list(cp2.degrees)
        glued = ColouredPoset(p, cp1.ring, cp1.ranks + cp2.ranks, maps, deg)
        return cls(glued, cp1, cp2, emb1, emb2, m)

    @classmethod
    def from_boolean_split(cls, cp: ColouredPoset, ell: int) -> "Gluing":
        """``B = B_0 cup_f B_1`` along atom ``a_ell`` with ``tau_x = F_x^{x v a_ell}``."""
        b = cp.carrier
        if not isinstance(b, BooleanLattice):
            raise PosetError("carrier is not a Boolean lattice")
        b0, _, f = boolean_split(b, ell)
        part1 = restrict_boolean_face(cp, ell, False)
        part2 = restrict_boolean_face(cp, ell, True)
        emb1 = tuple(expand_mask(x, ell, False) for x in range(len(part1.carrier)))
        emb2 = tuple(expand_mask(x, ell, True) for x in range(len(part2.carrier)))
        tau = tuple(cp.edge_maps[(x, f[x])] for x in emb1)
        morph = ColouredMorphism(tuple(compress_mask(f[x], ell) for x in emb1), tau)
        return cls(cp, part1, part2, emb1, emb2, morph, ell)


def glue(cp1: ColouredPoset, cp2: ColouredPoset, m: ColouredMorphism) -> ColouredPoset:
    """``P_1 cup_f P_2``; elements of ``P_1`` come first, then those of ``P_2``."""
    return Gluing.from_morphism(cp1, cp2, m).glued


def direct_sum(cps: Sequence[ColouredPoset]) -> ColouredPoset:
    """Elementwise direct sum of colourings on one carrier."""
    first = cps[0]
    p, ring = first.carrier, first.ring
    ranks = [sum(cp.ranks[x] for cp in cps) for x in range(len(p))]
    maps = {c: block_diag([cp.edge_maps[c] for cp in cps], ring) for c in p.covers}
    return ColouredPoset(p, ring, ranks, maps)
