"""Colouring of the edge cube of a graph by tensor powers of an algebra, one factor per component."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Sequence

from .algebra import ZZ, Matrix, Ring, kron
from .coloured import ColouredPoset
from .complexes import build_K, homology
from .poset import BooleanLattice


class GraphError(ValueError):
    pass


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleGraph:
    """Vertices ``0 .. n-1``; the order of ``edges`` fixes the atom order."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(tuple(int(v) for v in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)

    def components(self, state: int) -> list[int]:
        """Component label per vertex for the spanning subgraph on the edges in ``state``.

        A component is labelled by its smallest vertex.
        """
        parent = list(range(self.n))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for i, (u, v) in enumerate(self.edges):
            if (state >> i) & 1:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
        return [find(v) for v in range(self.n)]

    def component_count(self, state: int) -> int:
        return len(set(self.components(state)))


class AlgebraM:
    """A unital algebra structure on a free module of rank ``rank``.

    ``mult`` is the matrix of ``M (x) M -> M`` (first factor major) and
    ``unit`` the index of the basis vector that is the identity.
    """

    def __init__(self, rank: int, mult: Matrix, unit: int = 0):
        if mult.shape != (rank, rank * rank):
            raise AlgebraError(f"multiplication must be {rank} x {rank * rank}, got {mult.shape}")
        if not 0 <= unit < rank:
            raise AlgebraError("unit index out of range")
        self.rank, self.mult, self.unit_index, self.ring = rank, mult, unit, mult.ring

    @classmethod
    def truncated_polynomial(cls, rank: int = 2, ring: Ring = ZZ) -> "AlgebraM":
        """``R[x] / x^rank`` on the basis ``1, x, ..., x^(rank-1)``."""
        cols = [{i + j: 1} if i + j < rank else {} for i in range(rank) for j in range(rank)]
        return cls(rank, Matrix(rank, rank * rank, ring, cols))

    def over(self, ring: Ring) -> "AlgebraM":
        return AlgebraM(self.rank, self.mult.over(ring), self.unit_index)

    def problems(self) -> list[str]:
        n, m = self.rank, self.mult
        ident = Matrix.identity(n, self.ring)
        unit = Matrix(n, 1, self.ring, [{self.unit_index: 1}])
        out = []
        if m @ kron(m, ident) != m @ kron(ident, m):
            out.append("multiplication is not associative")
        if m @ kron(unit, ident) != ident or m @ kron(ident, unit) != ident:
            out.append("unit is not a two-sided identity")
        swap = Matrix(n * n, n * n, self.ring, [{j * n + i: 1} for i in range(n) for j in range(n)])
        if m @ swap != m:
            # merges happen in an order fixed by vertex labels, so squares only commute for commutative M
            out.append("multiplication is not commutative")
        return out

    def validate(self) -> "AlgebraM":
        probs = self.problems()
        if probs:
            raise AlgebraError("; ".join(probs))
        return self


def _merge_map(g: SimpleGraph, src: int, tgt: int, alg: AlgebraM) -> Matrix:
    """Map for ``S <_c S + e``: identity if ``e`` closes a cycle, else multiply the two joined factors."""
    cs, ct = g.components(src), g.components(tgt)
    fs, ft = sorted(set(cs)), sorted(set(ct))
    k, rank, ring = len(fs), alg.rank, alg.ring
    if len(ft) == k:
        return Matrix.identity(rank ** k, ring)
    # factor of each old component in the new ordering
    where = [ft.index(ct[root]) for root in fs]
    joined = [t for t in range(k) if where.count(where[t]) == 2]
    a, b = joined
    cols = []
    for digits in cartesian(range(rank), repeat=k):
        partial = {(): 1}
        prod = alg.mult.column(digits[a] * rank + digits[b])
        for t_new in range(len(ft)):
            olds = [t for t in range(k) if where[t] == t_new]
            choices = prod.items() if len(olds) == 2 else [(digits[olds[0]], 1)]
            partial = {key + (v,): c * w for key, c in partial.items() for v, w in choices}
        col: dict = {}
        for key, c in partial.items():
            idx = 0
            for v in key:
                idx = idx * rank + v
            col[idx] = col.get(idx, 0) + c
        cols.append(col)
    return Matrix(rank ** len(ft), rank ** k, ring, cols)


def build_chromatic_colouring(g: SimpleGraph, alg: AlgebraM | None = None, ring: Ring | None = None) -> ColouredPoset:
    """``M^{(x) c(S)}`` over each edge subset ``S``, factors ordered by smallest vertex."""
    alg = alg or AlgebraM.truncated_polynomial(2, ring or ZZ)
    if ring is not None and alg.ring != ring:
        alg = alg.over(ring)
    alg.validate()
    b = BooleanLattice(len(g.edges))
    ranks = [alg.rank ** g.component_count(s) for s in range(len(b))]
    maps = {(x, y): _merge_map(g, x, y, alg) for x, y in b.covers}
    return ColouredPoset(b, alg.ring, ranks, maps)


# --------------------------------------------------------------------------
# chromatic polynomial by deletion and contraction

Poly = tuple  # integer coefficients, constant term first


def _poly_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _chromatic(n: int, edges: frozenset) -> tuple[int, ...]:
    if not edges:
        return tuple([0] * n + [1])
    e = min(edges)
    u, v = e
    rest = edges - {e}
    deleted = _chromatic(n, rest)
    # contract v into u, drop the last vertex by relabelling it to v
    last = n - 1

    def ren(w):
        w = u if w == v else w
        return v if w == last else w

    merged = set()
    for a, b in rest:
        a, b = ren(a), ren(b)
        if a == b:
            return deleted  # contraction has a loop, so it contributes nothing
        merged.add((min(a, b), max(a, b)))
    contracted = _chromatic(n - 1, frozenset(merged))
    return tuple(_poly_sub(deleted, contracted))


def chromatic_polynomial(g: SimpleGraph) -> Poly:
    """Coefficients of ``P(G, k)`` from ``P(G) = P(G - e) - P(G / e)``."""
    edges = frozenset((min(u, v), max(u, v)) for u, v in g.edges)
    return _chromatic(g.n, edges)


def evaluate(poly: Sequence[int], k: int) -> int:
    return sum(c * k ** i for i, c in enumerate(poly))


@dataclass
class EulerReport:
    ok: bool
    state_sum: int
    chain_euler: int
    homology_euler: int | None
    chromatic_value: int

    def __bool__(self):
        return self.ok


def euler_check(g: SimpleGraph, alg: AlgebraM | None = None, ring: Ring | None = None,
                with_homology: bool = False) -> EulerReport:
    """``(-1)^r sum_k (-1)^k dim K_k == P(G, rank M)``.

    The state sum uses only component counts; the chain side reads the
    dimensions of the built cube complex, and optionally its homology.
    """
    alg = alg or AlgebraM.truncated_polynomial(2, ring or ZZ)
    r = len(g.edges)
    m = alg.rank
    states = sum((-1) ** bin(s).count("1") * m ** g.component_count(s) for s in range(1 << r))
    cx = build_K(build_chromatic_colouring(g, alg, ring))
    sign = -1 if r % 2 else 1
    chain = sign * cx.euler_characteristic()
    hom = None
    if with_homology:
        from .algebra import QQ
        h = homology(cx.over(QQ))
        hom = sign * sum((-1) ** n * b for n, b in h.betti.items())
    value = evaluate(chromatic_polynomial(g), m)
    ok = states == chain == value and (hom is None or hom == value)
    return EulerReport(ok, states, chain, hom, value)


def all_graphs(max_vertices: int = 4, max_edges: int = 6):
    """Every simple graph on ``1..max_vertices`` labelled vertices, edges in every subset (lexicographic order)."""
    for n in range(1, max_vertices + 1):
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        for mask in range(1 << len(pairs)):
            edges = tuple(p for i, p in enumerate(pairs) if (mask >> i) & 1)
            if len(edges) <= max_edges:
                yield SimpleGraph(n, edges)
