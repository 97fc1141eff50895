"""Khovanov's colouring of the cube of resolutions of a link diagram.

Diagrams are PD codes: each crossing is ``(a, b, c, d)``, edge labels read
counterclockwise from the incoming under-strand.  The 0-smoothing joins
``a~b`` and ``c~d``; the 1-smoothing joins ``a~d`` and ``b~c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .algebra import ZZ, Matrix, Ring, kron
from .coloured import ColouredPoset
from .complexes import bigraded_homology, build_C, build_K
from .poset import BooleanLattice

MAX_CROSSINGS = 8


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    n_plus: int
    n_minus: int
    loops: int = 0  # crossingless unknotted components

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(v) for v in c) for c in self.crossings))
        for c in self.crossings:
            if len(c) != 4:
                raise DiagramError(f"crossing {c} does not have four labels")
        counts: dict[int, int] = {}
        for c in self.crossings:
            for v in c:
                counts[v] = counts.get(v, 0) + 1
        bad = sorted(v for v, k in counts.items() if k != 2)
        if bad:
            raise DiagramError(f"edge label {bad[0]} appears {counts[bad[0]]} times, expected twice")
        if self.n_plus < 0 or self.n_minus < 0 or self.n_plus + self.n_minus != len(self.crossings):
            raise DiagramError(f"n+ = {self.n_plus} and n- = {self.n_minus} do not add up to "
                               f"{len(self.crossings)} crossings")
        if self.loops < 0:
            raise DiagramError("loop count must be nonnegative")

    def __len__(self) -> int:
        return len(self.crossings)

    def mirror(self) -> "PlanarDiagram":
        """Swap over and under strands: rotate each quadruple by one step."""
        return PlanarDiagram(tuple((b, c, d, a) for a, b, c, d in self.crossings),
                             self.n_minus, self.n_plus, self.loops)


@dataclass(frozen=True)
class ResolutionState:
    """Circles of one complete resolution, ordered by their smallest edge label.

    Crossingless loops come last and carry no labels.
    """

    state: int
    circles: tuple[frozenset, ...]
    loops: int

    @property
    def count(self) -> int:
        return len(self.circles) + self.loops

    def circle_of(self) -> dict[int, int]:
        return {v: k for k, c in enumerate(self.circles) for v in c}


def resolve_state(d: PlanarDiagram, state: int) -> ResolutionState:
    """Smooth every crossing; bit ``i`` of ``state`` selects the 1-smoothing at crossing ``i``."""
    parent: dict[int, int] = {}

    def find(v):
        root = v
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    for i, (a, b, c, e) in enumerate(d.crossings):
        if (state >> i) & 1:
            union(a, e)
            union(b, c)
        else:
            union(a, b)
            union(c, e)
    groups: dict[int, set] = {}
    for v in list(parent):
        groups.setdefault(find(v), set()).add(v)
    circles = tuple(sorted((frozenset(g) for g in groups.values()), key=min))
    return ResolutionState(state, circles, d.loops)


# --------------------------------------------------------------------------
# the Frobenius algebra V

ONE, X = 0, 1
V_DEGREE = (1, -1)


class FrobeniusAlgebraV:
    """Rank-2 algebra on ``{1, X}`` with ``X^2 = 0``; basis index 0 is ``1``, index 1 is ``X``."""

    def __init__(self, ring: Ring = ZZ):
        self.ring = ring
        # columns: 1.1, 1.X, X.1, X.X
        self.m = Matrix(2, 4, ring, [{ONE: 1}, {X: 1}, {X: 1}, {}])
        # columns: 1 -> 1.X + X.1, X -> X.X
        self.mu = Matrix(4, 2, ring, [{1: 1, 2: 1}, {3: 1}])
        self.unit = Matrix(2, 1, ring, [{ONE: 1}])
        self.counit = Matrix(1, 2, ring, [{}, {0: 1}])

    def identities(self) -> dict[str, bool]:
        i2 = Matrix.identity(2, self.ring)
        m, mu = self.m, self.mu
        return {
            "associativity": m @ kron(m, i2) == m @ kron(i2, m),
            "coassociativity": kron(mu, i2) @ mu == kron(i2, mu) @ mu,
            "frobenius": mu @ m == kron(m, i2) @ kron(i2, mu) == kron(i2, m) @ kron(mu, i2),
            "unit": m @ kron(self.unit, i2) == i2 == m @ kron(i2, self.unit),
            "commutativity": m @ _swap(self.ring) == m,
        }


def _swap(ring: Ring) -> Matrix:
    return Matrix(4, 4, ring, [{0: 1}, {2: 1}, {1: 1}, {3: 1}])


def _multiply(u: int, v: int) -> int | None:
    if u == X and v == X:
        return None
    return X if X in (u, v) else ONE


def _digits(index: int, k: int) -> list[int]:
    # first tensor factor is the most significant digit
    return [(index >> (k - 1 - t)) & 1 for t in range(k)]


def _index(digits: Sequence[int]) -> int:
    out = 0
    for v in digits:
        out = (out << 1) | v
    return out


def _cover_map(src: ResolutionState, tgt: ResolutionState, ring: Ring) -> Matrix:
    """Merge by ``m`` or split by ``mu`` on the circles that change; identity on the rest."""
    ks, kt = src.count, tgt.count
    so, to = src.circle_of(), tgt.circle_of()
    nl, ml = len(src.circles), len(tgt.circles)
    cols = []
    if kt == ks - 1:
        # every old circle sits inside one new circle
        where = [to[min(c)] for c in src.circles] + [ml + t for t in range(src.loops)]
        for j in range(1 << ks):
            vals = _digits(j, ks)
            new: list = [None] * kt
            alive = True
            for old, nc in enumerate(where):
                if new[nc] is None:
                    new[nc] = vals[old]
                else:
                    prod = _multiply(new[nc], vals[old])
                    if prod is None:
                        alive = False
                        break
                    new[nc] = prod
            cols.append({_index(new): 1} if alive else {})
    elif kt == ks + 1:
        # every new circle sits inside one old circle
        origin = [so[min(c)] for c in tgt.circles] + [nl + t for t in range(tgt.loops)]
        split_old = next(o for o in set(origin) if origin.count(o) == 2)
        first, second = [t for t, o in enumerate(origin) if o == split_old]
        for j in range(1 << ks):
            vals = _digits(j, ks)
            base = [vals[o] for o in origin]
            col = {}
            if vals[split_old] == ONE:
                for a, b in ((ONE, X), (X, ONE)):
                    base[first], base[second] = a, b
                    col[_index(base)] = 1
            else:
                base[first] = base[second] = X
                col[_index(base)] = 1
            cols.append(col)
    else:
        raise DiagramError(f"circle count changes from {ks} to {kt} across a crossing")
    return Matrix(1 << kt, 1 << ks, ring, cols)


def internal_degrees(st: ResolutionState, rank: int) -> tuple[int, ...]:
    k = st.count
    return tuple(sum(V_DEGREE[v] for v in _digits(j, k)) + rank for j in range(1 << k))


def build_khovanov_colouring(d: PlanarDiagram, ring: Ring = ZZ) -> ColouredPoset:
    """``V^{(x) circles}`` over each state, internal degree shifted by the rank of the state."""
    r = len(d)
    b = BooleanLattice(r)
    states = [resolve_state(d, s) for s in range(1 << r)]
    ranks = [1 << st.count for st in states]
    maps = {(x, y): _cover_map(states[x], states[y], ring) for x, y in b.covers}
    degrees = [internal_degrees(st, b.rank_of(s)) for s, st in enumerate(states)]
    return ColouredPoset(b, ring, ranks, maps, degrees)


# --------------------------------------------------------------------------
# Euler characteristic oracle and normalisation

Laurent = dict  # exponent -> nonzero integer coefficient


def _laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    out: dict[int, int] = {}
    for i, u in a.items():
        for j, v in b.items():
            out[i + j] = out.get(i + j, 0) + u * v
    return {k: v for k, v in out.items() if v}


def kauffman_state_sum(d: PlanarDiagram) -> Laurent:
    """``sum_S (-1)^|S| q^|S| (q + 1/q)^circles(S)``, straight from the resolutions."""
    total: dict[int, int] = {}
    for s in range(1 << len(d)):
        size = bin(s).count("1")
        term = {size: -1 if size % 2 else 1}
        for _ in range(resolve_state(d, s).count):
            term = _laurent_mul(term, {1: 1, -1: 1})
        for k, v in term.items():
            total[k] = total.get(k, 0) + v
    return {k: v for k, v in sorted(total.items()) if v}


def graded_euler_characteristic(table: dict[tuple[int, int], int]) -> Laurent:
    """``sum (-1)^i q^j dims[(i, j)]``."""
    out: dict[int, int] = {}
    for (i, j), v in table.items():
        out[j] = out.get(j, 0) + (-1 if i % 2 else 1) * v
    return {k: v for k, v in sorted(out.items()) if v}


def graded_dimensions(cp: ColouredPoset) -> dict[tuple[int, int], int]:
    """``(cube degree, internal degree) -> dimension`` of the unnormalised cube complex."""
    b = cp.carrier
    out: dict[tuple[int, int], int] = {}
    for x in range(len(b)):
        k = b.r - b.rank_of(x)
        for q in cp.degrees[x]:
            out[(k, q)] = out.get((k, q), 0) + 1
    return out


def shift_indices(table: dict, n_plus: int, n_minus: int) -> dict:
    """Entry at ``(i, j)`` moves to ``(i - n_+, j + n_+ - 2 n_-)``."""
    return {(i - n_plus, j + n_plus - 2 * n_minus): v for (i, j), v in table.items()}


def normalise(table: dict, n_plus: int, n_minus: int) -> dict:
    """Shift, then negate the homological index to get the usual cohomological grading."""
    return {(-i, j): v for (i, j), v in shift_indices(table, n_plus, n_minus).items()}


def khovanov_table(d: PlanarDiagram, ring: Ring = ZZ, via: str = "K",
                   normalised: bool = True) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
    """Bigraded homology ``(i, j) -> (betti, torsion)`` of the diagram.

    ``via="C"`` computes the chain-poset complex instead of the cube; the two
    agree by the main theorem and the chain route is only practical for very
    small diagrams.
    """
    if len(d) > MAX_CROSSINGS:
        raise DiagramError(f"{len(d)} crossings exceeds the cap of {MAX_CROSSINGS}")
    cp = build_khovanov_colouring(d, ring)
    if via == "K":
        cx = build_K(cp)
    elif via == "C":
        cx = build_C(cp)
    else:
        raise ValueError("via must be 'K' or 'C'")
    table = bigraded_homology(cx)
    return normalise(table, d.n_plus, d.n_minus) if normalised else table


# --------------------------------------------------------------------------
# example diagrams

def braid_closure(word: Sequence[int], strands: int) -> PlanarDiagram:
    """PD code of the closure of a braid word (``i`` for sigma_i, ``-i`` for its inverse).

    Strands run upward, so a positive generator gives a positive crossing.
    """
    pos = list(range(1, strands + 1))
    fresh = strands + 1
    raw = []
    n_plus = n_minus = 0
    for g in word:
        i = abs(g)
        if not 1 <= i < strands:
            raise DiagramError(f"generator {g} needs more than {strands} strands")
        a_in, b_in = pos[i - 1], pos[i]
        a_out, b_out = fresh, fresh + 1
        fresh += 2
        if g > 0:
            raw.append((b_in, a_out, b_out, a_in))
            n_plus += 1
        else:
            raw.append((a_in, b_in, a_out, b_out))
            n_minus += 1
        pos[i - 1], pos[i] = b_out, a_out
    close = {pos[k]: k + 1 for k in range(strands)}
    crossings = tuple(tuple(close.get(v, v) for v in c) for c in raw)
    used = {v for c in crossings for v in c}
    loops = sum(1 for k in range(1, strands + 1) if k not in used)
    return PlanarDiagram(crossings, n_plus, n_minus, loops)


@lru_cache(maxsize=None)
def standard_diagrams() -> dict[str, PlanarDiagram]:
    return {
        "unknot": PlanarDiagram((), 0, 0, 1),
        "unknot_kink_pos": PlanarDiagram(((1, 1, 2, 2),), 1, 0),
        "unknot_kink_neg": PlanarDiagram(((1, 2, 2, 1),), 0, 1),
        "unknot_two_kinks": braid_closure((1, -2), 3),
        "unlink2": PlanarDiagram((), 0, 0, 2),
        "hopf_neg": PlanarDiagram(((4, 1, 3, 2), (2, 3, 1, 4)), 0, 2),
        "hopf_pos": braid_closure((1, 1), 2),
        "trefoil_left": PlanarDiagram(((1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)), 0, 3),
        "trefoil_right": braid_closure((1, 1, 1), 2),
        "figure_eight": PlanarDiagram(((4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)), 2, 2),
        "cinquefoil": braid_closure((1, 1, 1, 1, 1), 2),
        "torus_3_4": braid_closure((1, 2) * 4, 3),
    }
