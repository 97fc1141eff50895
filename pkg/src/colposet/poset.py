"""Finite posets, Boolean lattices with ordered atoms, chains and the cube signs."""
from __future__ import annotations

from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Sequence


class PosetError(ValueError):
    pass


class FinitePoset:
    """A finite poset given by its cover relation.

    Elements are the indices ``0..n-1``; ``names`` gives them printable
    labels.  Methods accepting an element take either form.
    """

    def __init__(self, names: Sequence[str], covers: Iterable[tuple[int, int]]):
        self.names = tuple(str(x) for x in names)
        if len(set(self.names)) != len(self.names):
            raise PosetError("element names must be distinct")
        n = len(self.names)
        cov = sorted(set((int(a), int(b)) for a, b in covers))
        for a, b in cov:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise PosetError(f"bad cover pair {(a, b)}")
        self.covers = tuple(cov)
        self._up_covers = [[] for _ in range(n)]
        self._down_covers = [[] for _ in range(n)]
        for a, b in cov:
            self._up_covers[a].append(b)
            self._down_covers[b].append(a)
        self._order = self._topological_order()
        # upsets as bitmasks, filled from the top down
        up = [0] * n
        for x in reversed(self._order):
            m = 1 << x
            for y in self._up_covers[x]:
                m |= up[y]
            up[x] = m
        self._up = up
        for a, b in cov:
            for z in self._up_covers[a]:
                if z != b and (up[z] >> b) & 1:
                    raise PosetError(
                        f"cover {self.names[a]} < {self.names[b]} is implied through {self.names[z]}")

    def _topological_order(self) -> list[int]:
        n = len(self.names)
        indeg = [len(self._down_covers[x]) for x in range(n)]
        ready = [x for x in range(n) if indeg[x] == 0]
        order = []
        while ready:
            x = min(ready)
            ready.remove(x)
            order.append(x)
            for y in self._up_covers[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    ready.append(y)
        if len(order) != n:
            raise PosetError("cover relation has a cycle")
        return order

    @classmethod
    def from_relation(cls, names: Sequence[str], leq_pairs: Iterable[tuple[int, int]]) -> "FinitePoset":
        """Poset generated by arbitrary relations ``a <= b`` (transitively closed, then reduced)."""
        n = len(names)
        up = [1 << x for x in range(n)]
        for a, b in leq_pairs:
            if a != b:
                up[a] |= 1 << b
        changed = True
        while changed:
            changed = False
            for x in range(n):
                m = up[x]
                for y in range(n):
                    if (m >> y) & 1 and y != x:
                        m |= up[y]
                if m != up[x]:
                    up[x] = m
                    changed = True
        for x in range(n):
            for y in range(n):
                if x != y and (up[x] >> y) & 1 and (up[y] >> x) & 1:
                    raise PosetError("relation is not antisymmetric")
        covers = []
        for x in range(n):
            strict = up[x] & ~(1 << x)
            for y in range(n):
                if (strict >> y) & 1:
                    between = strict & ~(1 << y)
                    if not any((between >> z) & 1 and (up[z] >> y) & 1 for z in range(n)):
                        covers.append((x, y))
        return cls(names, covers)

    # basic queries --------------------------------------------------------
    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self):
        return f"{type(self).__name__}({len(self)} elements, {len(self.covers)} covers)"

    def index(self, x) -> int:
        if isinstance(x, int):
            if not 0 <= x < len(self.names):
                raise PosetError(f"unknown element {x}")
            return x
        try:
            return self.names.index(str(x))
        except ValueError:
            raise PosetError(f"unknown element {x!r}") from None

    def leq(self, x, y) -> bool:
        x, y = self.index(x), self.index(y)
        return bool((self._up[x] >> y) & 1)

    def lt(self, x, y) -> bool:
        return self.index(x) != self.index(y) and self.leq(x, y)

    def covers_of(self, x) -> list[int]:
        """Elements covering ``x``, in index order."""
        return sorted(self._up_covers[self.index(x)])

    def covered_by(self, y) -> list[int]:
        return sorted(self._down_covers[self.index(y)])

    def upset(self, x) -> list[int]:
        m = self._up[self.index(x)]
        return [y for y in range(len(self)) if (m >> y) & 1]

    @cached_property
    def maximal(self) -> tuple[int, ...]:
        return tuple(x for x in range(len(self)) if not self._up_covers[x])

    @cached_property
    def minimal(self) -> tuple[int, ...]:
        return tuple(x for x in range(len(self)) if not self._down_covers[x])

    @property
    def top(self) -> int | None:
        return self.maximal[0] if len(self.maximal) == 1 else None

    @property
    def bottom(self) -> int | None:
        return self.minimal[0] if len(self.minimal) == 1 else None

    def require_top(self) -> int:
        if self.top is None:
            raise PosetError(f"poset has {len(self.maximal)} maximal elements; a unique top is required")
        return self.top

    def linear_extension(self) -> list[int]:
        return list(self._order)

    # grading --------------------------------------------------------------
    @cached_property
    def _grading(self) -> tuple[int, ...] | None:
        n = len(self)
        rk = [None] * n
        for x in self._order:
            below = [rk[z] for z in self._down_covers[x]]
            if not below:
                rk[x] = 0
            elif len(set(below)) != 1:
                return None
            else:
                rk[x] = below[0] + 1
        # all maximal elements at the same height
        if len({rk[x] for x in self.maximal}) > 1:
            return None
        return tuple(rk)

    @property
    def is_graded(self) -> bool:
        return self._grading is not None

    def rank_of(self, x) -> int:
        if self._grading is None:
            raise PosetError("poset is not graded")
        return self._grading[self.index(x)]

    # chains ---------------------------------------------------------------
    @cached_property
    def _chain_counts(self) -> list[list[int]]:
        # counts[k][x] = number of strict chains of length k starting at x
        n = len(self)
        counts = [[0] * n, [1] * n]
        k = 1
        while any(counts[k]):
            nxt = [0] * n
            for x in range(n):
                strict = self._up[x] & ~(1 << x)
                nxt[x] = sum(counts[k][y] for y in range(n) if (strict >> y) & 1)
            counts.append(nxt)
            k += 1
        return counts

    def longest_chain(self) -> int:
        """Number of elements in a longest chain of the whole poset."""
        return len(self._chain_counts) - 2

    def strict_chains(self, k: int, excluding_top: bool = True) -> list[tuple[int, ...]]:
        """All ``x_1 < ... < x_k`` in lexicographic index order."""
        if k < 1:
            raise ValueError("chain length must be at least 1")
        n = len(self)
        skip = self.top if excluding_top else None
        allowed = [x for x in range(n) if x != skip]
        allowed_mask = sum(1 << x for x in allowed)
        out: list[tuple[int, ...]] = []

        def extend(prefix):
            if len(prefix) == k:
                out.append(tuple(prefix))
                return
            last = prefix[-1]
            nxt = self._up[last] & ~(1 << last) & allowed_mask
            for y in range(n):
                if (nxt >> y) & 1:
                    prefix.append(y)
                    extend(prefix)
                    prefix.pop()

        for x in allowed:
            extend([x])
        return out

    def multichains(self, k: int, excluding_top: bool = True) -> list[tuple[int, ...]]:
        """All ``x_1 <= ... <= x_k`` (repeats allowed), lexicographic."""
        if k < 1:
            raise ValueError("chain length must be at least 1")
        n = len(self)
        skip = self.top if excluding_top else None
        allowed = [x for x in range(n) if x != skip]
        allowed_mask = sum(1 << x for x in allowed)
        out: list[tuple[int, ...]] = []

        def extend(prefix):
            if len(prefix) == k:
                out.append(tuple(prefix))
                return
            nxt = self._up[prefix[-1]] & allowed_mask
            for y in range(n):
                if (nxt >> y) & 1:
                    prefix.append(y)
                    extend(prefix)
                    prefix.pop()

        for x in allowed:
            extend([x])
        return out

    def saturated_chains_between(self, x, y) -> list[tuple[int, ...]]:
        x, y = self.index(x), self.index(y)
        if not self.leq(x, y):
            raise PosetError(f"{self.names[x]} is not below {self.names[y]}")
        out = []

        def extend(prefix):
            last = prefix[-1]
            if last == y:
                out.append(tuple(prefix))
                return
            for z in self.covers_of(last):
                if self.leq(z, y):
                    prefix.append(z)
                    extend(prefix)
                    prefix.pop()

        extend([x])
        return out

    @staticmethod
    def is_saturated(p: "FinitePoset", chain: Sequence[int]) -> bool:
        return all(b in p._up_covers[a] for a, b in zip(chain, chain[1:]))

    # constructions --------------------------------------------------------
    def opposite(self) -> "FinitePoset":
        return FinitePoset(self.names, [(b, a) for a, b in self.covers])

    def relabel(self, names: Sequence[str]) -> "FinitePoset":
        return FinitePoset(names, self.covers)


def chain_poset(n: int) -> FinitePoset:
    """The total order ``0 < 1 < ... < n-1``."""
    return FinitePoset([str(i) for i in range(n)], [(i, i + 1) for i in range(n - 1)])


def point() -> FinitePoset:
    return FinitePoset(["*"], [])


def product_poset(p1: FinitePoset, p2: FinitePoset) -> FinitePoset:
    """Componentwise order; element ``(a, b)`` has index ``a * len(p2) + b``."""
    n2 = len(p2)
    names = [f"({a},{b})" for a, b in _cartesian(p1.names, p2.names)]
    covers = []
    for a, a2 in p1.covers:
        for b in range(n2):
            covers.append((a * n2 + b, a2 * n2 + b))
    for b, b2 in p2.covers:
        for a in range(len(p1)):
            covers.append((a * n2 + b, a * n2 + b2))
    return FinitePoset(names, covers)


def union_poset(p1: FinitePoset, p2: FinitePoset) -> tuple[FinitePoset, list[int], list[int]]:
    """Disjoint union with the two tops identified.

    Returns the poset and the index maps of ``p1`` and ``p2`` into it.  The
    non-top elements of ``p1`` come first, then those of ``p2``, then the top.
    """
    t1, t2 = p1.require_top(), p2.require_top()
    emb1, emb2 = [0] * len(p1), [0] * len(p2)
    names = []
    k = 0
    for x in range(len(p1)):
        if x != t1:
            emb1[x] = k
            names.append(f"1:{p1.names[x]}")
            k += 1
    for x in range(len(p2)):
        if x != t2:
            emb2[x] = k
            names.append(f"2:{p2.names[x]}")
            k += 1
    emb1[t1] = emb2[t2] = k
    names.append("1")
    covers = [(emb1[a], emb1[b]) for a, b in p1.covers] + [(emb2[a], emb2[b]) for a, b in p2.covers]
    return FinitePoset(names, covers), emb1, emb2


def opposite_poset(p: FinitePoset) -> FinitePoset:
    return p.opposite()


# --------------------------------------------------------------------------
# Boolean lattices

def atom_set_name(mask: int) -> str:
    if mask == 0:
        return "0"
    return "".join(f"a{i + 1}" for i in range(mask.bit_length()) if (mask >> i) & 1)


def parse_atom_set(name: str, r: int) -> int:
    name = name.strip()
    if name == "0":
        return 0
    if name == "1":
        return (1 << r) - 1
    if not name.startswith("a"):
        raise PosetError(f"bad Boolean element name {name!r}")
    mask = 0
    for part in name[1:].split("a"):
        if not part.isdigit() or not 1 <= int(part) <= r:
            raise PosetError(f"bad Boolean element name {name!r}")
        mask |= 1 << (int(part) - 1)
    return mask


class BooleanLattice(FinitePoset):
    """Subsets of ``r`` ordered atoms; element index is the atom bitmask.

    Bit ``i`` stands for atom ``a_{i+1}``, so atom order is bit order.
    """

    def __init__(self, r: int):
        if r < 0:
            raise PosetError("rank must be nonnegative")
        self.r = r
        n = 1 << r
        covers = [(x, x | (1 << i)) for x in range(n) for i in range(r) if not (x >> i) & 1]
        super().__init__([atom_set_name(x) for x in range(n)], covers)

    def rank_of(self, x) -> int:
        return bin(self.index(x)).count("1")

    def index(self, x) -> int:
        if isinstance(x, str):
            return parse_atom_set(x, self.r)
        return super().index(x)

    def atoms_of(self, x) -> list[int]:
        """Atom numbers (1-based) in the join expression of ``x``."""
        m = self.index(x)
        return [i + 1 for i in range(self.r) if (m >> i) & 1]

    def of_rank(self, k: int) -> list[int]:
        return [x for x in range(1 << self.r) if bin(x).count("1") == k]

    def __repr__(self):
        return f"BooleanLattice(r={self.r})"


def epsilon_edge(b: BooleanLattice, x, y) -> int:
    """Cube sign of the cover ``x <_c y = x v a_l``: (-1)^(atoms of y before a_l)."""
    x, y = b.index(x), b.index(y)
    diff = y & ~x
    if (x & ~y) or diff == 0 or diff & (diff - 1):
        raise PosetError(f"{b.names[x]} <_c {b.names[y]} is not a cover")
    below = y & (diff - 1)
    return -1 if bin(below).count("1") % 2 else 1


def epsilon_chain(b: BooleanLattice, chain: Sequence) -> int:
    chain = [b.index(x) for x in chain]
    s = 1
    for x, y in zip(chain, chain[1:]):
        s *= epsilon_edge(b, x, y)
    return s


def boolean_split(b: BooleanLattice, ell: int):
    """Split along atom ``a_ell`` (1-based).

    Returns ``(B0, B1, f)`` where ``B0``/``B1`` are the masks without/with the
    atom, each listed in increasing order, and ``f`` maps each element of
    ``B0`` to its join with ``a_ell``.
    """
    if not 1 <= ell <= b.r:
        raise PosetError(f"atom index {ell} out of range 1..{b.r}")
    bit = 1 << (ell - 1)
    b0 = [x for x in range(1 << b.r) if not x & bit]
    b1 = [x for x in range(1 << b.r) if x & bit]
    return b0, b1, {x: x | bit for x in b0}


def compress_mask(mask: int, ell: int) -> int:
    """Drop bit ``ell - 1`` from a mask, shifting higher atoms down."""
    low = mask & ((1 << (ell - 1)) - 1)
    high = mask >> ell
    return low | (high << (ell - 1))


def expand_mask(mask: int, ell: int, with_atom: bool) -> int:
    low = mask & ((1 << (ell - 1)) - 1)
    high = mask >> (ell - 1)
    return low | (high << ell) | ((1 << (ell - 1)) if with_atom else 0)
