"""Chain complexes of coloured posets, the cube complex, and the maps between them.

Every complex checks ``d_n d_{n+1} = 0`` when it is built and every chain
map checks that it commutes with the differentials.  Homology over a field
comes with explicit bases so that induced maps can be written down.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import (QQ, Matrix, NotAComplexError, Ring, RingMismatch, homology_at, kernel, mat_mul,
                      rank, solve)
from .coloured import ColouredMorphism, ColouredPoset, Gluing, composite_map, validate_morphism
from .poset import BooleanLattice, PosetError, epsilon_chain, epsilon_edge

# running totals; the acceptance suite reads these to confirm d^2 = 0 was checked everywhere
BUILD_STATS: Counter = Counter()


class ChainMapError(ValueError):
    pass


class ExactnessError(ValueError):
    pass


class ChainComplex:
    """Finite complex of free modules in degrees ``lo .. lo + len(dims) - 1``.

    ``diffs[n]`` is ``d_n`` from degree ``n`` to ``n - 1``; missing ones are
    zero.  ``labels[n]`` names the basis of degree ``n``, and ``qdeg[n]``
    optionally gives an internal degree per basis vector.
    """

    def __init__(self, ring: Ring, lo: int, dims: Sequence[int], diffs: Mapping[int, Matrix],
                 labels: Mapping[int, Sequence] | None = None,
                 qdeg: Mapping[int, Sequence[int]] | None = None, name: str = "", check: bool = True):
        self.ring = ring
        self.lo = lo
        self.dims = tuple(dims)
        self.name = name
        self.diffs = {}
        for n, m in diffs.items():
            if m.ring != ring:
                raise RingMismatch(f"d_{n} is over {m.ring}, complex over {ring}")
            if m.shape != (self.dim(n - 1), self.dim(n)):
                raise NotAComplexError(f"d_{n} has shape {m.shape}, expected {(self.dim(n - 1), self.dim(n))}")
            if not m.is_zero():
                self.diffs[n] = m
        self.labels = {n: tuple(v) for n, v in (labels or {}).items()}
        self.qdeg = None if qdeg is None else {n: tuple(v) for n, v in qdeg.items()}
        self._index: dict[int, dict] = {}
        self._hbasis: dict[int, HomologyBasis] = {}
        BUILD_STATS["complexes"] += 1
        if check:
            self.check()

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def __repr__(self):
        return f"ChainComplex({self.name or '?'}, dims={dict(zip(self.degrees, self.dims))}, {self.ring})"

    def dim(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.dims[n - self.lo]
        return 0

    def d(self, n: int) -> Matrix:
        m = self.diffs.get(n)
        if m is None:
            return Matrix.zeros(self.dim(n - 1), self.dim(n), self.ring)
        return m

    def index_of(self, n: int, label) -> int:
        idx = self._index.get(n)
        if idx is None:
            idx = self._index[n] = {lab: i for i, lab in enumerate(self.labels.get(n, ()))}
        return idx[label]

    @property
    def kind(self) -> str:
        """Constructor family (``C``, ``K``, ``S``, ``D``, ``Q``) read off the name, else ``other``."""
        head = self.name[:1]
        return head if head in ("C", "K", "S", "D", "Q") else "other"

    def check(self):
        for n in self.degrees:
            if n in self.diffs and n - 1 in self.diffs:
                if not mat_mul(self.diffs[n - 1], self.diffs[n]).is_zero():
                    BUILD_STATS["d2_failures"] += 1
                    BUILD_STATS[("d2_failures", self.kind)] += 1
                    raise NotAComplexError(f"d_{n - 1} d_{n} != 0 in {self.name or 'complex'}")
        if self.qdeg is not None:
            for n, m in self.diffs.items():
                src, tgt = self.qdeg[n], self.qdeg[n - 1]
                for j in range(m.cols):
                    for i in m.column(j):
                        if src[j] != tgt[i]:
                            raise NotAComplexError(f"d_{n} does not preserve the internal degree")
        BUILD_STATS["d2_checked"] += 1
        BUILD_STATS[("d2_checked", self.kind)] += 1

    def over(self, ring: Ring) -> "ChainComplex":
        return ChainComplex(ring, self.lo, self.dims, {n: m.over(ring) for n, m in self.diffs.items()},
                            self.labels, self.qdeg, self.name)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.dim(n) for n in self.degrees)

    def subcomplex(self, keep: Mapping[int, Sequence[int]], name: str = "") -> "ChainComplex":
        """Restrict to the given basis indices, which must span a subcomplex."""
        diffs = {}
        for n in self.degrees:
            src = list(keep.get(n, ()))
            pos = {i: k for k, i in enumerate(keep.get(n - 1, ()))}
            cols = []
            m = self.d(n)
            for j in src:
                col = {}
                for i, v in m.column(j).items():
                    if i not in pos:
                        raise NotAComplexError(f"basis selection is not closed under d_{n}")
                    col[pos[i]] = v
                cols.append(col)
            diffs[n] = Matrix._raw(len(pos), len(src), self.ring, cols)
        labels = {n: [self.labels[n][i] for i in keep.get(n, ())] for n in self.degrees if n in self.labels}
        qdeg = None
        if self.qdeg is not None:
            qdeg = {n: [self.qdeg[n][i] for i in keep.get(n, ())] for n in self.degrees}
        return ChainComplex(self.ring, self.lo, [len(keep.get(n, ())) for n in self.degrees], diffs,
                            labels, qdeg, name or self.name)

    def internal_degrees(self) -> list[int]:
        if self.qdeg is None:
            return []
        return sorted({j for v in self.qdeg.values() for j in v})

    def graded_piece(self, j: int) -> "ChainComplex":
        if self.qdeg is None:
            raise ValueError("complex carries no internal grading")
        keep = {n: [i for i, q in enumerate(self.qdeg[n]) if q == j] for n in self.degrees}
        return self.subcomplex(keep, f"{self.name}[q={j}]")

    def homology_basis(self, n: int) -> "HomologyBasis":
        hb = self._hbasis.get(n)
        if hb is None:
            hb = self._hbasis[n] = HomologyBasis.compute(self, n)
        return hb


# --------------------------------------------------------------------------
# chain maps

class ChainMap:
    """``mats[n]`` sends degree ``n`` of ``source`` to degree ``n + shift`` of ``target``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, shift: int,
                 mats: Mapping[int, Matrix], name: str = "", check: bool = True):
        self.source, self.target, self.shift, self.name = source, target, shift, name
        if source.ring != target.ring:
            raise RingMismatch("chain map between complexes over different rings")
        self.mats = {}
        for n, m in mats.items():
            if m.shape != (target.dim(n + shift), source.dim(n)):
                raise ChainMapError(f"{name}: degree {n} matrix has shape {m.shape}, expected "
                                    f"{(target.dim(n + shift), source.dim(n))}")
            self.mats[n] = m
        if check:
            self.check()

    def __getitem__(self, n: int) -> Matrix:
        m = self.mats.get(n)
        if m is None:
            return Matrix.zeros(self.target.dim(n + self.shift), self.source.dim(n), self.source.ring)
        return m

    def check(self):
        s = self.shift
        for n in range(self.source.lo, self.source.hi + 2):
            left = mat_mul(self.target.d(n + s), self[n])
            right = mat_mul(self[n - 1], self.source.d(n))
            if left != right:
                raise ChainMapError(f"{self.name or 'map'} does not commute with d in degree {n}")
        BUILD_STATS["maps_checked"] += 1

    def compose(self, first: "ChainMap") -> "ChainMap":
        """``self`` after ``first``."""
        mats = {n: mat_mul(self[n + first.shift], first[n]) for n in first.source.degrees}
        return ChainMap(first.source, self.target, first.shift + self.shift, mats,
                        f"{self.name}.{first.name}")

    def over(self, ring: Ring, source: ChainComplex | None = None,
             target: ChainComplex | None = None) -> "ChainMap":
        return ChainMap(source or self.source.over(ring), target or self.target.over(ring), self.shift,
                        {n: m.over(ring) for n, m in self.mats.items()}, self.name)

    def equals(self, other: "ChainMap") -> bool:
        if self.shift != other.shift:
            return False
        return all(self[n] == other[n] for n in self.source.degrees)


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, 0, {n: Matrix.identity(c.dim(n), c.ring) for n in c.degrees}, "id")


# --------------------------------------------------------------------------
# complexes of sequences: C_*, S_*, D_*

def _sequence_complex(cp: ColouredPoset, seqs: dict[int, list[tuple[int, ...]]], name: str) -> ChainComplex:
    """Complex on ``sequence x fiber basis`` with the coloured-poset differential.

    Degree 0 is ``F(1)``.  The basis of degree ``k`` lists ``(seq, b)`` for
    every sequence (in the given order) and every basis vector ``b`` of
    ``F(seq[0])``.  Faces are looked up in the basis of degree ``k - 1``.
    """
    ring, top = cp.ring, cp.top
    hi = max((k for k, v in seqs.items() if v), default=0)
    labels: dict[int, list] = {0: [((), b) for b in range(cp.ranks[top])]}
    offset: dict[int, dict] = {0: {(): 0}}
    for k in range(1, hi + 1):
        labs, off = [], {}
        for s in seqs.get(k, []):
            off[s] = len(labs)
            labs.extend((s, b) for b in range(cp.ranks[s[0]]))
        labels[k], offset[k] = labs, off
    one = ring.coerce(1)
    diffs = {}
    for k in range(1, hi + 1):
        cols = []
        prev = offset[k - 1]
        for s in seqs.get(k, []):
            x1 = s[0]
            if k == 1:
                first, tail_pos = composite_map(cp, x1, top), 0
            else:
                first, tail_pos = composite_map(cp, x1, s[1]), prev[s[1:]]
            # dropping the entry at 0-based position i >= 1 carries the sign (-1)^i
            faces = [(prev[s[:i] + s[i + 1:]], one if i % 2 == 0 else -one) for i in range(1, k)]
            for b in range(cp.ranks[x1]):
                col: dict = {}
                for r, v in first.column(b).items():
                    col[tail_pos + r] = col.get(tail_pos + r, 0) + v
                for pos, sgn in faces:
                    col[pos + b] = col.get(pos + b, 0) + sgn
                cols.append(col)
        diffs[k] = Matrix(len(labels[k - 1]), len(labels[k]), ring, cols)
    qdeg = None
    if cp.degrees is not None:
        qdeg = {0: list(cp.degrees[top])}
        for k in range(1, hi + 1):
            qdeg[k] = [cp.degrees[s[0]][b] for s, b in labels[k]]
    return ChainComplex(ring, 0, [len(labels[k]) for k in range(hi + 1)], diffs, labels, qdeg, name)


def build_C(cp: ColouredPoset) -> ChainComplex:
    """The complex of strict chains in ``P \\ 1``; degree 0 is ``F(1)``."""
    p = cp.carrier
    length = p.longest_chain()
    seqs = {k: p.strict_chains(k) for k in range(1, length + 1)}
    return _sequence_complex(cp, seqs, "C")


def build_S_truncated(cp: ColouredPoset, N: int = 6) -> ChainComplex:
    """Multi-sequences (repeats allowed) in ``P \\ 1`` up to length ``N``."""
    if N < 1:
        raise ValueError("truncation degree must be at least 1")
    p = cp.carrier
    seqs = {k: p.multichains(k) for k in range(1, N + 1)}
    return _sequence_complex(cp, seqs, f"S<={N}")


def _has_repeat(seq: tuple) -> bool:
    return any(a == b for a, b in zip(seq, seq[1:]))


def split_S(s: ChainComplex) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Basis indices of the strict part and of the part with repeats."""
    strict, rep = {}, {}
    for n in s.degrees:
        labs = s.labels[n]
        strict[n] = [i for i, (seq, _) in enumerate(labs) if not _has_repeat(seq)]
        rep[n] = [i for i, (seq, _) in enumerate(labs) if _has_repeat(seq)]
    return strict, rep


def build_D_truncated(cp: ColouredPoset, N: int = 6) -> ChainComplex:
    """The summand of the truncated ``S_*`` spanned by sequences with a repeat.

    Raises if the differential leaks out of it.
    """
    s = build_S_truncated(cp, N)
    _, rep = split_S(s)
    return s.subcomplex(rep, f"D<={N}")


def homotopy_h(dc: ChainComplex) -> dict[int, Matrix]:
    """The null-homotopy of the repeat summand, degree ``n -> n + 1``.

    Let ``p`` be the first position with ``x_p = x_{p+1}`` and ``n`` the
    length of that run; ``h`` inserts one more copy with sign ``(-1)^(p+1)``
    when ``n`` is even and is zero when ``n`` is odd.  Only degrees below the
    truncation get a map.
    """
    one = dc.ring.coerce(1)
    out = {}
    for n in range(dc.lo, dc.hi):
        cols = []
        for seq, b in dc.labels.get(n, ()):
            p = next((i for i in range(len(seq) - 1) if seq[i] == seq[i + 1]), None)
            if p is None:
                raise PosetError(f"{seq} has no repeat, so it is not a basis element of D")
            run = 1
            while p + run < len(seq) and seq[p + run] == seq[p]:
                run += 1
            if run % 2:
                cols.append({})
                continue
            longer = seq[:p + 1] + seq[p:]
            # p is 0-based here, so (-1)^(p+1) in 1-based terms is (-1)^p
            cols.append({dc.index_of(n + 1, (longer, b)): one if p % 2 == 0 else -one})
        out[n] = Matrix(dc.dim(n + 1), dc.dim(n), dc.ring, cols)
    return out


def homotopy_defect(dc: ChainComplex, h: Mapping[int, Matrix]) -> dict[int, Matrix]:
    """``h d + d h - id`` in each degree below the truncation."""
    out = {}
    for n in range(dc.lo, dc.hi):
        hd = mat_mul(h[n - 1], dc.d(n)) if n - 1 in h else Matrix.zeros(dc.dim(n), dc.dim(n), dc.ring)
        dh = mat_mul(dc.d(n + 1), h[n])
        out[n] = hd + dh - Matrix.identity(dc.dim(n), dc.ring)
    return out


# --------------------------------------------------------------------------
# cube complex

def _require_boolean(cp: ColouredPoset) -> BooleanLattice:
    if not isinstance(cp.carrier, BooleanLattice):
        raise PosetError("the cube complex needs a Boolean lattice carrier")
    return cp.carrier


def build_K(cp: ColouredPoset) -> ChainComplex:
    """Fibers summed by corank, with cover maps signed by the cube sign."""
    b = _require_boolean(cp)
    r, ring = b.r, cp.ring
    labels, offset = {}, {}
    for k in range(r + 1):
        labs, off = [], {}
        for x in b.of_rank(r - k):
            off[x] = len(labs)
            labs.extend((x, i) for i in range(cp.ranks[x]))
        labels[k], offset[k] = labs, off
    diffs = {}
    for k in range(1, r + 1):
        cols = []
        for x in b.of_rank(r - k):
            ups = [(y, epsilon_edge(b, x, y), cp.edge_maps[(x, y)]) for y in b.covers_of(x)]
            for i in range(cp.ranks[x]):
                col: dict = {}
                for y, eps, m in ups:
                    base = offset[k - 1][y]
                    for row, v in m.column(i).items():
                        col[base + row] = col.get(base + row, 0) + eps * v
                cols.append(col)
        diffs[k] = Matrix(len(labels[k - 1]), len(labels[k]), ring, cols)
    qdeg = None
    if cp.degrees is not None:
        qdeg = {k: [cp.degrees[x][i] for x, i in labels[k]] for k in labels}
    return ChainComplex(ring, 0, [len(labels[k]) for k in range(r + 1)], diffs, labels, qdeg, "K")


# --------------------------------------------------------------------------
# maps between the complexes

def _map_from_images(src: ChainComplex, tgt: ChainComplex, shift: int,
                     image: Callable[[int, object], Iterable[tuple[object, object]]], name: str) -> ChainMap:
    """Assemble a chain map from a rule giving ``(target label, coefficient)`` pairs."""
    mats = {}
    for n in src.degrees:
        cols = []
        for lab in src.labels.get(n, ()):
            col: dict = {}
            for tlab, v in image(n, lab):
                i = tgt.index_of(n + shift, tlab)
                col[i] = col.get(i, 0) + v
            cols.append(col)
        mats[n] = Matrix(tgt.dim(n + shift), src.dim(n), src.ring, cols)
    return ChainMap(src, tgt, shift, mats, name)


def chain_map_of_morphism(m: ColouredMorphism, src: ColouredPoset, dst: ColouredPoset,
                          c_src: ChainComplex | None = None, c_dst: ChainComplex | None = None) -> ChainMap:
    """``f_*`` on strict-chain complexes.

    Chains whose image has a repeat land in the repeat summand, which is a
    complementary subcomplex, so they are sent to zero here.
    """
    rep = validate_morphism(m, src, dst)
    if not rep:
        raise ChainMapError(rep.message)
    c_src = c_src or build_C(src)
    c_dst = c_dst or build_C(dst)

    def image(n, lab):
        seq, b = lab
        x1 = seq[0] if seq else src.top
        fseq = tuple(m.f[x] for x in seq)
        if _has_repeat(fseq):
            return []
        return [((fseq, i), v) for i, v in m.tau[x1].column(b).items()]

    return _map_from_images(c_src, c_dst, 0, image, "f_*")


def map_phi(cp: ColouredPoset, k_cx: ChainComplex | None = None, c_cx: ChainComplex | None = None) -> ChainMap:
    """``K_* -> C_*``: sum over saturated chains up to the top, signed, top dropped."""
    b = _require_boolean(cp)
    k_cx = k_cx or build_K(cp)
    c_cx = c_cx or build_C(cp)
    top = cp.top
    chains = {x: [(c[:-1], epsilon_chain(b, c)) for c in b.saturated_chains_between(x, top)]
              for x in range(len(b))}

    def image(n, lab):
        x, i = lab
        return [((seq, i), s) for seq, s in chains[x]]

    return _map_from_images(k_cx, c_cx, 0, image, "phi")


# --------------------------------------------------------------------------
# gluing: the quotient complex and pi

@dataclass
class GluingComplexes:
    """All complexes and maps attached to one gluing."""

    gluing: Gluing
    c_glued: ChainComplex
    c_part1: ChainComplex
    c_part2: ChainComplex
    quotient: ChainComplex
    i: ChainMap
    q: ChainMap
    pi: ChainMap


def _split_point(seq: tuple, in_part1: set) -> int:
    j = 0
    while j < len(seq) and seq[j] in in_part1:
        j += 1
    if any(x in in_part1 for x in seq[j:]):
        raise PosetError(f"chain {seq} does not list the first part before the second")
    return j


def build_quotient_Q(g: Gluing, c_glued: ChainComplex | None = None) -> tuple[ChainComplex, ChainMap]:
    """``C(glued) / C(part2)`` with its own differential, and the quotient map.

    A basis chain reads ``x_1 .. x_j y_1 .. y_{n-j}`` with ``j >= 1``, the
    ``x`` in the first part and the ``y`` in the second.  The differential is
    written out directly: the leading term survives only when ``j >= 2`` and
    every deletion keeps its sign from the glued complex.  That the quotient
    map commutes with it is checked, which ties the formula to the glued
    differential.
    """
    cp = g.glued
    ring = cp.ring
    c_glued = c_glued or build_C(cp)
    part1 = set(g.emb1)
    one = ring.coerce(1)
    labels: dict[int, list] = {}
    splits: dict[tuple, int] = {}
    offset: dict[int, dict] = {}
    for n in c_glued.degrees:
        labs, off = [], {}
        for seq in (cp.carrier.strict_chains(n) if n else []):
            j = _split_point(seq, part1)
            if j >= 1:
                splits[seq] = j
                off[seq] = len(labs)
                labs.extend((seq, b) for b in range(cp.ranks[seq[0]]))
        labels[n], offset[n] = labs, off
    diffs = {}
    for n in c_glued.degrees:
        if n < 1:
            continue
        cols = []
        prev = offset.get(n - 1, {})
        for seq, b in labels[n]:
            j = splits[seq]
            col: dict = {}
            if j >= 2:
                base = prev[seq[1:]]
                for r, v in composite_map(cp, seq[0], seq[1]).column(b).items():
                    col[base + r] = col.get(base + r, 0) + v
            # alpha: drop x_k for 2 <= k <= j with sign (-1)^(k-1)
            for k in range(2, j + 1):
                pos = prev[seq[:k - 1] + seq[k:]] + b
                col[pos] = col.get(pos, 0) + (one if k % 2 else -one)
            # beta: drop y_k for 1 <= k <= n - j with sign (-1)^(j+k-1)
            for k in range(1, n - j + 1):
                t = j + k - 1
                pos = prev[seq[:t] + seq[t + 1:]] + b
                col[pos] = col.get(pos, 0) + (one if (j + k - 1) % 2 == 0 else -one)
            cols.append(col)
        diffs[n] = Matrix(len(labels[n - 1]), len(labels[n]), ring, cols)
    qdeg = None
    if c_glued.qdeg is not None:
        qdeg = {n: [cp.degrees[seq[0]][b] for seq, b in labels[n]] for n in labels}
    quotient = ChainComplex(ring, c_glued.lo, [len(labels[n]) for n in c_glued.degrees], diffs,
                            labels, qdeg, "Q")
    keep = {lab for labs in labels.values() for lab in labs}

    def image(n, lab):
        return [(lab, one)] if lab in keep else []

    q = _map_from_images(c_glued, quotient, 0, image, "q")
    return quotient, q


def map_pi(quotient: ChainComplex, g: Gluing, c_part1: ChainComplex | None = None) -> ChainMap:
    """``Q_n -> C_{n-1}(part1)``: chains inside the first part ending at its top lose that top."""
    c_part1 = c_part1 or build_C(g.part1)
    back = {e: x for x, e in enumerate(g.emb1)}
    top1 = g.emb1[g.part1.top]
    one = quotient.ring.coerce(1)

    def image(n, lab):
        seq, b = lab
        if seq and seq[-1] == top1 and all(x in back for x in seq):
            return [((tuple(back[x] for x in seq[:-1]), b), one)]
        return []

    return _map_from_images(quotient, c_part1, -1, image, "pi")


def gluing_complexes(g: Gluing) -> GluingComplexes:
    c_glued = build_C(g.glued)
    c1, c2 = build_C(g.part1), build_C(g.part2)
    quotient, q = build_quotient_Q(g, c_glued)
    pi = map_pi(quotient, g, c1)
    one = g.glued.ring.coerce(1)

    def incl(n, lab):
        seq, b = lab
        return [((tuple(g.emb2[y] for y in seq), b), one)]

    i = _map_from_images(c2, c_glued, 0, incl, "i")
    return GluingComplexes(g, c_glued, c1, c2, quotient, i, q, pi)


def map_phi_prime(g: Gluing, quotient: ChainComplex | None = None,
                  k_part1: ChainComplex | None = None) -> ChainMap:
    """``K_{*-1}(B_0) -> Q_*`` induced by the map to chains on the whole lattice.

    For ``lambda`` in the fiber over ``x`` in ``B_0`` this is the signed sum
    over saturated chains of ``B`` from ``x`` to the top, read in the quotient.
    """
    if g.ell is None:
        raise ValueError("gluing does not come from a Boolean split")
    b = _require_boolean(g.glued)
    quotient = quotient or build_quotient_Q(g)[0]
    k_part1 = k_part1 or build_K(g.part1)
    emb1 = g.emb1
    chains = {u: [(c[:-1], epsilon_chain(b, c)) for c in b.saturated_chains_between(emb1[u], g.glued.top)]
              for u in range(len(emb1))}

    def image(n, lab):
        u, i = lab
        return [((seq, i), s) for seq, s in chains[u]]

    return _map_from_images(k_part1, quotient, 1, image, "phi'")


def split_sign(ell: int) -> int:
    """Cube sign of the cover from the top of ``B_0`` to the top: ``(-1)^(ell-1)``."""
    return -1 if (ell - 1) % 2 else 1


# --------------------------------------------------------------------------
# homology

@dataclass(frozen=True)
class HomologyResult:
    """Betti numbers and torsion per degree (only nonzero degrees are stored)."""

    ring: Ring
    betti: dict = field(default_factory=dict)
    torsion: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, HomologyResult):
            return NotImplemented
        return self.ring == other.ring and self.table() == other.table()

    def __hash__(self):
        return hash((self.ring, tuple(self.table())))

    def table(self) -> list[tuple]:
        keys = sorted(set(self.betti) | set(self.torsion))
        return [(k, self.betti.get(k, 0), tuple(self.torsion.get(k, ()))) for k in keys
                if self.betti.get(k, 0) or self.torsion.get(k)]

    def is_zero(self) -> bool:
        return not self.table()

    def dims(self, degrees: Iterable[int]) -> list[int]:
        return [self.betti.get(n, 0) for n in degrees]


def _homology_from_diffs(ring: Ring, degrees: Iterable, d_out: Callable, d_in: Callable) -> HomologyResult:
    betti, tors = {}, {}
    for n in degrees:
        b, t = homology_at(d_out(n), d_in(n), ring)
        if b:
            betti[n] = b
        if t:
            tors[n] = t
    return HomologyResult(ring, betti, tors)


def homology(c: ChainComplex) -> HomologyResult:
    return _homology_from_diffs(c.ring, c.degrees, c.d, lambda n: c.d(n + 1))


def cohomology(c: ChainComplex) -> HomologyResult:
    """Homology of the dual complex, whose coboundary is the transposed differential."""
    return _homology_from_diffs(c.ring, c.degrees, lambda n: c.d(n + 1).T, lambda n: c.d(n).T)


def bigraded_homology(c: ChainComplex) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
    """``(homological degree, internal degree) -> (betti, torsion)``, nonzero entries only."""
    out = {}
    for j in c.internal_degrees():
        piece = c.graded_piece(j)
        for n, b, t in homology(piece).table():
            out[(n, j)] = (b, t)
    return out


@dataclass(frozen=True)
class HomologyBasis:
    """Explicit homology of one degree over a field.

    Cycles are written in the echelon kernel basis, where a cycle is fixed by
    its entries at the ``free`` positions.  ``coords`` maps those entries to
    homology coordinates and ``reps`` holds one representative cycle per
    homology basis vector.
    """

    degree: int
    free: tuple[int, ...]
    coords: Matrix
    reps: Matrix

    @property
    def dim(self) -> int:
        return self.reps.cols

    @classmethod
    def compute(cls, c: ChainComplex, n: int) -> "HomologyBasis":
        if not c.ring.is_field:
            raise RingMismatch("explicit homology bases need a field")
        kd = kernel(c.d(n))
        bounds = c.d(n + 1).select_rows(kd.free)
        ann = kernel(bounds.T)
        coords = ann.basis.T
        reps = kd.basis.select_cols(ann.free)
        return cls(n, kd.free, coords, reps)

    def classes_of(self, cycles: Matrix) -> Matrix:
        """Homology coordinates of each column of ``cycles``."""
        return mat_mul(self.coords, cycles.select_rows(self.free))


def induced_map_on_homology(m: ChainMap, n: int) -> Matrix:
    """Matrix of ``H_n(source) -> H_{n+shift}(target)`` in the computed bases."""
    if not m.source.ring.is_field:
        raise RingMismatch("induced maps are computed over a field")
    hs = m.source.homology_basis(n)
    ht = m.target.homology_basis(n + m.shift)
    return ht.classes_of(mat_mul(m[n], hs.reps))


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def is_quasi_isomorphism(m: ChainMap) -> tuple[bool, list[int]]:
    """Whether every induced map is invertible; also the failing degrees."""
    bad = []
    for n in range(m.source.lo - 1, m.source.hi + 2):
        if not is_invertible(induced_map_on_homology(m, n)):
            bad.append(n)
    return not bad, bad


def connecting_delta(i: ChainMap, q: ChainMap, n: int) -> Matrix:
    """``H_{n+s}(C) -> H_{n-1}(A)`` for ``0 -> A -i-> B -q-> C -> 0`` with ``q`` of shift ``s``.

    Lift a representative through ``q``, apply ``d``, pull back through ``i``.
    """
    if i.shift != 0:
        raise ChainMapError("the inclusion must have degree 0")
    a, b, c = i.source, i.target, q.target
    hc = c.homology_basis(n + q.shift)
    ha = a.homology_basis(n - 1)
    if hc.dim == 0 or ha.dim == 0:
        return Matrix.zeros(ha.dim, hc.dim, a.ring)
    try:
        lift = solve(q[n], hc.reps)
        pulled = solve(i[n - 1], mat_mul(b.d(n), lift))
    except ValueError as exc:
        raise ExactnessError(f"sequence is not exact in degree {n}: {exc}") from None
    return ha.classes_of(pulled)


def check_short_exact(i: ChainMap, q: ChainMap) -> list[str]:
    """Degree-wise exactness of ``0 -> A -> B -> C -> 0``; returns the problems found."""
    problems = []
    for n in i.target.degrees:
        dim_a, dim_b, dim_c = i.source.dim(n), i.target.dim(n), q.target.dim(n + q.shift)
        ri, rq = rank(i[n]), rank(q[n])
        if not mat_mul(q[n], i[n]).is_zero():
            problems.append(f"q i != 0 in degree {n}")
        if ri != dim_a:
            problems.append(f"i not injective in degree {n}")
        if rq != dim_c:
            problems.append(f"q not surjective in degree {n}")
        if ri + rq != dim_b:
            problems.append(f"ker q != im i in degree {n}")
    return problems


@dataclass
class ExactnessReport:
    ok: bool
    nodes_checked: int
    failures: list[str]

    def __bool__(self):
        return self.ok


def _check_node(label: str, into: Matrix, out: Matrix, dim: int, failures: list[str]):
    if into.rows != dim or out.cols != dim:
        failures.append(f"{label}: dimension mismatch")
        return
    if not mat_mul(out, into).is_zero():
        failures.append(f"{label}: composite is nonzero")
    elif rank(into) + rank(out) != dim:
        failures.append(f"{label}: image {rank(into)} + rank {rank(out)} != {dim}")


def check_les(maps: Sequence[tuple[str, Matrix]]) -> ExactnessReport:
    """Exactness of a finite sequence of composable matrices at each interior node."""
    failures = []
    for (la, a), (lb, b) in zip(maps, maps[1:]):
        _check_node(f"between {la} and {lb}", a, b, a.rows, failures)
    return ExactnessReport(not failures, max(len(maps) - 1, 0), failures)


def ses_long_exact_sequence(i: ChainMap, q: ChainMap) -> list[tuple[str, Matrix]]:
    """The long exact sequence of a short exact sequence of complexes, top degree first."""
    lo = min(i.source.lo, i.target.lo) - 1
    hi = max(i.source.hi, i.target.hi) + 1
    seq = []
    for n in range(hi, lo - 1, -1):
        seq.append((f"i_*[{n}]", induced_map_on_homology(i, n)))
        seq.append((f"q_*[{n}]", induced_map_on_homology(q, n)))
        seq.append((f"delta[{n + q.shift}]", connecting_delta(i, q, n)))
    return seq


def verify_ses(i: ChainMap, q: ChainMap) -> ExactnessReport:
    problems = check_short_exact(i, q)
    if problems:
        return ExactnessReport(False, 0, problems)
    return check_les(ses_long_exact_sequence(i, q))


def verify_les(g: Gluing, ring: Ring | None = None) -> ExactnessReport:
    """Exactness of ``H_n(P_2) -> H_n(glued) -> H_{n-1}(P_1) -> H_{n-1}(P_2) -> ...``.

    The maps are ``i_*``, ``(pi q)_*`` and ``delta pi_*^{-1}``.  Works over the
    gluing's ring when it is a field, else over ``ring`` (default Q).
    """
    gc = gluing_complexes(g)
    if not gc.c_glued.ring.is_field or ring is not None:
        gc = _complexes_over(gc, ring or QQ)
    problems = check_short_exact(gc.i, gc.q)
    if problems:
        return ExactnessReport(False, 0, problems)
    lo, hi = gc.c_glued.lo - 1, gc.c_glued.hi + 1
    seq = []
    for n in range(hi, lo - 1, -1):
        pi_star = induced_map_on_homology(gc.pi, n)
        if not is_invertible(pi_star):
            return ExactnessReport(False, 0, [f"pi_* is not invertible in degree {n}"])
        pi_inv = solve(pi_star, Matrix.identity(pi_star.rows, pi_star.ring)) if pi_star.rows else pi_star
        i_star = induced_map_on_homology(gc.i, n)
        q_star = induced_map_on_homology(gc.q, n)
        delta = connecting_delta(gc.i, gc.q, n)
        seq.append((f"i_*[{n}]", i_star))
        seq.append((f"(pi q)_*[{n}]", mat_mul(pi_star, q_star)))
        seq.append((f"delta pi^-1[{n - 1}]", mat_mul(delta, pi_inv)))
    return check_les(seq)


def _complexes_over(gc: GluingComplexes, ring: Ring) -> GluingComplexes:
    cg, c1, c2, qc = (x.over(ring) for x in (gc.c_glued, gc.c_part1, gc.c_part2, gc.quotient))
    return GluingComplexes(gc.gluing, cg, c1, c2, qc, gc.i.over(ring, c2, cg), gc.q.over(ring, cg, qc),
                           gc.pi.over(ring, qc, c1))


def cube_ses(g: Gluing) -> tuple[ChainMap, ChainMap]:
    """``0 -> K(B_1) -> K(B) -> K(B_0)[-1] -> 0`` for a Boolean split.

    The faces carry their own cube signs; on ``B_1`` these differ from the
    restricted signs by ``(-1)^(atoms above a_ell)``, which the inclusion absorbs.
    """
    if g.ell is None:
        raise ValueError("gluing does not come from a Boolean split")
    _require_boolean(g.glued)
    ell = g.ell
    kb, k0, k1 = build_K(g.glued), build_K(g.part1), build_K(g.part2)
    one = g.glued.ring.coerce(1)
    high = ~((1 << ell) - 1)

    def incl(n, lab):
        u, i = lab
        x = g.emb2[u]
        sign = -one if bin(x & high).count("1") % 2 else one
        return [((x, i), sign)]

    in0 = {e: u for u, e in enumerate(g.emb1)}

    def proj(n, lab):
        x, i = lab
        return [((in0[x], i), one)] if x in in0 else []

    return _map_from_images(k1, kb, 0, incl, "iK"), _map_from_images(kb, k0, -1, proj, "qK")


# --------------------------------------------------------------------------
# main-theorem checks

@dataclass
class MainTheoremReport:
    ok: bool
    degrees: list[int]
    failures: list[str]
    k_homology: HomologyResult
    c_homology: HomologyResult

    def __bool__(self):
        return self.ok


def verify_main(cp: ColouredPoset) -> MainTheoremReport:
    """``phi: K -> C`` is a quasi-isomorphism.

    Over a field every induced map is inverted explicitly; over Z the Betti
    numbers and torsion of the two complexes are compared.
    """
    k_cx, c_cx = build_K(cp), build_C(cp)
    phi = map_phi(cp, k_cx, c_cx)
    hk, hc = homology(k_cx), homology(c_cx)
    failures = []
    degrees = list(range(0, max(k_cx.hi, c_cx.hi) + 1))
    if cp.ring.is_field:
        for n in degrees:
            if not is_invertible(induced_map_on_homology(phi, n)):
                failures.append(f"phi_* not invertible in degree {n}")
    if hk != hc:
        failures.append(f"homology differs: K {hk.table()} vs C {hc.table()}")
    return MainTheoremReport(not failures, degrees, failures, hk, hc)
