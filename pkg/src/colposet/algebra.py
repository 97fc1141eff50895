"""Exact linear algebra over Z, Q and F_p.

Matrices use the column convention: entry ``(i, j)`` is the coefficient of
target basis vector ``i`` in the image of source basis vector ``j``, so
``a @ b`` means "apply ``b`` first".  Storage is sparse by column.

Field elimination (rank, reduced echelon form) is delegated to python-flint;
the Smith normal form over Z is computed here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import flint


class DimensionError(ValueError):
    pass


class RingMismatch(ValueError):
    pass


class NotAComplexError(ValueError):
    """A composite of two consecutive differentials is nonzero."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """One of Z, Q or F_p.  ``p`` is 0 unless ``kind == "Fp"``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise ValueError(f"F_p needs a prime, got {self.p}")
        if self.kind != "Fp" and self.p != 0:
            raise ValueError("p only applies to prime fields")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def coerce(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        """Normalise an already-valid element after arithmetic."""
        if self.kind == "Fp":
            return x % self.p
        return x

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip()
        if t in ("Z", "ZZ"):
            return ZZ
        if t in ("Q", "QQ"):
            return QQ
        for prefix in ("Fp:", "F", "GF"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return GF(int(t[len(prefix):]))
        raise ValueError(f"cannot parse ring {text!r} (expected Z, Q or Fp:<p>)")

    def __str__(self):
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("Fp", p)


class Matrix:
    """Immutable sparse matrix over a :class:`Ring` (column convention)."""

    def __init__(self, rows: int, cols: int, ring: Ring, columns: Sequence[dict] | None = None):
        self.rows = rows
        self.cols = cols
        self.ring = ring
        if columns is None:
            self._cols = tuple({} for _ in range(cols))
        else:
            if len(columns) != cols:
                raise DimensionError(f"expected {cols} columns, got {len(columns)}")
            cleaned = []
            for c in columns:
                d = {}
                for i, v in c.items():
                    if not 0 <= i < rows:
                        raise DimensionError(f"row index {i} out of range for {rows} rows")
                    v = ring.coerce(v)
                    if v:
                        d[i] = v
                cleaned.append(d)
            self._cols = tuple(cleaned)

    @classmethod
    def _raw(cls, rows, cols, ring, columns):
        # trusted constructor: entries already coerced and nonzero
        m = cls.__new__(cls)
        m.rows, m.cols, m.ring, m._cols = rows, cols, ring, tuple(columns)
        return m

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, data: Sequence[Sequence], ring: Ring, cols: int | None = None) -> "Matrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns = [{} for _ in range(cols)]
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionError(f"row {i} has {len(row)} entries, expected {cols}")
            for j, v in enumerate(row):
                if v:
                    columns[j][i] = v
        return cls(rows, cols, ring, columns)

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: Ring) -> "Matrix":
        return cls._raw(rows, cols, ring, [{} for _ in range(cols)])

    @classmethod
    def identity(cls, n: int, ring: Ring) -> "Matrix":
        one = ring.coerce(1)
        if not one:
            return cls.zeros(n, n, ring)
        return cls._raw(n, n, ring, [{j: one} for j in range(n)])

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict], ring: Ring) -> "Matrix":
        return cls(rows, len(columns), ring, columns)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> dict:
        return self._cols[j]

    def __getitem__(self, ij):
        i, j = ij
        return self._cols[j].get(i, self.ring.coerce(0))

    def to_rows(self) -> list[list]:
        zero = self.ring.coerce(0)
        out = [[zero] * self.cols for _ in range(self.rows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.ring == other.ring
                and self._cols == other._cols)

    def __hash__(self):
        return hash((self.shape, self.ring, tuple(tuple(sorted(c.items())) for c in self._cols)))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.ring}, {self.to_rows()})"

    # arithmetic ---------------------------------------------------------
    def _check_same(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.shape != other.shape:
            raise DimensionError(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.ring.reduce
        cols = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            for i, v in b.items():
                w = red(c.get(i, 0) + v)
                if w:
                    c[i] = w
                else:
                    c.pop(i, None)
            cols.append(c)
        return Matrix._raw(self.rows, self.cols, self.ring, cols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, s) -> "Matrix":
        s = self.ring.coerce(s)
        if not s:
            return Matrix.zeros(self.rows, self.cols, self.ring)
        red = self.ring.reduce
        return Matrix._raw(self.rows, self.cols, self.ring,
                           [{i: red(v * s) for i, v in c.items()} for c in self._cols])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    @property
    def T(self) -> "Matrix":
        cols = [{} for _ in range(self.rows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                cols[i][j] = v
        return Matrix._raw(self.cols, self.rows, self.ring, cols)

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        pos = {r: k for k, r in enumerate(idx)}
        cols = [{pos[i]: v for i, v in c.items() if i in pos} for c in self._cols]
        return Matrix._raw(len(idx), self.cols, self.ring, cols)

    def select_cols(self, idx: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.rows, len(idx), self.ring, [self._cols[j] for j in idx])

    def over(self, ring: Ring) -> "Matrix":
        """Same integer entries read in another ring (Z -> Q or F_p)."""
        return Matrix(self.rows, self.cols, ring, self._cols)

    def apply(self, vec: dict) -> dict:
        """Image of a sparse vector ``{index: coeff}``."""
        red = self.ring.reduce
        out: dict = {}
        for j, a in vec.items():
            for i, v in self._cols[j].items():
                out[i] = out.get(i, 0) + a * v
        return {i: red(v) for i, v in out.items() if red(v)}


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if a.cols != b.rows:
        raise DimensionError(f"cannot compose {a.shape} after {b.shape}")
    red = a.ring.reduce
    acols = a._cols
    cols = []
    for bc in b._cols:
        acc: dict = {}
        for k, bv in bc.items():
            for i, av in acols[k].items():
                acc[i] = acc.get(i, 0) + av * bv
        cols.append({i: w for i, v in acc.items() if (w := red(v))})
    return Matrix._raw(a.rows, b.cols, a.ring, cols)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product, first factor major: basis (i, k) -> i * dim_b + k."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    red = a.ring.reduce
    cols = []
    for ac in a._cols:
        for bc in b._cols:
            cols.append({i * b.rows + k: red(av * bv)
                         for i, av in ac.items() for k, bv in bc.items() if red(av * bv)})
    return Matrix._raw(a.rows * b.rows, a.cols * b.cols, a.ring, cols)


def block_diag(mats: Sequence[Matrix], ring: Ring) -> Matrix:
    rows = cols = 0
    out = []
    for m in mats:
        out.extend({i + rows: v for i, v in c.items()} for c in m._cols)
        rows += m.rows
        cols += m.cols
    return Matrix._raw(rows, cols, ring, out)


def vstack(mats: Sequence[Matrix], ring: Ring, cols: int) -> Matrix:
    out = [{} for _ in range(cols)]
    off = 0
    for m in mats:
        if m.cols != cols:
            raise DimensionError("vstack needs equal column counts")
        for j, c in enumerate(m._cols):
            for i, v in c.items():
                out[j][i + off] = v
        off += m.rows
    return Matrix._raw(off, cols, ring, out)


# --------------------------------------------------------------------------
# field elimination (python-flint backend)

def _to_flint(m: Matrix):
    flat = [0] * (m.rows * m.cols)
    for j, c in enumerate(m._cols):
        for i, v in c.items():
            flat[i * m.cols + j] = v
    if m.ring.kind == "Fp":
        return flint.nmod_mat(m.rows, m.cols, flat, m.ring.p)
    if m.ring.kind == "Q":
        return flint.fmpq_mat(m.rows, m.cols,
                              [flint.fmpq(v.numerator, v.denominator) if isinstance(v, Fraction) else v
                               for v in flat])
    return flint.fmpz_mat(m.rows, m.cols, flat)


def _from_flint_entry(v, ring: Ring):
    if ring.kind == "Q":
        return Fraction(int(v.p), int(v.q))
    return int(v)


def _require_field(m: Matrix, op: str):
    if not m.ring.is_field:
        raise RingMismatch(f"{op} needs a field; got {m.ring} (use Q, or the Smith form over Z)")


def rref(m: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    _require_field(m, "rref")
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return [], []
    R, rank = _to_flint(m).rref()
    rows, pivots = [], []
    for i in range(rank):
        row = [_from_flint_entry(R[i, j], m.ring) for j in range(m.cols)]
        pivots.append(next(j for j, v in enumerate(row) if v))
        rows.append(row)
    return rows, pivots


def rank_over_field(m: Matrix) -> int:
    _require_field(m, "rank_over_field")
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    return _to_flint(m).rank()


def rank(m: Matrix) -> int:
    """Rank over the fraction field (for Z this is the rank over Q)."""
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    return _to_flint(m).rank()


@dataclass(frozen=True)
class KernelData:
    """Echelon kernel basis: ``basis[:, t]`` has a 1 at ``free[t]`` and 0 at the other free columns."""

    basis: Matrix
    free: tuple[int, ...]
    pivots: tuple[int, ...]


def kernel(m: Matrix) -> KernelData:
    _require_field(m, "kernel")
    rows, pivots = rref(m)
    pset = set(pivots)
    free = [j for j in range(m.cols) if j not in pset]
    one = m.ring.coerce(1)
    cols = []
    for f in free:
        c = {f: one}
        for r, p in zip(rows, pivots):
            if r[f]:
                c[p] = m.ring.reduce(-r[f])
        cols.append(c)
    return KernelData(Matrix._raw(m.cols, len(free), m.ring, cols), tuple(free), tuple(pivots))


def kernel_basis(m: Matrix) -> list[tuple]:
    """Null-space basis as dense column vectors; its size is ``cols - rank``."""
    k = kernel(m).basis
    return [tuple(row[t] for row in k.to_rows()) for t in range(k.cols)]


def solve(m: Matrix, rhs: Matrix) -> Matrix:
    """One solution ``X`` of ``m @ X == rhs`` over a field; raises if inconsistent."""
    _require_field(m, "solve")
    if rhs.rows != m.rows:
        raise DimensionError(f"rhs has {rhs.rows} rows, matrix has {m.rows}")
    zero_cols = [{} for _ in range(rhs.cols)]
    if rhs.is_zero():
        return Matrix._raw(m.cols, rhs.cols, m.ring, zero_cols)
    aug = Matrix._raw(m.rows, m.cols + rhs.cols, m.ring, list(m._cols) + list(rhs._cols))
    rows, pivots = rref(aug)
    if any(p >= m.cols for p in pivots):
        raise ValueError("linear system is inconsistent")
    cols = [{} for _ in range(rhs.cols)]
    for r, p in zip(rows, pivots):
        for t in range(rhs.cols):
            v = r[m.cols + t]
            if v:
                cols[t][p] = v
    return Matrix._raw(m.cols, rhs.cols, m.ring, cols)


# --------------------------------------------------------------------------
# Smith normal form over Z

@dataclass(frozen=True)
class SnfResult:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def _dense_snf_diagonal(a: list[list[int]]) -> list[int]:
    """Diagonal entries from unimodular row/column reduction of a dense matrix."""
    a = [row[:] for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for i in range(t, m):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility of the trailing block by the pivot
                bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
                if bad is None:
                    break
                rb, rt = a[bad], a[t]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest entry of row/column t to the pivot and repeat
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cand)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _normalise_chain(diag: Iterable[int]) -> tuple[int, ...]:
    d = sorted(x for x in diag if x)
    # enforce d_1 | d_2 | ... via gcd/lcm exchanges
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return tuple(d)


def smith_normal_form(m: Matrix) -> SnfResult:
    """Invariant factors of an integer matrix.

    Unit pivots are eliminated sparsely first (cheap Schur complements with a
    Markowitz-style choice); the remainder goes through dense reduction.
    """
    if m.ring.kind != "Z":
        raise RingMismatch(f"Smith normal form needs Z, got {m.ring}")
    rows: dict[int, dict[int, int]] = {}
    colrows: dict[int, set[int]] = {}
    for j, c in enumerate(m._cols):
        for i, v in c.items():
            rows.setdefault(i, {})[j] = v
            colrows.setdefault(j, set()).add(i)
    units = 0
    while True:
        best = None
        for i, r in rows.items():
            lr = len(r) - 1
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = lr * (len(colrows[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows.pop(pi)
        pv = prow[pj]
        for j in prow:
            colrows[j].discard(pi)
        for i in list(colrows[pj]):
            r = rows[i]
            f = r[pj] * pv  # pv is +-1, so r[pj] / pv == r[pj] * pv
            for j, v in prow.items():
                w = r.get(j, 0) - f * v
                if w:
                    if j not in r:
                        colrows[j].add(i)
                    r[j] = w
                elif j in r:
                    del r[j]
                    colrows[j].discard(i)
            if not r:
                del rows[i]
        del colrows[pj]
        units += 1
    rest = []
    if rows:
        cidx = sorted({j for r in rows.values() for j in r})
        pos = {j: k for k, j in enumerate(cidx)}
        for r in rows.values():
            dense = [0] * len(cidx)
            for j, v in r.items():
                dense[pos[j]] = v
            rest.append(dense)
    diag = [1] * units + (_dense_snf_diagonal(rest) if rest else [])
    return SnfResult(_normalise_chain(diag))


# --------------------------------------------------------------------------
# homology at one position

def homology_at(d_out: Matrix, d_in: Matrix, ring: Ring | None = None) -> tuple[int, tuple[int, ...]]:
    """Homology of ``C_{n+1} --d_in--> C_n --d_out--> C_{n-1}`` at ``C_n``.

    Returns ``(betti, torsion)``; torsion is empty over a field.
    """
    ring = ring or d_out.ring
    if d_out.ring != ring or d_in.ring != ring:
        raise RingMismatch("differentials and ring disagree")
    if d_out.cols != d_in.rows:
        raise DimensionError(f"d_out has {d_out.cols} columns but d_in has {d_in.rows} rows")
    if not mat_mul(d_out, d_in).is_zero():
        raise NotAComplexError("d_out @ d_in is nonzero")
    betti = d_out.cols - rank(d_out) - rank(d_in)
    if ring.is_field:
        return betti, ()
    # C_n / im d_in has the same torsion as ker d_out / im d_in since C_n / ker embeds in a free module
    return betti, smith_normal_form(d_in).torsion
