"""Text formats for coloured posets, PD codes and graphs.

Coloured posets::

    # comments start with '#'
    poset Z                     # Z, Q, Fp:<p>
    boolean 2                   # optional: carrier is B_2, elements named 0, a1, a2, a1a2 (or 1)
    elem 0 rank 1 [deg 1]       # one line per element; undeclared Boolean elements have rank 0
    cover 0 a1                  # followed by one 'map' line per row of the matrix
    map 1

PD codes: ``pd n+ <k> n- <m>``, then ``X a b c d`` lines and optionally ``loops <c>``.
Graphs: ``graph <n>``, then ``e u v`` lines (0-based vertices).
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .algebra import Matrix, Ring
from .chromatic import GraphError, SimpleGraph
from .coloured import ColouredPoset, ColouringError
from .khovanov import DiagramError, PlanarDiagram
from .poset import BooleanLattice, FinitePoset, PosetError


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _read(source) -> str:
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, str) and "\n" not in source and Path(source).is_file():
        return Path(source).read_text()
    return source


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {tok!r}", no) from None


def _entry(tok: str, ring: Ring, no: int):
    try:
        if "/" in tok:
            if ring.kind != "Q":
                raise FormatError(f"fractions are only allowed over Q, got {tok!r}", no)
            return Fraction(tok)
        return int(tok)
    except ValueError:
        raise FormatError(f"bad matrix entry {tok!r}", no) from None


# --------------------------------------------------------------------------
# coloured posets

def parse_coloured_poset(source, validate: bool = True) -> ColouredPoset:
    """Parse text (or a path) in the coloured-poset format and check functoriality."""
    text = _read(source)
    ring = None
    lattice = None
    names: list[str] = []
    ranks: dict[str, int] = {}
    degs: dict[str, list[int]] = {}
    covers: list[tuple[str, str, int]] = []
    rows: dict[tuple[str, str], list] = {}
    pending = None  # (key, rows still expected, line of the cover)
    for no, tok in _lines(text):
        head = tok[0]
        if pending is not None and head != "map":
            key, left, cline = pending
            raise FormatError(f"cover {key[0]} {key[1]} expects {left} more 'map' row(s)", cline)
        if head == "poset":
            if ring is not None or len(tok) != 2:
                raise FormatError("expected a single 'poset <ring>' header", no)
            try:
                ring = Ring.parse(tok[1])
            except ValueError as exc:
                raise FormatError(str(exc), no) from None
        elif ring is None:
            raise FormatError("file must start with 'poset <ring>'", no)
        elif head == "boolean":
            if names or len(tok) != 2:
                raise FormatError("'boolean <r>' must precede the elements", no)
            r = _int(tok[1], no, "Boolean rank")
            if not 0 <= r <= 10:
                raise FormatError("Boolean rank must lie in 0..10", no)
            lattice = BooleanLattice(r)
        elif head == "elem":
            if len(tok) < 4 or tok[2] != "rank":
                raise FormatError("expected 'elem <name> rank <k> [deg ...]'", no)
            name = tok[1]
            if lattice is not None:
                try:
                    name = lattice.names[lattice.index(name)]
                except PosetError as exc:
                    raise FormatError(str(exc), no) from None
            if name in ranks:
                raise FormatError(f"element {name} declared twice or after a cover using it", no)
            k = _int(tok[3], no, "rank")
            if k < 0:
                raise FormatError("rank must be nonnegative", no)
            names.append(name)
            ranks[name] = k
            if len(tok) > 4:
                if tok[4] != "deg" or len(tok) != 5 + k:
                    raise FormatError(f"expected 'deg' followed by {k} internal degrees", no)
                degs[name] = [_int(t, no, "degree") for t in tok[5:]]
        elif head == "cover":
            if len(tok) != 3:
                raise FormatError("expected 'cover <x> <y>'", no)
            x, y = (_canonical(t, lattice, ranks, no) for t in tok[1:])
            if (x, y) in rows:
                raise FormatError(f"cover {x} {y} given twice", no)
            covers.append((x, y, no))
            rows[(x, y)] = []
            if ranks[y]:
                pending = ((x, y), ranks[y], no)
        elif head == "map":
            if pending is None:
                raise FormatError("'map' row without a preceding cover", no)
            key, left, cline = pending
            width = ranks[key[0]]
            if len(tok) - 1 != width:
                raise FormatError(f"map row for cover {key[0]} {key[1]} has {len(tok) - 1} entries, "
                                  f"expected {width}", no)
            rows[key].append([_entry(t, ring, no) for t in tok[1:]])
            pending = (key, left - 1, cline) if left > 1 else None
        else:
            raise FormatError(f"unknown directive {head!r}", no)
    if pending is not None:
        key, left, cline = pending
        raise FormatError(f"cover {key[0]} {key[1]} expects {left} more 'map' row(s)", cline)
    if ring is None:
        raise FormatError("empty input: missing 'poset <ring>' header")
    return _assemble(ring, lattice, names, ranks, degs, covers, rows, validate)


def _canonical(tok: str, lattice, ranks, no) -> str:
    if lattice is not None:
        try:
            tok = lattice.names[lattice.index(tok)]
        except PosetError as exc:
            raise FormatError(str(exc), no) from None
        ranks.setdefault(tok, 0)
        return tok
    if tok not in ranks:
        raise FormatError(f"unknown element {tok!r}", no)
    return tok


def _assemble(ring, lattice, names, ranks, degs, covers, rows, validate) -> ColouredPoset:
    if lattice is not None:
        carrier = lattice
        cover_set = set(carrier.covers)
        for x, y, no in covers:
            if (carrier.index(x), carrier.index(y)) not in cover_set:
                raise FormatError(f"{x} < {y} is not a cover of B_{lattice.r}", no)
    else:
        pos = {n: i for i, n in enumerate(names)}
        try:
            carrier = FinitePoset(names, [(pos[x], pos[y]) for x, y, _ in covers])
        except PosetError as exc:
            raise FormatError(str(exc)) from None
    if carrier.top is None:
        raise FormatError("poset has no unique maximal element")
    elems = carrier.names
    maps = {}
    for x, y, _ in covers:
        i, j = carrier.index(x), carrier.index(y)
        maps[(i, j)] = Matrix.from_rows(rows[(x, y)], ring, ranks.get(x, 0)) if rows[(x, y)] else \
            Matrix.zeros(ranks.get(y, 0), ranks.get(x, 0), ring)
    degrees = None
    if degs:
        missing = [e for e in elems if ranks.get(e, 0) and e not in degs]
        if missing:
            raise FormatError(f"element {missing[0]} has no internal degrees while others do")
        degrees = [degs.get(e, []) for e in elems]
    try:
        cp = ColouredPoset(carrier, ring, [ranks.get(e, 0) for e in elems], maps, degrees)
    except ColouringError as exc:
        raise FormatError(str(exc)) from None
    if validate:
        rep = cp.validation
        if not rep:
            raise FormatError(f"{rep.message} (witness {tuple(elems[w] for w in rep.witness)})")
    return cp


def _fmt(v) -> str:
    return str(v)


def write_coloured_poset(cp: ColouredPoset) -> str:
    p = cp.carrier
    out = [f"poset {cp.ring}"]
    if isinstance(p, BooleanLattice):
        out.append(f"boolean {p.r}")
    for x, name in enumerate(p.names):
        line = f"elem {name} rank {cp.ranks[x]}"
        if cp.degrees is not None and cp.ranks[x]:
            line += " deg " + " ".join(map(str, cp.degrees[x]))
        out.append(line)
    for x, y in p.covers:
        out.append(f"cover {p.names[x]} {p.names[y]}")
        for row in cp.edge_maps[(x, y)].to_rows():
            out.append(" ".join(["map"] + [_fmt(v) for v in row]))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# PD codes and graphs

def parse_pd(source) -> PlanarDiagram:
    text = _read(source)
    header = None
    crossings, loops = [], 0
    for no, tok in _lines(text):
        if tok[0] == "pd":
            if header is not None or len(tok) != 5 or tok[1] != "n+" or tok[3] != "n-":
                raise FormatError("expected a single header 'pd n+ <k> n- <m>'", no)
            header = (_int(tok[2], no, "n+"), _int(tok[4], no, "n-"))
        elif header is None:
            raise FormatError("file must start with 'pd n+ <k> n- <m>'", no)
        elif tok[0] == "X":
            if len(tok) != 5:
                raise FormatError("expected 'X a b c d'", no)
            crossings.append(tuple(_int(t, no, "edge label") for t in tok[1:]))
        elif tok[0] == "loops":
            if len(tok) != 2:
                raise FormatError("expected 'loops <count>'", no)
            loops += _int(tok[1], no, "loop count")
        else:
            raise FormatError(f"unknown directive {tok[0]!r}", no)
    if header is None:
        raise FormatError("empty input: missing 'pd' header")
    try:
        return PlanarDiagram(tuple(crossings), header[0], header[1], loops)
    except DiagramError as exc:
        raise FormatError(str(exc)) from None


def write_pd(d: PlanarDiagram) -> str:
    out = [f"pd n+ {d.n_plus} n- {d.n_minus}"]
    out += ["X " + " ".join(map(str, c)) for c in d.crossings]
    if d.loops:
        out.append(f"loops {d.loops}")
    return "\n".join(out) + "\n"


def parse_graph(source) -> SimpleGraph:
    text = _read(source)
    n = None
    edges = []
    for no, tok in _lines(text):
        if tok[0] == "graph":
            if n is not None or len(tok) != 2:
                raise FormatError("expected a single header 'graph <n>'", no)
            n = _int(tok[1], no, "vertex count")
        elif n is None:
            raise FormatError("file must start with 'graph <n>'", no)
        elif tok[0] == "e":
            if len(tok) != 3:
                raise FormatError("expected 'e u v'", no)
            edges.append((_int(tok[1], no, "vertex"), _int(tok[2], no, "vertex")))
            try:
                SimpleGraph(n, tuple(edges))
            except GraphError as exc:
                raise FormatError(str(exc), no) from None
        else:
            raise FormatError(f"unknown directive {tok[0]!r}", no)
    if n is None:
        raise FormatError("empty input: missing 'graph' header")
    return SimpleGraph(n, tuple(edges))


def write_graph(g: SimpleGraph) -> str:
    return "\n".join([f"graph {g.n}"] + [f"e {u} {v}" for u, v in g.edges]) + "\n"
