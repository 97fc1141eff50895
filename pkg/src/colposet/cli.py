"""Command-line front end.

Exit status is 0 when every check passes, 1 when a verification fails and
2 for unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from .algebra import QQ, ZZ, Ring
from .chromatic import AlgebraM, build_chromatic_colouring, euler_check
from .coloured import ColouredPoset, Gluing
from .complexes import (build_C, build_K, build_S_truncated, cube_ses, gluing_complexes,
                        homology, homotopy_defect, homotopy_h, induced_map_on_homology, is_invertible,
                        map_phi, map_phi_prime, split_S, split_sign, verify_les, verify_main, verify_ses)
from .generate import random_colouring, random_instance, random_poset_with_top
from .io import FormatError, parse_coloured_poset, parse_graph, parse_pd, write_coloured_poset
from .khovanov import (build_khovanov_colouring, graded_dimensions, graded_euler_characteristic,
                       kauffman_state_sum, khovanov_table)
from .poset import PosetError

COMMANDS = ("homology", "cube", "verify-main", "verify-les", "verify-homotopy", "khovanov", "chromatic", "random")


@dataclass
class JobReport:
    command: str
    ok: bool = True
    rows: list = field(default_factory=list)  # table rows
    columns: tuple = ()
    messages: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def fail(self, msg: str):
        self.ok = False
        self.messages.append(msg)

    def emit(self, fmt: str, out=sys.stdout):
        if fmt == "json":
            payload = {"command": self.command, "ok": self.ok, "messages": self.messages,
                       "table": [dict(zip(self.columns, r)) for r in self.rows], **self.extra}
            out.write(json.dumps(payload, default=_jsonable, sort_keys=True) + "\n")
            return
        if self.columns:
            out.write("\t".join(self.columns) + "\n")
            for r in self.rows:
                out.write("\t".join(_cell(v) for v in r) + "\n")
        for m in self.messages:
            out.write(f"# {m}\n")
        out.write(f"# status: {'ok' if self.ok else 'FAILED'}\n")


def _jsonable(v):
    if isinstance(v, tuple):
        return list(v)
    return str(v)


def _cell(v) -> str:
    if isinstance(v, (tuple, list)):
        return ",".join(map(str, v)) if v else "-"
    return str(v)


def _homology_rows(cx, h=None) -> list:
    # every degree of the complex, zeros included, so an acyclic complex still shows its range
    h = h or homology(cx)
    return [(n, h.betti.get(n, 0), tuple(h.torsion.get(n, ()))) for n in cx.degrees]


def _load(args, need_boolean: bool = False) -> ColouredPoset:
    ring = args.ring
    if args.input:
        cp = parse_coloured_poset(args.input)
        if ring is not None and ring != cp.ring:
            if cp.ring != ZZ:
                raise FormatError(f"file is over {cp.ring}; only integer data can be read over {ring}")
            cp = cp.over(ring)
    elif args.random is not None:
        cp = random_instance(args.seed, args.random, args.max_rank, ring or ZZ)
    else:
        raise FormatError("give an input file or --random <r>")
    if need_boolean and not cp.is_boolean:
        raise PosetError("this command needs a Boolean carrier ('boolean <r>' in the file)")
    return cp


def cmd_homology(args) -> JobReport:
    cp = _load(args)
    rep = JobReport("homology", columns=("degree", "betti", "torsion"))
    rep.rows = _homology_rows(build_C(cp))
    return rep


def cmd_cube(args) -> JobReport:
    cp = _load(args, need_boolean=True)
    rep = JobReport("cube", columns=("degree", "betti", "torsion"))
    rep.rows = _homology_rows(build_K(cp))
    return rep


def cmd_verify_main(args) -> JobReport:
    cp = _load(args, need_boolean=True)
    res = verify_main(cp)
    rep = JobReport("verify-main", columns=("degree", "betti", "torsion"))
    rep.rows = _homology_rows(build_C(cp), res.c_homology)
    for f in res.failures:
        rep.fail(f)
    if res.ok:
        kind = "iso" if cp.ring.is_field else "same Betti numbers and torsion"
        rep.messages.append(f"{kind} in degrees {res.degrees[0]}..{res.degrees[-1]}")
    return rep


def cmd_verify_les(args) -> JobReport:
    cp = _load(args, need_boolean=True)
    field_ring = cp.ring if cp.ring.is_field else QQ
    cp = cp if cp.ring.is_field else cp.over(QQ)
    r = cp.carrier.r
    ells = [args.split] if args.split else list(range(1, r + 1))
    rep = JobReport("verify-les", columns=("split", "check", "result"))
    for ell in ells:
        if not 1 <= ell <= r:
            raise PosetError(f"--split {ell} is outside 1..{r}")
        g = Gluing.from_boolean_split(cp, ell)
        les = verify_les(g)
        rep.rows.append((ell, "poset LES", "exact" if les else "; ".join(les.failures)))
        if not les:
            rep.fail(f"split {ell}: poset sequence not exact")
        cube = verify_ses(*cube_ses(g))
        rep.rows.append((ell, "cube LES", "exact" if cube else "; ".join(cube.failures)))
        if not cube:
            rep.fail(f"split {ell}: cube sequence not exact")
        gc = gluing_complexes(g)
        bad = [n for n in range(gc.quotient.lo, gc.quotient.hi + 2)
               if not is_invertible(induced_map_on_homology(gc.pi, n))]
        rep.rows.append((ell, "pi_* iso", "yes" if not bad else f"fails in {bad}"))
        if bad:
            rep.fail(f"split {ell}: pi_* not invertible in degrees {bad}")
        lhs = gc.pi.compose(map_phi_prime(g, gc.quotient))
        rhs = map_phi(g.part1, None, gc.c_part1)
        s = split_sign(ell)
        same = all(lhs[n] == rhs[n].scale(s) for n in rhs.source.degrees)
        rep.rows.append((ell, "pi phi' = phi", "yes" if same else "no"))
        if not same:
            rep.fail(f"split {ell}: pi phi' differs from phi")
    rep.extra["ring"] = str(field_ring)
    return rep


def cmd_verify_homotopy(args) -> JobReport:
    if args.input:
        cp = parse_coloured_poset(args.input)
    else:
        rng = random.Random(args.seed)
        cp = random_colouring(random_poset_with_top(rng, args.size), rng, args.max_rank, args.ring or ZZ)
    if args.ring is not None and args.ring != cp.ring:
        cp = cp.over(args.ring)
    n_top = args.truncate
    s = build_S_truncated(cp, n_top)
    strict, rep_idx = split_S(s)
    dc = s.subcomplex(rep_idx, "D")
    c_part = s.subcomplex(strict, "C")
    c_direct = build_C(cp)
    rep = JobReport("verify-homotopy", columns=("degree", "dim S", "dim C", "dim D", "hd+dh=id"))
    defect = homotopy_defect(dc, homotopy_h(dc))
    for n in s.degrees:
        ok = defect[n].is_zero() if n in defect else None
        rep.rows.append((n, s.dim(n), c_part.dim(n), dc.dim(n), "n/a" if ok is None else ("yes" if ok else "no")))
        if ok is False:
            rep.fail(f"homotopy identity fails in degree {n}")
    for n in c_direct.degrees:
        if n <= n_top and c_direct.d(n) != c_part.d(n):
            rep.fail(f"strict part of S differs from C in degree {n}")
    return rep


def cmd_khovanov(args) -> JobReport:
    d = parse_pd(args.input)
    ring = args.ring or ZZ
    rep = JobReport("khovanov", columns=("i", "j", "betti", "torsion"))
    table = khovanov_table(d, ring, via=args.via)
    rep.rows = [(i, j, b, t) for (i, j), (b, t) in sorted(table.items())]
    cp = build_khovanov_colouring(d, ZZ)
    chi = graded_euler_characteristic(graded_dimensions(cp))
    r = len(d)
    kauf = {k: (-1) ** r * v for k, v in kauffman_state_sum(d).items()}
    if chi == kauf:
        rep.messages.append("graded Euler characteristic matches the Kauffman state sum")
    else:
        rep.fail(f"graded Euler characteristic {chi} differs from the state sum {kauf}")
    rep.extra["n_plus"], rep.extra["n_minus"] = d.n_plus, d.n_minus
    return rep


def cmd_chromatic(args) -> JobReport:
    g = parse_graph(args.input)
    ring = args.ring or ZZ
    alg = AlgebraM.truncated_polynomial(args.algebra_rank, ring)
    cp = build_chromatic_colouring(g, alg)
    rep = JobReport("chromatic", columns=("degree", "betti", "torsion"))
    rep.rows = _homology_rows(build_K(cp))
    e = euler_check(g, alg, with_homology=True)
    if e:
        rep.messages.append(f"Euler identity holds: {e.chromatic_value}")
    else:
        rep.fail(f"Euler identity fails: state sum {e.state_sum}, chains {e.chain_euler}, "
                 f"homology {e.homology_euler}, P(G, {alg.rank}) = {e.chromatic_value}")
    return rep


def cmd_random(args) -> JobReport:
    cp = random_instance(args.seed, args.random if args.random is not None else 3, args.max_rank, args.ring or ZZ)
    rep = JobReport("random")
    rep.extra["text"] = write_coloured_poset(cp)
    return rep


HANDLERS = {
    "homology": cmd_homology, "cube": cmd_cube, "verify-main": cmd_verify_main, "verify-les": cmd_verify_les,
    "verify-homotopy": cmd_verify_homotopy, "khovanov": cmd_khovanov, "chromatic": cmd_chromatic,
    "random": cmd_random,
}


def _ring(text: str) -> Ring:
    try:
        return Ring.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="colposet", description="Homology of coloured posets and cube complexes")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name in ("khovanov", "chromatic"):
            sp.add_argument("input")
        else:
            sp.add_argument("input", nargs="?")
        sp.add_argument("--ring", type=_ring, default=None, help="Z, Q or Fp:<p>")
        sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--random", type=int, default=None, metavar="R", help="random Boolean instance of rank R")
        sp.add_argument("--max-rank", type=int, default=3)
        if name == "verify-les":
            sp.add_argument("--split", type=int, default=None, help="atom to split along (default: all)")
        if name == "verify-homotopy":
            sp.add_argument("--truncate", type=int, default=6)
            sp.add_argument("--size", type=int, default=5, help="elements of the random poset")
        if name == "khovanov":
            sp.add_argument("--via", choices=("K", "C"), default="K")
        if name == "chromatic":
            sp.add_argument("--algebra-rank", type=int, default=2)
    return ap


def run(argv=None, out=sys.stdout) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = HANDLERS[args.command](args)
    except (FormatError, PosetError, ValueError, OSError) as exc:
        err = JobReport(args.command)
        err.fail(f"error: {exc}")
        err.emit(args.format, out)
        return 2
    if args.command == "random" and args.format == "tsv":
        out.write(rep.extra["text"])
        return 0
    rep.emit(args.format, out)
    return 0 if rep.ok else 1


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
