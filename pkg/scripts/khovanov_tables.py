"""Print normalised Khovanov tables of the built-in diagrams as (i, j) grids."""
import argparse
import sys

from colposet.khovanov import standard_diagrams
from colposet.sweeps import KhovanovConfig, khovanov_tables


def grid(table: dict) -> str:
    if not table:
        return "  (zero)"
    i_vals = sorted({i for i, _ in table})
    j_vals = sorted({j for _, j in table}, reverse=True)
    lines = ["j\\i\t" + "\t".join(map(str, i_vals))]
    for j in j_vals:
        cells = []
        for i in i_vals:
            b, t = table.get((i, j), (0, ()))
            text = str(b) if b else ""
            if t:
                text += ("+" if text else "") + "+".join(f"Z{k}" for k in t)
            cells.append(text or ".")
        lines.append(f"{j}\t" + "\t".join(cells))
    return "\n".join(lines)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help=f"any of {', '.join(sorted(standard_diagrams()))}")
    ap.add_argument("--ring", default="Z")
    args = ap.parse_args()
    cfg = KhovanovConfig(tuple(args.names), args.ring) if args.names else KhovanovConfig(ring=args.ring)
    for name, table in khovanov_tables(cfg).items():
        print(f"## {name}")
        print(grid(table))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
