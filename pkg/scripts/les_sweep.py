"""Exactness of the gluing long exact sequence for random morphisms and all Boolean splits."""
import argparse
import sys

from colposet.sweeps import LesSweepConfig, les_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--morphism-seeds", type=int, default=20)
    ap.add_argument("--split-seeds", type=int, default=10)
    ap.add_argument("--max-fiber-rank", type=int, default=3)
    ap.add_argument("--max-lattice-rank", type=int, default=4)
    args = ap.parse_args()
    rows = les_sweep(LesSweepConfig(args.morphism_seeds, args.split_seeds, args.max_fiber_rank,
                                    args.max_lattice_rank))
    print("gluing\texact\tproblems")
    for row in rows:
        print(f"{row.label}\t{row.ok}\t{row.detail or '-'}")
    bad = sum(not r.ok for r in rows)
    print(f"# {len(rows) - bad}/{len(rows)} sequences exact")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
