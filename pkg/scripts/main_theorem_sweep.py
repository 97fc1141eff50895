"""Check that phi: K -> C is a quasi-isomorphism on seeded random coloured Boolean lattices."""
import argparse
import sys
import time

from colposet.sweeps import MainSweepConfig, main_theorem_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--ranks", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--max-fiber-rank", type=int, default=3)
    ap.add_argument("--rings", nargs="+", default=["Q", "Fp:2", "Fp:3", "Z"])
    args = ap.parse_args()
    cfg = MainSweepConfig(args.seeds, tuple(args.ranks), args.max_fiber_rank, tuple(args.rings))
    start = time.perf_counter()
    rows = main_theorem_sweep(cfg)
    print("instance\tok\tms\thomology")
    for row in rows:
        print(f"{row.label}\t{row.ok}\t{row.seconds * 1000:.1f}\t{row.detail}")
    bad = sum(not r.ok for r in rows)
    print(f"# {len(rows) - bad}/{len(rows)} quasi-isomorphisms in {time.perf_counter() - start:.1f} s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
