"""Detection wall time against video length (predictions already in memory)."""

import argparse

from aslgram.cli import bench

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=int, nargs="+", default=[900, 1800, 3600, 7200, 14400])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'frames':>7} {'wall ms':>9} {'us/frame':>9}")
    for n in args.frames:
        s = bench(n, repeat=args.repeat)
        print(f"{n:>7} {s * 1000:>9.2f} {s * 1e6 / n:>9.2f}")
