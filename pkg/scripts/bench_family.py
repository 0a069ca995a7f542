"""State blowup of the separation family: lex states vs minimal DFA of the erased relation.

    python scripts/bench_family.py --max 10 --csv bench.csv
"""
import argparse
import time

from lexfst.family import bench_family, rows_to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min", type=int, default=3)
    ap.add_argument("--max", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--csv")
    args = ap.parse_args()

    t0 = time.perf_counter()
    rows = bench_family(args.min, args.max, jobs=args.jobs)
    total = time.perf_counter() - t0
    print(f"{'n':>3} {'lex':>5} {'erased':>7} {'minDFA':>8} {'2^n':>6} {'ratio':>8} {'2^n/(n+2)':>10}")
    for r in rows:
        print(f"{r.n:>3} {r.states_lex:>5} {r.states_erased:>7} {r.min_dfa_states:>8} {2 ** r.n:>6} "
              f"{r.min_dfa_states / r.states_lex:>8.2f} {2 ** r.n / (r.n + 2):>10.2f}")
    print(f"total {total:.2f}s")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rows_to_csv(rows))


if __name__ == "__main__":
    main()
