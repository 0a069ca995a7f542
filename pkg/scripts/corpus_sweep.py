"""Cross-check evaluator, erasures and functionality against the brute-force oracle
on a random corpus, and report any disagreement.

    python scripts/corpus_sweep.py --size 500 --seed 3 --max-len 6
"""
import argparse
import time
from collections import Counter

from lexfst.analysis import check_functional, check_strongly_functional, eval_two_tape
from lexfst.core import words
from lexfst.corpus import lex_corpus
from lexfst.erase import erase_general, erase_strong
from lexfst.evaluate import run
from lexfst.oracle import oracle_run


def sweep(M, max_len, stats):
    Ng = erase_general(M)
    strong = check_strongly_functional(M)
    Ns = erase_strong(M) if strong else None
    stats["strongly functional"] += bool(strong)
    multi = False
    for c in words(M.sigma, max_len):
        r, ref = run(M, c), oracle_run(M, c)
        stats["inputs"] += 1
        if (r.accepted, r.selected, r.min_weight) != (ref.accepted, ref.selected, ref.min_weight):
            stats["run mismatch"] += 1
        if eval_two_tape(Ng, c) != set(ref.selected):
            stats["general erasure mismatch"] += 1
        if Ns is not None and eval_two_tape(Ns, c) != set(ref.selected):
            stats["strong erasure mismatch"] += 1
        multi |= len(ref.selected) > 1
    v = check_functional(M)
    if v:
        stats["functional missed"] += multi
    else:
        stats["non-functional"] += 1
        stats["unconfirmed witness"] += len(oracle_run(M, v.witness).selected) < 2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-len", type=int, default=6)
    args = ap.parse_args()

    t0 = time.perf_counter()
    stats = Counter()
    for M in lex_corpus(args.size, args.seed):
        sweep(M, args.max_len, stats)
    for key in ["inputs", "strongly functional", "non-functional", "run mismatch",
                "general erasure mismatch", "strong erasure mismatch", "functional missed",
                "unconfirmed witness"]:
        print(f"{key:>26}: {stats[key]}")
    print(f"{args.size} machines in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
