"""The exponential-separation family and its state-blowup benchmark.

gen_family(n) has n + 2 states.  q0 loops on 0 and 1 and guesses a 1 into q1;
q1 .. qn form a shift register, so after reading x the state qi is active iff
the i-th symbol from the end of x is 1.  On the end marker 2 every active qk
moves to the final state with output yk and weight w(n+1-k).  The weights
ascend, so the largest active k (the oldest 1 still in the window) wins.

Selecting the oldest 1 is what makes every configuration of q1 .. qn
observable: feeding x 0^j 2 for j = 0, 1, ... reports yn exactly when the
symbol n - j places from the end of x is 1, so x can be recovered from the
responses.  Selecting the most recent 1 would only expose the position of
that one bit.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass
from typing import Optional

from .core import LexFSTError, LexTransducer, LexTransition, WeightAlphabet, encode_single_tape


@dataclass(frozen=True)
class FamilyParams:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise LexFSTError("n must be ≥ 3")


def gen_family(n: int) -> LexTransducer:
    n = FamilyParams(n).n
    w = [f"w{k}" for k in range(1, n + 1)]
    y = [f"y{k}" for k in range(1, n + 1)]
    T = []
    for b in "01":
        T.append(LexTransition(0, b, w[0], (), 0))
    T.append(LexTransition(0, "1", w[0], (), 1))
    for i in range(1, n):
        for b in "01":
            T.append(LexTransition(i, b, w[0], (), i + 1))
    for k in range(1, n + 1):
        T.append(LexTransition(k, "2", w[n - k], (y[k - 1],), n + 1))
    return LexTransducer(
        WeightAlphabet(tuple(w)),
        ("0", "1", "2"),
        tuple(y),
        tuple(f"q{i}" for i in range(n + 2)),
        frozenset({0}),
        frozenset({n + 1}),
        tuple(T),
    )


def expected_output(n: int, x) -> Optional[str]:
    """The y-symbol the family selects on x·2, read off x directly (None: rejected)."""
    tail = list(x)[-n:]
    for k in range(len(tail), 0, -1):
        if tail[-k] == "1":
            return f"y{k}"
    return None


@dataclass(frozen=True)
class BenchRow:
    n: int
    states_lex: int
    states_erased: int
    states_encoded: int
    min_dfa_states: int
    erase_ms: float
    encode_ms: float
    mindfa_ms: float


CSV_COLUMNS = ["n", "states_lex", "states_erased", "min_dfa_states", "erase_ms", "mindfa_ms"]


def bench_row(n: int) -> BenchRow:
    from .analysis import check_strongly_functional, minimal_dfa_size
    from .erase import erase_strong

    M = gen_family(n)
    verdict = check_strongly_functional(M)
    if not verdict:
        raise LexFSTError(f"gen_family({n}) is not strongly functional: {verdict.reason}")
    t0 = time.perf_counter()
    N = erase_strong(M)
    t1 = time.perf_counter()
    A = encode_single_tape(N)
    t2 = time.perf_counter()
    size = minimal_dfa_size(A)
    t3 = time.perf_counter()
    return BenchRow(
        n, M.n_states, N.n_states, A.n_states, size,
        (t1 - t0) * 1e3, (t2 - t1) * 1e3, (t3 - t2) * 1e3,
    )


def bench_family(n_min: int, n_max: int, jobs: int = 1) -> list:
    if not 3 <= n_min <= n_max:
        raise LexFSTError("need 3 ≤ n_min ≤ n_max")
    ns = range(n_min, n_max + 1)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(bench_row, ns))
    return [bench_row(n) for n in ns]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in rows:
        d = asdict(r)
        d["erase_ms"] = f"{r.erase_ms:.3f}"
        d["mindfa_ms"] = f"{r.mindfa_ms:.3f}"
        writer.writerow(d)
    return buf.getvalue()
