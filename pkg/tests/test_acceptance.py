"""The eight acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed again in the
"acceptance criteria" section of the pytest summary.
"""
import csv
import io
import random
import time
from fractions import Fraction as F

import pytest

from lexfst.analysis import (
    _live_states,
    check_functional,
    check_strongly_functional,
    detect_eps_cycles,
    eval_two_tape,
    minimal_dfa_size,
)
from lexfst.core import LexFSTError, TwoTapeAutomaton, TwoTapeTransition, encode_single_tape, words
from lexfst.corpus import lex_corpus, random_lex_transducer, random_two_tape
from lexfst.erase import erase_general, erase_strong
from lexfst.evaluate import run, superpositions
from lexfst.family import bench_family, gen_family, rows_to_csv
from lexfst.oracle import oracle_run, two_tape_outputs
from lexfst.prob import Interval, interval_mul, interval_norm, prob_bracket, second_tape_outputs

from conftest import ACCEPTANCE_LINES, DATA
from test_prob import random_pfsa

MAX_LEN = 6
CORPUS_SIZE = 200


def record(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="session")
def corpus():
    return lex_corpus(CORPUS_SIZE, seed=2024)


@pytest.fixture(scope="session")
def oracle_table(corpus):
    return [{c: oracle_run(M, c) for c in words(M.sigma, MAX_LEN)} for M in corpus]


def test_criterion_1_family_blowup():
    t0 = time.perf_counter()
    rows = bench_family(3, 8)
    elapsed = time.perf_counter() - t0
    parsed = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
    problems = []
    for r, row in zip(rows, parsed):
        n = r.n
        if gen_family(n).n_states != n + 2 or int(row["states_lex"]) != n + 2:
            problems.append(f"n={n}: states_lex")
        size = int(row["min_dfa_states"])
        if size < 2 ** n:
            problems.append(f"n={n}: {size} < 2^n")
        if F(size, int(row["states_lex"])) < F(2 ** n, n + 2):
            problems.append(f"n={n}: ratio")
    # the bench pipeline is checked once more without the timing wrapper
    direct = minimal_dfa_size(encode_single_tape(erase_strong(gen_family(3))))
    if direct != int(parsed[0]["min_dfa_states"]):
        problems.append("bench disagrees with direct pipeline")
    ok = not problems and elapsed < 120 and len(parsed) == 6
    sizes = ",".join(row["min_dfa_states"] for row in parsed)
    record(1, "family blowup n=3..8", ok, f"min DFA sizes {sizes} in {elapsed:.1f}s {problems or ''}")


def test_criterion_2_oracle_equivalence(corpus, oracle_table):
    bad = []
    checked = 0
    for i, (M, table) in enumerate(zip(corpus, oracle_table)):
        for c, ref in table.items():
            r = run(M, c)
            checked += 1
            if (r.accepted, r.selected, r.min_weight) != (ref.accepted, ref.selected, ref.min_weight):
                bad.append((i, c))
    record(2, "run == oracle_run", not bad,
           f"{len(corpus)} machines, {checked} inputs, {len(bad)} mismatches {bad[:3]}")


def test_criterion_3_general_erasure(corpus, oracle_table):
    bad = []
    for i, (M, table) in enumerate(zip(corpus, oracle_table)):
        N = erase_general(M)
        for c in table:
            if eval_two_tape(N, c) != set(run(M, c).selected) or set(table[c].selected) != set(run(M, c).selected):
                bad.append((i, c))
    record(3, "general erasure == run", not bad, f"{len(bad)} mismatches {bad[:3]}")


def test_criterion_4_strong_erasure(corpus):
    subset = [M for M in corpus if check_strongly_functional(M)]
    bad = []
    for i, M in enumerate(subset):
        Ns, Ng = erase_strong(M), erase_general(M)
        for c in words(M.sigma, MAX_LEN):
            if eval_two_tape(Ns, c) != eval_two_tape(Ng, c):
                bad.append((i, c))
    ok = not bad and len(subset) > 0
    record(4, "strong erasure == general erasure", ok,
           f"{len(subset)} strongly functional machines, {len(bad)} mismatches {bad[:3]}")


def test_criterion_5_deterministic_runs():
    rng = random.Random(7)
    machines = [random_lex_transducer(rng, deterministic=True) for _ in range(100)]
    too_big = prefix_bad = pairs = 0
    for M in machines:
        accepted = {}
        for c in words(M.sigma, MAX_LEN):
            if any(len(S) > 1 for S in superpositions(M, c)):
                too_big += 1
            r = run(M, c)
            if r.accepted:
                accepted[c] = r.selected
        for c1, d1 in accepted.items():
            for k in range(len(c1)):
                c0 = c1[:k]
                if c0 in accepted:
                    pairs += 1
                    (o0,), (o1,) = accepted[c0], d1
                    if o1[: len(o0)] != o0:
                        prefix_bad += 1
    ok = too_big == 0 and prefix_bad == 0
    record(5, "deterministic runs", ok,
           f"100 machines, {too_big} oversized superpositions, "
           f"{pairs} accepted prefix pairs, {prefix_bad} prefix violations")


def seeded_eps_cycle(rng):
    while True:
        N = random_two_tape(rng, eps_prob=0.0)
        live = sorted(_live_states(N))
        if live:
            q = rng.choice(live)
            loop = TwoTapeTransition(q, None, (rng.choice(N.gamma),), q)
            return TwoTapeAutomaton(N.sigma, N.gamma, N.states, N.initial, N.final, N.transitions + (loop,))


def test_criterion_6_eps_cycles():
    rng = random.Random(11)
    clean = bad_clean = 0
    for _ in range(CORPUS_SIZE):
        N = random_two_tape(rng)
        if detect_eps_cycles(N):
            continue
        clean += 1
        for c in words(N.sigma, MAX_LEN):
            outs = eval_two_tape(N, c)
            if outs != two_tape_outputs(N, c):
                bad_clean += 1
    seeded = raised = 0
    for _ in range(50):
        N = seeded_eps_cycle(rng)
        seeded += 1
        try:
            eval_two_tape(N, ())
        except LexFSTError as e:
            raised += "infinite output set" in str(e)
    ok = bad_clean == 0 and raised == seeded and clean > 0
    record(6, "epsilon cycles", ok,
           f"{clean} cycle-free machines finite ({bad_clean} disagreements), "
           f"{raised}/{seeded} seeded cycles raised")


def test_criterion_7_functionality(corpus, oracle_table):
    false_yes = unconfirmed = no = 0
    for M, table in zip(corpus, oracle_table):
        v = check_functional(M)
        multi = any(len(r.selected) >= 2 for r in table.values())
        if v:
            false_yes += multi
        else:
            no += 1
            unconfirmed += len(oracle_run(M, v.witness).selected) < 2
    ok = false_yes == 0 and unconfirmed == 0
    record(7, "functionality agreement", ok,
           f"{no} non-functional, {false_yes} missed, {unconfirmed} unconfirmed witnesses")


def test_criterion_8_probability():
    from lexfst.prob import parse_pfsa

    problems = []
    if interval_mul(Interval(0, F(1, 2)), Interval(F(1, 2), 1)) != Interval(F(1, 4), F(1, 2)):
        problems.append("worked product")
    rng = random.Random(3)

    def rand_interval():
        a, b = sorted(rng.sample(range(0, 1001), 2))
        return Interval(F(a, 1000), F(b, 1000))

    for _ in range(1000):
        x, y = rand_interval(), rand_interval()
        if interval_norm(x * y) != interval_norm(x) * interval_norm(y):
            problems.append(f"norm {x} {y}")
    geo = parse_pfsa((DATA / "geometric.pfsa").read_text())
    for k in range(21):
        br = prob_bracket(geo, ("a",), k)
        if (br.lower, br.upper) != (1 - F(1, 2 ** k), 1):
            problems.append(f"geometric k={k}")
    sums = 0
    for seed in range(200):
        P = random_pfsa(random.Random(seed), two_tapes=True)
        for c in words(P.gamma, 2):
            total = prob_bracket(P, c, 6)
            joint = [prob_bracket(P, c, 6, d) for d in second_tape_outputs(P, c, 6)]
            sums += 1
            if sum(b.lower for b in joint) != total.lower:
                problems.append(f"additivity seed={seed} c={c}")
    record(8, "probabilistic semiring", not problems,
           f"1000 norm pairs, k=0..20 geometric, {sums} additivity checks, {len(problems)} failures "
           f"{problems[:3]}")
