import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from lexfst.analysis import (
    check_functional,
    check_functional_unweighted,
    check_strongly_functional,
    classify,
    detect_eps_cycles,
    determinize,
    eval_two_tape,
    find_conflicts,
    minimal_dfa_size,
    minimize,
)
from lexfst.core import (
    NFA,
    LexFSTError,
    TwoTapeAutomaton,
    TwoTapeTransition,
    encode_single_tape,
    parse_fst2,
    words,
)
from lexfst.corpus import random_lex_transducer, random_two_tape
from lexfst.erase import erase_general
from lexfst.family import gen_family
from lexfst.oracle import oracle_run, two_tape_outputs

from conftest import load_fst2, load_lex, w


def fst2(body):
    return parse_fst2("fst2 v1\n" + body)


def test_classify_t1(t1):
    r = classify(t1)
    assert r.sequential_up_to_input and r.epsilon_free_up_to_input and r.single_initial
    assert not r.deterministic_up_to_input


def test_classify_eps_loop():
    r = classify(load_fst2("eps_loop.fst2"))
    assert not r.epsilon_free_up_to_input and not r.deterministic_up_to_input


def test_classify_deterministic():
    assert classify(load_lex("identity.lfst")).deterministic_up_to_input


def test_eps_cycles_self_loop():
    N = load_fst2("eps_loop.fst2")
    cycles = detect_eps_cycles(N)
    assert len(cycles) == 1 and cycles[0][0].output == ("g",)


def test_eps_cycles_silent_cycle_ignored():
    N = fst2("Sigma: x\nGamma: g\nQ: a b\nI: a\nF: b\nT: a - - b\nT: b - - a\n")
    assert detect_eps_cycles(N) == []


def test_eps_cycles_parallel_edges():
    N = fst2("Sigma: x\nGamma: g\nQ: a b\nI: a\nF: b\n"
             "T: a - g b\nT: a - - b\nT: b - - a\n")
    assert len(detect_eps_cycles(N)) == 1


def test_eval_two_tape_ambiguous():
    assert eval_two_tape(load_fst2("ambiguous.fst2"), ("x",)) == {("p",), ("q",)}


def test_eval_two_tape_hash():
    N = load_fst2("hash.fst2")
    assert eval_two_tape(N, ()) == {()}
    assert eval_two_tape(N, ("x",)) == set()


def test_eval_two_tape_infinite():
    with pytest.raises(LexFSTError, match="infinite output set"):
        eval_two_tape(load_fst2("eps_loop.fst2"), ())


def test_eval_two_tape_dead_cycle_is_harmless():
    N = fst2("Sigma: x\nGamma: g\nQ: a b\nI: a\nF: a\nT: a x - a\nT: b - g b\n")
    assert eval_two_tape(N, ("x",)) == {()}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_eval_two_tape_matches_path_walk(seed):
    N = random_two_tape(random.Random(seed))
    try:
        got = {c: eval_two_tape(N, c) for c in words(N.sigma, 3)}
    except LexFSTError:
        assert detect_eps_cycles(N)
        return
    for c, outs in got.items():
        assert outs == two_tape_outputs(N, c)


def test_conflicts_t1(t1):
    rep = find_conflicts(t1)
    assert len(rep) == 1
    c = rep.pairs[0]
    assert (c.q1, c.q2, c.symbol, c.target) == (0, 0, "x", 1)
    assert not c.equal_weights and c.co_reachable
    assert rep.blocking == []


def test_conflicts_tie(t1_tie):
    assert len(find_conflicts(t1_tie).blocking) == 1


def test_unreachable_conflict_not_blocking():
    M = load_lex("t1_tie.lfst")
    # move the tied pair behind an unreachable source
    from lexfst.core import LexTransducer

    M2 = LexTransducer(M.weights, M.sigma, M.gamma, ("s0", "s1", "u"), {0}, {1},
                       [(2, "x", "a", ("p",), 1), (2, "x", "a", ("q",), 1), (0, "x", "a", ("p",), 1)])
    rep = find_conflicts(M2)
    assert rep.pairs and not rep.blocking
    assert check_strongly_functional(M2)


def test_strongly_functional_verdicts(t1, t1_tie):
    assert check_strongly_functional(t1)
    v = check_strongly_functional(t1_tie)
    assert not v and v.reason == "co-reachable conflict with equal weights"
    v = check_strongly_functional(load_lex("two_finals.lfst"))
    assert not v and v.reason == "multiple final states"


def test_family_strongly_functional():
    assert check_strongly_functional(gen_family(4))


def test_functional_unweighted_witness():
    v = check_functional_unweighted(load_fst2("ambiguous.fst2"))
    assert not v and v.witness == ("x",)


def test_functional_unweighted_delayed_outputs():
    # both paths write p.p on x.x, out of step
    N = fst2("Sigma: x\nGamma: p\nQ: a b c d\nI: a\nF: d\n"
             "T: a x p.p b\nT: b x - d\nT: a x - c\nT: c x p.p d\n")
    assert check_functional_unweighted(N)


def test_functional_unweighted_late_divergence():
    N = fst2("Sigma: x y\nGamma: p q\nQ: a b c d\nI: a\nF: d\n"
             "T: a x - b\nT: a x - c\nT: b y p d\nT: c y q d\nT: b x - b\nT: c x - c\n")
    v = check_functional_unweighted(N)
    assert not v and v.witness == w("x y")


def test_functional_unweighted_rejects_eps():
    with pytest.raises(LexFSTError):
        check_functional_unweighted(load_fst2("eps_loop.fst2"))


def test_check_functional(t1, t1_tie):
    assert check_functional(t1)
    v = check_functional(t1_tie)
    assert not v and v.witness == ("x",)


def multi_output_inputs(N, max_len):
    return [c for c in words(N.sigma, max_len) if len(eval_two_tape(N, c)) > 1]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_functional_unweighted_matches_brute_force(seed):
    N = random_two_tape(random.Random(seed), eps_prob=0.0)
    v = check_functional_unweighted(N)
    bad = multi_output_inputs(N, 5)
    if v:
        assert bad == []
    else:
        assert len(eval_two_tape(N, v.witness)) > 1
        # shortest: nothing shorter than the witness diverges
        assert all(len(c) >= len(v.witness) for c in bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_check_functional_matches_oracle(seed):
    M = random_lex_transducer(random.Random(seed), max_transitions=9)
    v = check_functional(M)
    if v:
        assert all(len(oracle_run(M, c).selected) <= 1 for c in words(M.sigma, 4))
    else:
        assert len(oracle_run(M, v.witness).selected) > 1


# ---------------------------------------------------------------------------
# minimal DFA


def test_min_dfa_hash():
    assert minimal_dfa_size(encode_single_tape(load_fst2("hash.fst2"))) == 2


def test_min_dfa_empty_language():
    assert minimal_dfa_size(NFA(("a",), 1, {0}, set(), ())) == 0
    assert minimal_dfa_size(NFA(("a",), 0, set(), set(), ())) == 0


def test_min_dfa_mod3():
    T = [(q, "a", (q + 1) % 3) for q in range(3)] + [(q, "a", q + 3) for q in range(3)]
    # states 3..5 are dead ends, so the language is a^k with k = 0 mod 3
    A = NFA(("a",), 6, {0}, {0}, T)
    assert minimal_dfa_size(A) == 3


def random_nfa(rng, n_max=5):
    n = rng.randint(1, n_max)
    T = [(rng.randrange(n), rng.choice("ab") if rng.random() > 0.15 else None, rng.randrange(n))
         for _ in range(rng.randint(0, 3 * n))]
    return NFA(("a", "b"), n, {rng.randrange(n)}, set(rng.sample(range(n), rng.randint(0, n))), T)


def table_filling_classes(D):
    """Myhill-Nerode classes of a DFA by the pairwise distinguishability table."""
    dead = D.n_states
    states = list(range(D.n_states + 1))

    def step(q, a):
        return D.delta.get((q, a), dead) if q != dead else dead

    dist = {(p, q): (p in D.final) != (q in D.final) for p in states for q in states}
    changed = True
    while changed:
        changed = False
        for p, q in itertools.product(states, states):
            if not dist[p, q] and any(dist[step(p, a), step(q, a)] for a in D.alphabet):
                dist[p, q] = changed = True
    reach = {D.initial}
    todo = [D.initial]
    while todo:
        q = todo.pop()
        for a in D.alphabet:
            r = step(q, a)
            if r not in reach:
                reach.add(r)
                todo.append(r)
    classes = []
    for q in sorted(reach):
        if not any(not dist[q, r] for r in classes):
            classes.append(q)
    # drop the class that never reaches acceptance
    return sum(1 for q in classes if dist[q, dead])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_min_dfa_matches_table_filling(seed):
    A = random_nfa(random.Random(seed))
    D = determinize(A)
    if D.initial is None:
        assert minimal_dfa_size(A) == 0
        return
    assert minimal_dfa_size(A) == table_filling_classes(D)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_min_dfa_same_language(seed):
    A = random_nfa(random.Random(seed))
    D = minimize(determinize(A))
    for c in words(A.alphabet, 5):
        q = D.initial
        for s in c:
            q = None if q is None else D.delta.get((q, s))
        assert (q is not None and q in D.final) == A.accepts(c)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_min_dfa_metamorphic(seed, rnd):
    A = random_nfa(random.Random(seed))
    n = A.n_states
    perm = list(range(n + 2))
    rnd.shuffle(perm)
    extra = [(perm[n], "a", perm[n + 1]), (perm[n + 1], "b", perm[0])]
    B = NFA(A.alphabet, n + 2, {perm[q] for q in A.initial}, {perm[q] for q in A.final} | {perm[n + 1]},
            [(perm[s], a, perm[d]) for s, a, d in A.transitions] + extra)
    # renamed, with two unreachable states added
    assert minimal_dfa_size(B) == minimal_dfa_size(A)


def test_encoding_of_erased_t1(t1):
    A = encode_single_tape(erase_general(t1))
    # one class per prefix of x#p
    assert minimal_dfa_size(A) == 4
