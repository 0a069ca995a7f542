import random

import numpy as np
from hypothesis import given, settings, strategies as st

from lexfst import evaluate
from lexfst.core import LexTransducer, words
from lexfst.corpus import random_lex_transducer
from lexfst.oracle import enumerate_accepting, oracle_equivalence, oracle_run

from conftest import w


def adjacency_walks(M: LexTransducer, c) -> int:
    """Label-compatible accepting walks, by a product of per-symbol count matrices."""
    n = M.n_states
    mats = {s: np.zeros((n, n), dtype=np.int64) for s in M.sigma}
    for t in M.transitions:
        mats[t.input][t.src, t.dst] += 1
    v = np.array([1 if q in M.initial else 0 for q in range(n)], dtype=np.int64)
    for s in c:
        v = v @ mats[s]
    return int(sum(v[q] for q in M.final))


def test_enumerate_t1(t1):
    paths = enumerate_accepting(t1, ("x",))
    assert sorted(p.weight for p in paths) == [("a",), ("b",)]
    assert enumerate_accepting(t1, ()) == []


def test_witness_chains(t2):
    for p in enumerate_accepting(t2, w("x x")):
        assert len(p.transitions) == len(p.weight) == 2
        assert p.transitions[0].dst == p.transitions[1].src
        assert p.output == p.transitions[0].output + p.transitions[1].output


def test_oracle_run_t1(t1):
    r = oracle_run(t1, ("x",))
    assert r.quotient == {("p",): ("a",), ("q",): ("b",)}
    assert r.selected == {("p",)}


def test_oracle_run_t2(t2):
    assert oracle_run(t2, w("x x")).selected == {("p", "p")}


def test_oracle_run_rejected(t1):
    r = oracle_run(t1, ("x", "x"))
    assert not r.accepted and r.quotient == {}


def test_equivalence_t1(t1):
    assert oracle_equivalence(t1, 4).equivalent


def test_equivalence_empty_language(t1):
    M = LexTransducer(t1.weights, t1.sigma, t1.gamma, t1.states, t1.initial, (), t1.transitions)
    assert oracle_equivalence(M, 4).equivalent


def test_broken_pruning_is_caught(t1, monkeypatch):
    monkeypatch.setattr(evaluate, "_better", lambda W, b1, b2: -evaluate.cmp_weights(W, b1, b2))
    res = oracle_equivalence(t1, 4)
    assert not res.equivalent
    assert res.witness == ("x",)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_witness_count_matches_matrix_power(seed):
    M = random_lex_transducer(random.Random(seed), max_transitions=8)
    for c in words(M.sigma, 4):
        assert len(enumerate_accepting(M, c)) == adjacency_walks(M, c)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_oracle_insensitive_to_order_and_names(seed, rnd):
    M = random_lex_transducer(random.Random(seed), max_transitions=8)
    perm = list(range(M.n_states))
    rnd.shuffle(perm)
    names = [None] * M.n_states
    for old, new in enumerate(perm):
        names[new] = f"r{old}"
    trans = [
        (perm[t.src], t.input, t.weight, t.output, perm[t.dst]) for t in M.transitions
    ]
    rnd.shuffle(trans)
    M2 = LexTransducer(M.weights, M.sigma, M.gamma, tuple(names),
                       {perm[q] for q in M.initial}, {perm[q] for q in M.final}, trans)
    for c in words(M.sigma, 4):
        a, b = oracle_run(M, c), oracle_run(M2, c)
        assert (a.quotient, a.selected, a.min_weight) == (b.quotient, b.selected, b.min_weight)
