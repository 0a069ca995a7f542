"""Seeded random machines for the property and acceptance suites."""
from __future__ import annotations

import random

from .core import LexTransducer, LexTransition, TwoTapeAutomaton, TwoTapeTransition, WeightAlphabet


def _output(rng: random.Random, gamma, max_len: int = 2) -> tuple:
    return tuple(rng.choice(gamma) for _ in range(rng.randint(0, max_len)))


def random_lex_transducer(
    rng: random.Random,
    max_states: int = 5,
    max_weights: int = 3,
    max_sigma: int = 2,
    max_gamma: int = 2,
    max_transitions: int = 12,
    deterministic: bool = False,
) -> LexTransducer:
    n = rng.randint(1, max_states)
    W = WeightAlphabet(tuple(f"w{i}" for i in range(rng.randint(1, max_weights))))
    sigma = tuple("xyz"[: rng.randint(1, max_sigma)])
    gamma = tuple("pqr"[: rng.randint(1, max_gamma)])
    if deterministic:
        initial = {rng.randrange(n)}
        slots = [(q, s) for q in range(n) for s in sigma]
        rng.shuffle(slots)
        slots = slots[: rng.randint(0, min(len(slots), max_transitions))]
        trans = [
            LexTransition(q, s, rng.choice(W.symbols), _output(rng, gamma), rng.randrange(n))
            for q, s in slots
        ]
    else:
        initial = set(rng.sample(range(n), rng.randint(1, min(2, n))))
        trans = [
            LexTransition(rng.randrange(n), rng.choice(sigma), rng.choice(W.symbols),
                          _output(rng, gamma), rng.randrange(n))
            for _ in range(rng.randint(0, max_transitions))
        ]
    final = set(rng.sample(range(n), rng.randint(0, min(2, n))))
    return LexTransducer(W, sigma, gamma, tuple(f"s{i}" for i in range(n)), initial, final, tuple(trans))


def random_two_tape(
    rng: random.Random,
    max_states: int = 5,
    max_transitions: int = 10,
    eps_prob: float = 0.25,
) -> TwoTapeAutomaton:
    n = rng.randint(1, max_states)
    sigma, gamma = ("x", "y"), ("p", "q")
    trans = []
    for _ in range(rng.randint(0, max_transitions)):
        inp = None if rng.random() < eps_prob else rng.choice(sigma)
        trans.append(TwoTapeTransition(rng.randrange(n), inp, _output(rng, gamma), rng.randrange(n)))
    initial = set(rng.sample(range(n), rng.randint(1, min(2, n))))
    final = set(rng.sample(range(n), rng.randint(1, min(2, n))))
    return TwoTapeAutomaton(sigma, gamma, tuple(f"s{i}" for i in range(n)), initial, final, tuple(trans))


def lex_corpus(size: int, seed: int = 0, **kw) -> list:
    rng = random.Random(seed)
    return [random_lex_transducer(rng, **kw) for _ in range(size)]
