"""Superposition-based evaluation of lexicographic transducers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import LexFSTError, LexTransducer, WeightAlphabet, cmp_weights


@dataclass(frozen=True)
class SuperpositionEntry:
    state: int
    weight: tuple
    outputs: frozenset


@dataclass(frozen=True)
class Superposition:
    entries: dict  # state -> SuperpositionEntry
    consumed: int = 0

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.values())

    def __getitem__(self, q):
        return self.entries[q]

    @property
    def configuration(self) -> frozenset:
        return frozenset(self.entries)


@dataclass(frozen=True)
class RunResult:
    accepted: bool
    quotient: dict  # output word -> minimal weight word
    selected: frozenset
    min_weight: Optional[tuple]


def _better(weights: WeightAlphabet, b1: tuple, b2: tuple) -> int:
    """Negative when b1 should survive over b2."""
    return cmp_weights(weights, b1, b2)


def canonicalize(weights: WeightAlphabet, triples: Iterable, consumed: int) -> Superposition:
    """Keep, per state, only the minimal weight and the union of outputs tied at it."""
    entries: dict = {}
    for q, b, outs in triples:
        b = tuple(b)
        if len(b) != consumed:
            raise LexFSTError(f"weight {b} has length {len(b)}, expected {consumed}")
        cur = entries.get(q)
        if cur is None:
            entries[q] = (b, set(outs))
            continue
        c = _better(weights, b, cur[0])
        if c < 0:
            entries[q] = (b, set(outs))
        elif c == 0:
            cur[1].update(outs)
    return Superposition(
        {q: SuperpositionEntry(q, b, frozenset(o)) for q, (b, o) in sorted(entries.items())},
        consumed,
    )


def initial_superposition(M: LexTransducer) -> Superposition:
    return Superposition(
        {q: SuperpositionEntry(q, (), frozenset({()})) for q in sorted(M.initial)}, 0
    )


def step_superposition(M: LexTransducer, S: Superposition, sym: str) -> Superposition:
    if sym not in M.sigma:
        raise LexFSTError(f"input symbol {sym!r} not in Sigma")
    candidates = []
    for e in S:
        for t in M.out_arcs(e.state, sym):
            candidates.append(
                (t.dst, e.weight + (t.weight,), {d + t.output for d in e.outputs})
            )
    return canonicalize(M.weights, candidates, S.consumed + 1)


def _check_input(M: LexTransducer, c: Sequence[str]) -> tuple:
    c = tuple(c)
    bad = [s for s in c if s not in M.sigma]
    if bad:
        raise LexFSTError(f"input symbol {bad[0]!r} not in Sigma")
    return c


def superpositions(M: LexTransducer, c: Sequence[str]) -> list:
    """Every superposition visited while reading `c`, the initial one included."""
    c = _check_input(M, c)
    S = initial_superposition(M)
    trace = [S]
    for sym in c:
        S = step_superposition(M, S, sym)
        trace.append(S)
    return trace


def result_from_final(weights: WeightAlphabet, finals: Iterable) -> RunResult:
    """Assemble a RunResult from (weight, outputs) pairs that reached a final state."""
    quotient: dict = {}
    for b, outs in finals:
        for d in outs:
            cur = quotient.get(d)
            if cur is None or cmp_weights(weights, b, cur) < 0:
                quotient[d] = b
    if not quotient:
        return RunResult(False, {}, frozenset(), None)
    best = None
    for b in quotient.values():
        if best is None or cmp_weights(weights, b, best) < 0:
            best = b
    selected = frozenset(d for d, b in quotient.items() if b == best)
    return RunResult(True, dict(sorted(quotient.items())), selected, best)


def run(M: LexTransducer, c: Sequence[str]) -> RunResult:
    S = superpositions(M, c)[-1]
    return result_from_final(
        M.weights, ((e.weight, e.outputs) for e in S if e.state in M.final)
    )


def quotient(M: LexTransducer, c: Sequence[str], exact: bool = True) -> dict:
    """Map each output to its minimal weight.

    The pruned mode drops outputs whose branches were dominated at some state,
    so it only carries the outputs that can still compete for the minimum.
    """
    if exact:
        from .oracle import oracle_run

        return oracle_run(M, _check_input(M, c)).quotient
    return run(M, c).quotient
