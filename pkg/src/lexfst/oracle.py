"""Reference semantics by exhaustive path enumeration.

Nothing here prunes: every accepting path is materialised so that the fast
evaluator and the erasure constructions can be checked against it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .core import LexTransducer, TwoTapeAutomaton, reachable, words
from .evaluate import RunResult, result_from_final


@dataclass(frozen=True)
class PathWitness:
    transitions: tuple
    weight: tuple
    output: tuple


def enumerate_accepting(M: LexTransducer, c: Sequence[str]) -> list:
    c = tuple(c)
    found = []
    # states that cannot reach a final state are skipped; this never loses a path
    alive = reachable(M.final, [(t.dst, t.src) for t in M.transitions])

    def walk(q: int, i: int, path: tuple, weight: tuple, output: tuple):
        if q not in alive:
            return
        if i == len(c):
            if q in M.final:
                found.append(PathWitness(path, weight, output))
            return
        for t in M.out_arcs(q, c[i]):
            walk(t.dst, i + 1, path + (t,), weight + (t.weight,), output + t.output)

    for q in sorted(M.initial):
        walk(q, 0, (), (), ())
    return found


def oracle_run(M: LexTransducer, c: Sequence[str]) -> RunResult:
    pairs = {(p.weight, p.output) for p in enumerate_accepting(M, c)}
    return result_from_final(M.weights, ((b, (d,)) for b, d in sorted(pairs)))


def two_tape_outputs(N: TwoTapeAutomaton, c: Sequence[str]) -> set:
    """All outputs of `N` on `c` by walking paths.

    Within one run of epsilon moves a state is never revisited, which loses no
    output unless some epsilon cycle writes output.
    """
    c = tuple(c)
    outs: set = set()

    def walk(q: int, i: int, out: tuple, eps_seen: frozenset):
        if i == len(c) and q in N.final:
            outs.add(out)
        for t in N.out_arcs(q, None):
            if t.dst not in eps_seen:
                walk(t.dst, i, out + t.output, eps_seen | {t.dst})
        if i < len(c):
            for t in N.out_arcs(q, c[i]):
                walk(t.dst, i + 1, out + t.output, frozenset({t.dst}))

    for q in sorted(N.initial):
        walk(q, 0, (), frozenset({q}))
    return outs


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    witness: Optional[tuple] = None
    expected: object = None
    got: object = None


def oracle_equivalence(
    M: LexTransducer,
    max_len: int = 8,
    *,
    against: Optional[TwoTapeAutomaton] = None,
    runner: Optional[Callable] = None,
) -> Equivalence:
    """Compare the fast evaluator (or the two-tape automaton `against`) with the
    oracle on every input up to `max_len`; reports the first divergence."""
    from .analysis import eval_two_tape
    from .evaluate import run

    runner = runner or run
    for c in words(M.sigma, max_len):
        ref = oracle_run(M, c)
        if against is not None:
            got = eval_two_tape(against, c)
            if got != set(ref.selected):
                return Equivalence(False, c, set(ref.selected), got)
            continue
        res = runner(M, c)
        if (res.accepted, res.selected, res.min_weight) != (
            ref.accepted, ref.selected, ref.min_weight
        ):
            return Equivalence(False, c, ref, res)
    return Equivalence(True)

