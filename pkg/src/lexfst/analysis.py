"""Classification, conflicts, functionality decisions, epsilon cycles,
two-tape evaluation and minimal DFA sizes."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence, Union

import networkx as nx

from .core import (
    NFA,
    LexFSTError,
    LexTransducer,
    TwoTapeAutomaton,
    TwoTapeTransition,
    reachable,
    trim_two_tape,
)


@dataclass(frozen=True)
class ClassReport:
    sequential_up_to_input: bool
    epsilon_free_up_to_input: bool
    deterministic_up_to_input: bool
    single_initial: bool


@dataclass(frozen=True)
class Conflict:
    q1: int
    q2: int
    symbol: str
    target: int
    w1: str
    w2: str
    equal_weights: bool
    co_reachable: bool


@dataclass(frozen=True)
class ConflictReport:
    pairs: tuple

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def blocking(self) -> list:
        """Co-reachable conflicts whose weights are equal."""
        return [c for c in self.pairs if c.equal_weights and c.co_reachable]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def classify(N: Union[TwoTapeAutomaton, LexTransducer]) -> ClassReport:
    """Syntactic flags relative to the input tape.

    Every transition reads at most one input symbol, so the machines this
    library builds are always sequential up to the input.
    """
    eps_free = all(t.input is not None for t in N.transitions)
    single = len(N.initial) == 1
    per_symbol = {}
    for t in N.transitions:
        per_symbol[t.src, t.input] = per_symbol.get((t.src, t.input), 0) + 1
    functional_delta = all(k <= 1 for k in per_symbol.values())
    return ClassReport(True, eps_free, eps_free and single and functional_delta, single)


# ---------------------------------------------------------------------------
# epsilon cycles and two-tape evaluation


def detect_eps_cycles(N: TwoTapeAutomaton) -> list:
    """Elementary cycles of epsilon-input transitions whose output is not empty.

    Each cycle is a tuple of transitions; parallel transitions give separate cycles.
    """
    eps = [t for t in N.transitions if t.input is None]
    g = nx.DiGraph()
    g.add_edges_from((t.src, t.dst) for t in eps)
    parallel: dict = {}
    for t in eps:
        parallel.setdefault((t.src, t.dst), []).append(t)
    found = []
    for cyc in nx.simple_cycles(g):
        start = cyc.index(min(cyc))
        cyc = cyc[start:] + cyc[:start]
        hops = [parallel[a, b] for a, b in zip(cyc, cyc[1:] + cyc[:1])]
        for choice in product(*hops):
            if any(t.output for t in choice):
                found.append(tuple(choice))
    return sorted(found)


def _live_states(N: TwoTapeAutomaton) -> set:
    edges = [(t.src, t.dst) for t in N.transitions]
    return reachable(N.initial, edges) & reachable(N.final, [(d, s) for s, d in edges])


def _productive_eps_cycle(N: TwoTapeAutomaton, live: set) -> Optional[TwoTapeTransition]:
    g = nx.DiGraph()
    g.add_nodes_from(live)
    g.add_edges_from(
        (t.src, t.dst) for t in N.transitions if t.input is None and t.src in live and t.dst in live
    )
    comp = {}
    for i, scc in enumerate(nx.strongly_connected_components(g)):
        for q in scc:
            comp[q] = i
    for t in N.transitions:
        if (t.input is None and t.output and t.src in live and t.dst in live
                and comp[t.src] == comp[t.dst]):
            return t
    return None


def eval_two_tape(N: TwoTapeAutomaton, c: Sequence[str]) -> set:
    """Every output `d` with (c, d) accepted by `N`."""
    c = tuple(c)
    for s in c:
        if s not in N.sigma:
            raise LexFSTError(f"input symbol {s!r} not in Sigma")
    live = _live_states(N)
    bad = _productive_eps_cycle(N, live)
    if bad is not None:
        raise LexFSTError(
            f"infinite output set possible: epsilon cycle through {N.states[bad.src]!r} writes output"
        )

    def closure(sup: set) -> set:
        todo = list(sup)
        while todo:
            q, out = todo.pop()
            for t in N.out_arcs(q, None):
                item = (t.dst, out + t.output)
                if t.dst in live and item not in sup:
                    sup.add(item)
                    todo.append(item)
        return sup

    sup = closure({(q, ()) for q in N.initial if q in live})
    for sym in c:
        sup = closure({
            (t.dst, out + t.output)
            for q, out in sup
            for t in N.out_arcs(q, sym)
            if t.dst in live
        })
        if not sup:
            break
    return {out for q, out in sup if q in N.final}


# ---------------------------------------------------------------------------
# conflicts and functionality


def square_reachable(M) -> set:
    """Pairs of states reachable together from I x I on a common input."""
    start = {(p, r) for p in M.initial for r in M.initial}
    seen = set(start)
    todo = deque(sorted(start))
    while todo:
        p, r = todo.popleft()
        for sym in M.sigma:
            for t1 in M.out_arcs(p, sym):
                for t2 in M.out_arcs(r, sym):
                    nxt = (t1.dst, t2.dst)
                    if nxt not in seen:
                        seen.add(nxt)
                        todo.append(nxt)
    return seen


def find_conflicts(M: LexTransducer) -> ConflictReport:
    """Pairs of distinct transitions entering one target on one input symbol."""
    groups: dict = {}
    for t in M.transitions:
        groups.setdefault((t.input, t.dst), []).append(t)
    together = square_reachable(M)
    pairs = []
    for (sym, target), ts in groups.items():
        for i, t1 in enumerate(ts):
            for t2 in ts[i + 1:]:
                pairs.append(Conflict(
                    t1.src, t2.src, sym, target, t1.weight, t2.weight,
                    t1.weight == t2.weight, (t1.src, t2.src) in together,
                ))
    pairs.sort(key=lambda c: (c.target, c.symbol, c.q1, c.q2, c.w1, c.w2))
    return ConflictReport(tuple(pairs))


def check_strongly_functional(M: LexTransducer) -> Verdict:
    if len(M.final) != 1:
        finals = [M.states[q] for q in sorted(M.final)]
        reason = "multiple final states" if finals else "no final state"
        return Verdict(False, finals, reason)
    blocking = find_conflicts(M).blocking
    if blocking:
        return Verdict(False, blocking[0], "co-reachable conflict with equal weights")
    return Verdict(True)


def _reduce(a: tuple, b: tuple) -> tuple:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return a[k:], b[k:]


_DIVERGED = "diverged"


def _square(N: TwoTapeAutomaton):
    """Square automaton restricted to co-accessible pairs: (pairs, start pairs, edges)."""
    start = [(p, r) for p in sorted(N.initial) for r in sorted(N.initial)]
    edges: dict = {}
    seen = set(start)
    todo = deque(start)
    while todo:
        P = todo.popleft()
        out = edges.setdefault(P, [])
        for sym in N.sigma:
            for t1 in N.out_arcs(P[0], sym):
                for t2 in N.out_arcs(P[1], sym):
                    nxt = (t1.dst, t2.dst)
                    out.append((sym, t1.output, t2.output, nxt))
                    if nxt not in seen:
                        seen.add(nxt)
                        todo.append(nxt)
    final = {P for P in seen if P[0] in N.final and P[1] in N.final}
    back = [(nxt, P) for P, es in edges.items() for _, _, _, nxt in es]
    coacc = reachable(final, back)
    live_edges = {
        P: [e for e in es if e[3] in coacc] for P, es in edges.items() if P in coacc
    }
    return coacc, [P for P in start if P in coacc], live_edges, final


def _single_delay_test(start, edges, final) -> bool:
    delay = {P: ((), ()) for P in start}
    todo = deque(start)
    while todo:
        P = todo.popleft()
        a, b = delay[P]
        if a and b:
            return False
        if P in final and (a or b):
            return False
        for _, u, v, nxt in edges.get(P, ()):
            d = _reduce(a + u, b + v)
            if nxt not in delay:
                delay[nxt] = d
                todo.append(nxt)
            elif delay[nxt] != d:
                return False
    return True


def _shortest_witness(start, edges, final) -> tuple:
    """Shortest input on which two accepting paths write different outputs."""
    # distance to a final pair and the first step of a shortest completion
    to_final: dict = {P: (0, None) for P in final}
    rev: dict = {}
    for P, es in edges.items():
        for e in es:
            rev.setdefault(e[3], []).append((P, e[0]))
    todo = deque(sorted(final))
    while todo:
        P = todo.popleft()
        for Q, sym in rev.get(P, ()):
            if Q not in to_final:
                to_final[Q] = (to_final[P][0] + 1, (sym, P))
                todo.append(Q)

    parent: dict = {}
    level = []
    for P in start:
        key = (P, ((), ()))
        if key not in parent:
            parent[key] = None
            level.append(key)
    best = None
    depth = 0
    while level and (best is None or depth < best[0]):
        for key in level:
            P, d = key
            if d == _DIVERGED:
                cand = depth + to_final[P][0]
            elif P in final and d != ((), ()):
                cand = depth
            else:
                continue
            if best is None or cand < best[0]:
                best = (cand, key)
        nxt_level = []
        for key in level:
            P, d = key
            if d == _DIVERGED:
                continue
            for sym, u, v, nxt in edges.get(P, ()):
                nd = _reduce(d[0] + u, d[1] + v)
                if nd[0] and nd[1]:
                    nd = _DIVERGED
                nkey = (nxt, nd)
                if nkey not in parent:
                    parent[nkey] = (key, sym)
                    nxt_level.append(nkey)
        level = nxt_level
        depth += 1
    if best is None:
        return None
    key = best[1]
    prefix = []
    P = key[0]
    while parent[key] is not None:
        key, sym = parent[key]
        prefix.append(sym)
    prefix.reverse()
    suffix = []
    while to_final[P][1] is not None:
        sym, P = to_final[P][1]
        suffix.append(sym)
    return tuple(prefix + suffix)


def check_functional_unweighted(N: TwoTapeAutomaton) -> Verdict:
    """Decide whether every input has at most one output, by tracking output
    delays on the input-synchronised square automaton."""
    if not N.is_input_eps_free:
        raise LexFSTError("functionality test needs an automaton without epsilon inputs")
    N = trim_two_tape(N)
    _, start, edges, final = _square(N)
    if _single_delay_test(start, edges, final):
        return Verdict(True)
    return Verdict(False, _shortest_witness(start, edges, final), "two outputs for one input")


def check_functional(M: LexTransducer) -> Verdict:
    """Functionality of the min-selected relation of `M`."""
    from .erase import erase_general

    return check_functional_unweighted(trim_two_tape(erase_general(M)))


# ---------------------------------------------------------------------------
# determinisation and minimisation


@dataclass(frozen=True)
class DFA:
    alphabet: tuple
    n_states: int
    initial: Optional[int]
    final: frozenset
    delta: dict  # (state, symbol) -> state; missing entries go to the dead state


def determinize(A: NFA) -> DFA:
    """Subset construction over the reachable, nonempty subsets."""
    succ: dict = {}
    for s, a, d in A.transitions:
        succ.setdefault((s, a), []).append(d)

    def closure(states) -> frozenset:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for r in succ.get((q, None), ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    start = closure(A.initial)
    if not start:
        return DFA(A.alphabet, 0, None, frozenset(), {})
    ids = {start: 0}
    order = [start]
    delta = {}
    i = 0
    while i < len(order):
        S = order[i]
        for a in A.alphabet:
            T = closure({r for q in S for r in succ.get((q, a), ())})
            if not T:
                continue
            if T not in ids:
                ids[T] = len(order)
                order.append(T)
            delta[i, a] = ids[T]
        i += 1
    final = frozenset(ids[S] for S in order if S & A.final)
    return DFA(A.alphabet, len(order), 0, final, delta)


def minimize(D: DFA) -> DFA:
    """Trim to live states, then refine {final, non-final} until stable."""
    if D.initial is None:
        return D
    live = reachable(D.final, [(d, s) for (s, _), d in D.delta.items()])
    if D.initial not in live:
        return DFA(D.alphabet, 0, None, frozenset(), {})
    states = sorted(live)
    block = {q: int(q in D.final) for q in states}
    n_blocks = len(set(block.values()))
    while True:
        sigs = {}
        for q in states:
            row = []
            for a in D.alphabet:
                r = D.delta.get((q, a))
                row.append(block[r] if r in live else -1)
            sigs[q] = (block[q], tuple(row))
        numbering: dict = {}
        for q in states:
            numbering.setdefault(sigs[q], len(numbering))
        block = {q: numbering[sigs[q]] for q in states}
        if len(numbering) == n_blocks:
            break
        n_blocks = len(numbering)
    delta = {}
    for (s, a), d in D.delta.items():
        if s in live and d in live:
            delta[block[s], a] = block[d]
    return DFA(
        D.alphabet, n_blocks, block[D.initial], frozenset(block[q] for q in D.final if q in live), delta
    )


def minimal_dfa_size(A: NFA) -> int:
    """Number of live Myhill-Nerode classes of the language of `A` (dead class excluded)."""
    return minimize(determinize(A)).n_states
