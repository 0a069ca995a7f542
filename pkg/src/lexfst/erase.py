"""Weight erasure: build an unweighted two-tape automaton that accepts exactly
the pairs (c, d) where d is a minimal-weight output of the transducer on c."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .core import LexFSTError, LexTransducer, TwoTapeAutomaton, TwoTapeTransition, trim_two_tape


@dataclass(frozen=True)
class OrderFormula:
    """Weak ordering of the active states by accumulated weight, lowest class first.

    `epsilon_bottom` marks the initial formula, where every weight is the empty word.
    """

    classes: tuple  # tuple of frozensets
    epsilon_bottom: bool = False

    @property
    def configuration(self) -> frozenset:
        return frozenset().union(*self.classes) if self.classes else frozenset()

    @property
    def is_dead(self) -> bool:
        return not self.classes

    def class_of(self, q: int) -> int:
        for i, cls in enumerate(self.classes):
            if q in cls:
                return i
        raise KeyError(q)

    def __str__(self):
        parts = ["{" + ",".join(map(str, sorted(c))) + "}" for c in self.classes]
        return ("e=" if self.epsilon_bottom else "") + "<".join(parts)


@dataclass(frozen=True)
class ErasedState:
    """A state q paired with the formula of its run, or the sink f when q is None."""

    q: Optional[int]
    formula: Optional[OrderFormula]

    @property
    def is_sink(self) -> bool:
        return self.q is None


SINK = ErasedState(None, None)


def initial_formula(M: LexTransducer) -> OrderFormula:
    if not M.initial:
        return OrderFormula(())
    return OrderFormula((frozenset(M.initial),), True)


def _ranked_arcs(M: LexTransducer, phi: OrderFormula, sym: str) -> list:
    """Transitions leaving K_phi on `sym`, each with the order key of the weight it produces."""
    rank = M.weights.rank
    out = []
    for i, cls in enumerate(phi.classes):
        for q in sorted(cls):
            for t in M.out_arcs(q, sym):
                out.append(((rank[t.weight], i), t))
    return out


def successor_formula(M: LexTransducer, phi: OrderFormula, sym: str) -> OrderFormula:
    if sym not in M.sigma:
        raise LexFSTError(f"input symbol {sym!r} not in Sigma")
    best: dict = {}
    for key, t in _ranked_arcs(M, phi, sym):
        if t.dst not in best or key < best[t.dst]:
            best[t.dst] = key
    groups: dict = {}
    for q, key in best.items():
        groups.setdefault(key, set()).add(q)
    return OrderFormula(tuple(frozenset(groups[k]) for k in sorted(groups)))


def erase_general_labeled(M: LexTransducer):
    """Order-formula powerset erasure; also returns the ErasedState of every state.

    Transitions are grouped by (source formula, input symbol, target); within a
    group only the copies whose (weight rank, source class) key is minimal survive.
    """
    labels: list = [SINK]
    ids = {SINK: 0}
    names = ["f"]
    formula_ids: dict = {}

    def sid(st: ErasedState) -> int:
        if st not in ids:
            ids[st] = len(labels)
            labels.append(st)
            fi = formula_ids.setdefault(st.formula, len(formula_ids))
            names.append(f"{M.states[st.q]}@{fi}")
        return ids[st]

    phi0 = initial_formula(M)
    initial = {sid(ErasedState(q, phi0)) for q in sorted(M.initial)}
    if M.initial & M.final:
        initial.add(0)

    trans = []
    seen = {phi0} if not phi0.is_dead else set()
    todo = deque(seen)
    while todo:
        phi = todo.popleft()
        for sym in M.sigma:
            arcs = _ranked_arcs(M, phi, sym)
            if not arcs:
                continue
            phi2 = successor_formula(M, phi, sym)
            if phi2 not in seen:
                seen.add(phi2)
                todo.append(phi2)
            groups: dict = {}
            for key, t in arcs:
                groups.setdefault(t.dst, []).append((key, t))
                if t.dst in M.final:
                    groups.setdefault(None, []).append((key, t))
            for target, cands in groups.items():
                low = min(k for k, _ in cands)
                dst = 0 if target is None else sid(ErasedState(target, phi2))
                for key, t in cands:
                    if key == low:
                        trans.append(TwoTapeTransition(sid(ErasedState(t.src, phi)), sym, t.output, dst))

    N = TwoTapeAutomaton(M.sigma, M.gamma, tuple(names), frozenset(initial), frozenset({0}), tuple(trans))
    return _trim_labeled(N, labels)


def _trim_labeled(N: TwoTapeAutomaton, labels: list):
    trimmed = trim_two_tape(N)
    kept = {name: i for i, name in enumerate(N.states)}
    return trimmed, [labels[kept[name]] for name in trimmed.states]


def erase_general(M: LexTransducer) -> TwoTapeAutomaton:
    return erase_general_labeled(M)[0]


def erase_strong(M: LexTransducer) -> TwoTapeAutomaton:
    """Configuration-pair erasure for strongly functional transducers.

    States are (K, q) with q in the configuration K.  Two copies entering one
    target from the same K never tie on weight, so the weight symbol alone picks
    the survivor.
    """
    from .analysis import check_strongly_functional

    verdict = check_strongly_functional(M)
    if not verdict:
        raise LexFSTError(f"not strongly functional: {verdict.reason}: {verdict.witness}")
    rank = M.weights.rank
    ids: dict = {}
    names: list = []
    config_ids: dict = {}

    def sid(K: frozenset, q: int) -> int:
        key = (K, q)
        if key not in ids:
            ids[key] = len(names)
            ki = config_ids.setdefault(K, len(config_ids))
            names.append(f"{M.states[q]}@{ki}")
        return ids[key]

    K0 = frozenset(M.initial)
    initial = {sid(K0, q) for q in sorted(K0)}
    trans = []
    seen = {K0} if K0 else set()
    todo = deque(seen)
    while todo:
        K = todo.popleft()
        for sym in M.sigma:
            arcs = [t for q in sorted(K) for t in M.out_arcs(q, sym)]
            if not arcs:
                continue
            K2 = frozenset(t.dst for t in arcs)
            if K2 not in seen:
                seen.add(K2)
                todo.append(K2)
            groups: dict = {}
            for t in arcs:
                groups.setdefault(t.dst, []).append(t)
            for target, ts in groups.items():
                low = min(rank[t.weight] for t in ts)
                winners = [t for t in ts if rank[t.weight] == low]
                if len({t.src for t in winners}) > 1 or len({t.output for t in winners}) > 1:
                    raise LexFSTError(f"equal-weight conflict into {M.states[target]!r} on {sym!r}")
                for t in winners:
                    trans.append(TwoTapeTransition(sid(K, t.src), sym, t.output, sid(K2, target)))
    final = {i for (K, q), i in ids.items() if q in M.final}
    N = TwoTapeAutomaton(M.sigma, M.gamma, tuple(names), frozenset(initial), frozenset(final), tuple(trans))
    return trim_two_tape(N)
