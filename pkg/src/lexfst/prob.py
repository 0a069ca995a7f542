"""Interval probabilistic semiring over exact rationals.

A weight word b = k1 k2 ... names the subinterval of (0, 1) obtained by
composing the partition cells k1, k2, ... as affine maps; its length is the
probability that a stream of independent draws starts with b.  Probabilities
of output words are computed as depth-limited brackets [lower, upper].
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (
    LexFSTError,
    ParseError,
    _Decls,
    _out_word,
    _read_document,
    _state,
    check_alphabet,
    format_word,
    reachable,
)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not 0 <= lo < hi <= 1:
            raise LexFSTError(f"not a subinterval of (0,1): ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __mul__(self, other: "Interval") -> "Interval":
        return interval_mul(self, other)

    @property
    def norm(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self):
        return f"({self.lo}, {self.hi})"


UNIT = Interval(Fraction(0), Fraction(1))


def interval_mul(x: Interval, y: Interval) -> Interval:
    """Compose: y re-expressed inside x, taking x as the new unit interval."""
    width = x.hi - x.lo
    return Interval(x.lo + width * y.lo, x.lo + width * y.hi)


def interval_norm(x: Interval) -> Fraction:
    return x.hi - x.lo


def prefix_free_reduce(B: Iterable[Sequence]) -> set:
    """Drop every word that has a proper prefix in B."""
    B = {tuple(b) for b in B}
    return {b for b in B if not any(b[:i] in B for i in range(len(b)))}


def uniform_cuts(n: int) -> tuple:
    if n < 1:
        raise LexFSTError("need at least one interval")
    return tuple(Fraction(i, n) for i in range(n + 1))


@dataclass(frozen=True)
class ProbTransition:
    src: int
    k: int
    output: tuple
    output2: tuple
    dst: int


@dataclass(frozen=True)
class ProbAutomaton:
    """Deterministic in the weight tape: at most one transition per (state, cell).

    `delta` is the alphabet of the optional second output tape.
    """

    cuts: tuple
    gamma: tuple
    states: tuple
    initial: int
    final: frozenset
    transitions: tuple = ()
    delta: tuple = ()

    def __post_init__(self):
        cuts = tuple(Fraction(c) for c in self.cuts)
        if len(cuts) < 2 or cuts[0] != 0 or cuts[-1] != 1 or any(
            a >= b for a, b in zip(cuts, cuts[1:])
        ):
            raise LexFSTError("cuts must ascend strictly from 0 to 1")
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "gamma", check_alphabet(self.gamma, "Gamma"))
        object.__setattr__(self, "delta", check_alphabet(self.delta, "Delta"))
        object.__setattr__(self, "final", frozenset(self.final))
        n = len(self.states)
        if not 0 <= self.initial < n or any(not 0 <= q < n for q in self.final):
            raise LexFSTError("initial/final state out of range")
        trans = tuple(
            t if isinstance(t, ProbTransition) else ProbTransition(*t) for t in self.transitions
        )
        seen = set()
        for t in trans:
            if not (0 <= t.src < n and 0 <= t.dst < n):
                raise LexFSTError(f"transition {t} has an undeclared state")
            if not 1 <= t.k < len(cuts):
                raise LexFSTError(f"interval index {t.k} out of range 1..{len(cuts) - 1}")
            if (t.src, t.k) in seen:
                raise LexFSTError(
                    f"two transitions from {self.states[t.src]!r} on interval {t.k}"
                )
            seen.add((t.src, t.k))
            if any(g not in self.gamma for g in t.output):
                raise LexFSTError(f"undeclared output symbol in {t.output}")
            if any(g not in self.delta for g in t.output2):
                raise LexFSTError(f"undeclared second-tape symbol in {t.output2}")
        object.__setattr__(self, "transitions", trans)

    @property
    def n_intervals(self) -> int:
        return len(self.cuts) - 1

    def interval(self, k: int) -> Interval:
        return Interval(self.cuts[k - 1], self.cuts[k])

    def out_arcs(self, q: int) -> list:
        return [t for t in self.transitions if t.src == q]


@dataclass(frozen=True)
class ProbBracket:
    lower: Fraction
    upper: Fraction
    depth: int

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise LexFSTError(f"invalid bracket [{self.lower}, {self.upper}]")

    @property
    def gap(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, other: "ProbBracket") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper


def _word(c, alphabet, what) -> tuple:
    c = tuple(c)
    for s in c:
        if s not in alphabet:
            raise LexFSTError(f"{what} symbol {s!r} not in {what}")
    return c


def prob_bracket(
    P: ProbAutomaton, c: Sequence[str], depth: int, d: Optional[Sequence[str]] = None
) -> ProbBracket:
    """Bracket P(c), or P(c, d) when the second-tape word `d` is given.

    Weight words up to length `depth` are explored.  `lower` sums the measure of
    the minimal weight words whose path accepts with output exactly c;
    `upper` adds the measure of depth-limit prefixes that can still get there.
    With `d`, only the minimal words whose second tape reads d at that point
    count, so P(c) is the sum of P(c, d) over all d.
    """
    if depth < 0:
        raise LexFSTError("depth must be ≥ 0")
    c = _word(c, P.gamma, "Gamma")
    d = None if d is None else _word(d, P.delta, "Delta")
    arcs = {q: P.out_arcs(q) for q in range(len(P.states))}

    def advance(i, j, t):
        """Positions after matching t's outputs against c and d, or None on mismatch."""
        ni = i + len(t.output)
        if c[i:ni] != t.output:
            return None
        if d is None:
            return ni, j
        nj = j + len(t.output2)
        if d[j:nj] != t.output2:
            return None
        return ni, nj

    def stops(node):
        # the first acceptance with output c ends the weight word
        return node[0] in P.final and node[1] == len(c)

    goal = {(q, len(c), len(d) if d is not None else 0) for q in P.final}
    edges = []
    nodes = {(P.initial, 0, 0)}
    todo = [(P.initial, 0, 0)]
    while todo:
        q, i, j = todo.pop()
        if stops((q, i, j)):
            continue
        for t in arcs[q]:
            nxt = advance(i, j, t)
            if nxt is None:
                continue
            node = (t.dst,) + nxt
            edges.append(((q, i, j), node))
            if node not in nodes:
                nodes.add(node)
                todo.append(node)
    alive = reachable(goal & nodes, [(b, a) for a, b in edges])

    # weight words are disjoint events, so masses reaching one product state add up
    lower = Fraction(0)
    live = Fraction(0)
    level = {(P.initial, 0, 0): Fraction(1)}
    for n in range(depth + 1):
        nxt_level: dict = {}
        for node, mass in sorted(level.items()):
            if node not in alive:
                continue
            if stops(node):
                lower += mass if node in goal else 0
                continue
            if n == depth:
                live += mass
                continue
            q, i, j = node
            for t in arcs[q]:
                nxt = advance(i, j, t)
                if nxt is not None:
                    key = (t.dst,) + nxt
                    nxt_level[key] = nxt_level.get(key, 0) + mass * P.interval(t.k).norm
        level = nxt_level
    return ProbBracket(lower, lower + live, depth)


def cond_prob(P: ProbAutomaton, c, d, depth: int) -> ProbBracket:
    """Bracket of P(d | c) from the brackets of P(c, d) and P(c)."""
    pc = prob_bracket(P, c, depth)
    pcd = prob_bracket(P, c, depth, d)
    if pc.upper == 0:
        raise LexFSTError("conditioning on null event")
    lo = pcd.lower / pc.upper
    if pcd.upper == 0:
        hi = Fraction(0)
    elif pc.lower == 0:
        hi = Fraction(1)
    else:
        hi = min(Fraction(1), pcd.upper / pc.lower)
    return ProbBracket(lo, hi, depth)


def second_tape_outputs(P: ProbAutomaton, c: Sequence[str], depth: int) -> set:
    """Second-tape words written by accepting paths of length ≤ depth with first-tape output c."""
    c = tuple(c)
    found = set()
    stack = [(P.initial, (), (), 0)]
    while stack:
        q, out, out2, n = stack.pop()
        if c[: len(out)] != out:
            continue
        if q in P.final and out == c:
            found.add(out2)
            continue
        if n < depth:
            for t in P.out_arcs(q):
                stack.append((t.dst, out + t.output, out2 + t.output2, n + 1))
    return found


# ---------------------------------------------------------------------------
# pfsa v1 text format


def _fraction(tok, ln) -> Fraction:
    text, col = tok
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not an exact rational: {text!r}", ln.lineno, col) from None


def parse_pfsa(text: str) -> ProbAutomaton:
    lines = _read_document(text, "pfsa v1")
    d = _Decls(lines, {"cuts", "N", "Gamma", "Delta", "Q", "I", "F"}, {"Q", "I"})
    if ("cuts" in d.decl) == ("N" in d.decl):
        raise ParseError("exactly one of 'cuts:' or 'N:' is required")
    if "cuts" in d.decl:
        ln = d.decl["cuts"]
        cuts = tuple(_fraction(t, ln) for t in ln.tokens)
    else:
        ln = d.decl["N"]
        if len(ln.tokens) != 1 or not ln.tokens[0][0].isdigit():
            raise ParseError("'N:' takes one positive integer", ln.lineno, ln.key_col)
        cuts = uniform_cuts(int(ln.tokens[0][0]))
    gamma, delta = d.alphabet("Gamma", "Gamma"), d.alphabet("Delta", "Delta")
    names = d.states()
    index = {n: i for i, n in enumerate(names)}
    init = d.state_set("I", index)
    if len(init) != 1:
        ln = d.decl["I"]
        raise ParseError("exactly one initial state is required", ln.lineno, ln.key_col)
    final = d.state_set("F", index)
    gset, dset = set(gamma), set(delta)
    two = "Delta" in d.decl
    trans = []
    for ln in d.trans:
        toks = ln.tokens
        want = 5 if two else 4
        if len(toks) != want:
            raise ParseError(f"transition needs {want} fields, got {len(toks)}", ln.lineno, ln.key_col)
        k_text, k_col = toks[1]
        if not k_text.isdigit() or not 1 <= int(k_text) < len(cuts):
            raise ParseError(f"interval index must be in 1..{len(cuts) - 1}", ln.lineno, k_col)
        out2 = _out_word(toks[3], dset, ln, "second-tape") if two else ()
        trans.append(ProbTransition(
            _state(toks[0], index, ln), int(k_text), _out_word(toks[2], gset, ln), out2,
            _state(toks[-1], index, ln),
        ))
    try:
        return ProbAutomaton(cuts, gamma, names, next(iter(init)), final, tuple(trans), delta)
    except LexFSTError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e)) from None


def serialize_pfsa(P: ProbAutomaton) -> str:
    out = [
        "pfsa v1",
        "cuts: " + " ".join(str(c) for c in P.cuts),
        "Gamma: " + " ".join(P.gamma),
    ]
    if P.delta:
        out.append("Delta: " + " ".join(P.delta))
    out += [
        "Q: " + " ".join(P.states),
        "I: " + P.states[P.initial],
        "F: " + " ".join(P.states[q] for q in sorted(P.final)),
    ]
    for t in P.transitions:
        fields = [P.states[t.src], str(t.k), format_word(t.output)]
        if P.delta:
            fields.append(format_word(t.output2))
        fields.append(P.states[t.dst])
        out.append("T: " + " ".join(fields))
    return "\n".join(line.rstrip() for line in out) + "\n"

