"""Alphabets, automaton types, text formats, the weight order and single-tape encoding.

Words are tuples of symbol tokens; the empty tuple is the empty word.  States are
dense integers; their names are kept only so that text documents round-trip.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

EPS = "-"
SEPARATOR = "#"
_RESERVED_CHARS = re.compile(r"[\s.#:]")

Word = tuple


class LexFSTError(ValueError):
    """Base class for every error raised by this library."""


class ParseError(LexFSTError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


def check_alphabet(tokens: Sequence[str], what: str = "alphabet") -> tuple:
    tokens = tuple(tokens)
    for t in tokens:
        if not isinstance(t, str) or not t:
            raise LexFSTError(f"{what}: symbols must be nonempty strings, got {t!r}")
        if t == EPS:
            raise LexFSTError(f"{what}: '{EPS}' is reserved for the empty word")
        if _RESERVED_CHARS.search(t):
            raise LexFSTError(f"{what}: symbol {t!r} contains whitespace or one of '.', '#', ':'")
    if len(set(tokens)) != len(tokens):
        dup = next(t for t in tokens if tokens.count(t) > 1)
        raise LexFSTError(f"{what}: duplicate symbol {dup!r}")
    return tokens


@dataclass(frozen=True)
class WeightAlphabet:
    """Totally ordered weight symbols, listed in ascending order."""

    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", check_alphabet(self.symbols, "W"))

    @cached_property
    def rank(self) -> dict:
        return {s: i for i, s in enumerate(self.symbols)}

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, sym):
        return sym in self.rank

    def key(self, b: Sequence[str]) -> tuple:
        """Sort key realising the suffix-dominant order for words of one length."""
        rank = self.rank
        return tuple(rank[s] for s in reversed(b))


def cmp_weights(weights: WeightAlphabet, b1: Sequence[str], b2: Sequence[str]) -> int:
    """Compare two weight words of equal length; returns -1, 0 or 1.

    The last symbol dominates; ties fall back on the prefixes.
    """
    if len(b1) != len(b2):
        raise LexFSTError(
            f"weight words of different lengths compared ({len(b1)} vs {len(b2)})"
        )
    rank = weights.rank
    for s1, s2 in zip(reversed(b1), reversed(b2)):
        r1, r2 = rank[s1], rank[s2]
        if r1 != r2:
            return -1 if r1 < r2 else 1
    return 0


# ---------------------------------------------------------------------------
# automaton types


@dataclass(frozen=True, order=True)
class LexTransition:
    src: int
    input: str
    weight: str
    output: tuple
    dst: int


@dataclass(frozen=True, order=True)
class TwoTapeTransition:
    src: int
    input: Optional[str]  # None is the empty input
    output: tuple
    dst: int


def _dedup(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


def _check_states(names, initial, final) -> tuple:
    names = tuple(names)
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise LexFSTError(f"duplicate state name {dup!r}")
    n = len(names)
    for q in initial | final:
        if not 0 <= q < n:
            raise LexFSTError(f"state id {q} out of range")
    return names


@dataclass(frozen=True)
class LexTransducer:
    """Lexicographic transducer: every transition reads one input symbol,
    carries one weight symbol and writes an output word."""

    weights: WeightAlphabet
    sigma: tuple
    gamma: tuple
    states: tuple  # state names; the id of a state is its index
    initial: frozenset
    final: frozenset
    transitions: tuple = ()

    def __post_init__(self):
        if not isinstance(self.weights, WeightAlphabet):
            object.__setattr__(self, "weights", WeightAlphabet(tuple(self.weights)))
        object.__setattr__(self, "sigma", check_alphabet(self.sigma, "Sigma"))
        object.__setattr__(self, "gamma", check_alphabet(self.gamma, "Gamma"))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        names = _check_states(self.states, self.initial, self.final)
        object.__setattr__(self, "states", names)
        trans = _dedup(
            t if isinstance(t, LexTransition) else LexTransition(t[0], t[1], t[2], tuple(t[3]), t[4])
            for t in self.transitions
        )
        sig, gam, n = set(self.sigma), set(self.gamma), len(names)
        for t in trans:
            if not (0 <= t.src < n and 0 <= t.dst < n):
                raise LexFSTError(f"transition {t} has an undeclared state")
            if t.input not in sig:
                raise LexFSTError(f"undeclared input symbol {t.input!r}")
            if t.weight not in self.weights:
                raise LexFSTError(f"undeclared weight symbol {t.weight!r}")
            for g in t.output:
                if g not in gam:
                    raise LexFSTError(f"undeclared output symbol {g!r}")
        object.__setattr__(self, "transitions", trans)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @cached_property
    def arcs(self) -> dict:
        """(src, input) -> transitions, in declaration order."""
        out: dict = {}
        for t in self.transitions:
            out.setdefault((t.src, t.input), []).append(t)
        return out

    def out_arcs(self, q: int, sym: str) -> list:
        return self.arcs.get((q, sym), [])

    def state_id(self, name: str) -> int:
        return self.states.index(name)


@dataclass(frozen=True)
class TwoTapeAutomaton:
    """Unweighted transducer over input words and output words."""

    sigma: tuple
    gamma: tuple
    states: tuple
    initial: frozenset
    final: frozenset
    transitions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sigma", check_alphabet(self.sigma, "Sigma"))
        object.__setattr__(self, "gamma", check_alphabet(self.gamma, "Gamma"))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        names = _check_states(self.states, self.initial, self.final)
        object.__setattr__(self, "states", names)
        trans = _dedup(
            t if isinstance(t, TwoTapeTransition) else TwoTapeTransition(t[0], t[1], tuple(t[2]), t[3])
            for t in self.transitions
        )
        sig, gam, n = set(self.sigma), set(self.gamma), len(names)
        for t in trans:
            if not (0 <= t.src < n and 0 <= t.dst < n):
                raise LexFSTError(f"transition {t} has an undeclared state")
            if t.input is not None and t.input not in sig:
                raise LexFSTError(f"undeclared input symbol {t.input!r}")
            for g in t.output:
                if g not in gam:
                    raise LexFSTError(f"undeclared output symbol {g!r}")
        object.__setattr__(self, "transitions", trans)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @cached_property
    def arcs(self) -> dict:
        out: dict = {}
        for t in self.transitions:
            out.setdefault((t.src, t.input), []).append(t)
        return out

    def out_arcs(self, q: int, sym: Optional[str]) -> list:
        return self.arcs.get((q, sym), [])

    @property
    def is_input_eps_free(self) -> bool:
        return all(t.input is not None for t in self.transitions)


@dataclass(frozen=True)
class NFA:
    """Single-tape automaton; a None symbol is an epsilon move."""

    alphabet: tuple
    n_states: int
    initial: frozenset
    final: frozenset
    transitions: tuple = ()  # (src, symbol, dst)

    def __post_init__(self):
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        object.__setattr__(self, "transitions", _dedup(tuple(t) for t in self.transitions))
        syms = set(self.alphabet)
        for q in self.initial | self.final:
            if not 0 <= q < self.n_states:
                raise LexFSTError(f"state id {q} out of range")
        for s, a, d in self.transitions:
            if not (0 <= s < self.n_states and 0 <= d < self.n_states):
                raise LexFSTError(f"NFA transition {(s, a, d)} has an undeclared state")
            if a is not None and a not in syms:
                raise LexFSTError(f"NFA symbol {a!r} not in alphabet")

    def accepts(self, word: Sequence[str]) -> bool:
        succ: dict = {}
        for s, a, d in self.transitions:
            succ.setdefault((s, a), []).append(d)

        def closure(states):
            stack, seen = list(states), set(states)
            while stack:
                q = stack.pop()
                for r in succ.get((q, None), ()):
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
            return seen

        cur = closure(self.initial)
        for a in word:
            cur = closure({r for q in cur for r in succ.get((q, a), ())})
        return bool(cur & self.final)


def reachable(starts: Iterable[int], edges: Iterable[tuple]) -> set:
    """States reachable from `starts` along (src, dst) edges."""
    adj: dict = {}
    for s, d in edges:
        adj.setdefault(s, []).append(d)
    seen = set(starts)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for r in adj.get(q, ()):
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return seen


def trim_two_tape(N: TwoTapeAutomaton) -> TwoTapeAutomaton:
    """Drop states that are not both accessible and co-accessible; renumbers densely."""
    edges = [(t.src, t.dst) for t in N.transitions]
    acc = reachable(N.initial, edges)
    coacc = reachable(N.final, [(d, s) for s, d in edges])
    keep = sorted(acc & coacc)
    new = {q: i for i, q in enumerate(keep)}
    return TwoTapeAutomaton(
        N.sigma,
        N.gamma,
        tuple(N.states[q] for q in keep),
        frozenset(new[q] for q in N.initial if q in new),
        frozenset(new[q] for q in N.final if q in new),
        tuple(
            TwoTapeTransition(new[t.src], t.input, t.output, new[t.dst])
            for t in N.transitions
            if t.src in new and t.dst in new
        ),
    )


# ---------------------------------------------------------------------------
# text formats


@dataclass
class _Line:
    lineno: int
    key: str
    key_col: int
    tokens: list = field(default_factory=list)  # (token, column)


def _read_document(text: str, header: str) -> list:
    lines: list = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]
        if not seen_header:
            if " ".join(t for t, _ in toks) != header:
                raise ParseError(f"expected header '{header}'", lineno, toks[0][1])
            seen_header = True
            continue
        first, col = toks[0]
        if ":" not in first:
            raise ParseError(f"expected 'KEY:' at start of line, got {first!r}", lineno, col)
        key, rest = first.split(":", 1)
        toks = toks[1:]
        if rest:
            toks.insert(0, (rest, col + len(key) + 1))
        lines.append(_Line(lineno, key, col, toks))
    if not seen_header:
        raise ParseError(f"empty document; expected header '{header}'", 1, 1)
    return lines


class _Decls:
    """Collects the declaration lines of a document and resolves symbols."""

    def __init__(self, lines: list, allowed: set, required: set):
        self.decl: dict = {}
        self.trans: list = []
        for ln in lines:
            if ln.key == "T":
                self.trans.append(ln)
            elif ln.key in allowed:
                if ln.key in self.decl:
                    raise ParseError(f"duplicate '{ln.key}:' declaration", ln.lineno, ln.key_col)
                self.decl[ln.key] = ln
            else:
                raise ParseError(f"unknown declaration '{ln.key}:'", ln.lineno, ln.key_col)
        for key in sorted(required):
            if key not in self.decl:
                raise ParseError(f"missing '{key}:' declaration")

    def tokens(self, key: str) -> list:
        ln = self.decl.get(key)
        return [] if ln is None else [t for t, _ in ln.tokens]

    def alphabet(self, key: str, what: str) -> tuple:
        ln = self.decl.get(key)
        if ln is None:
            return ()
        try:
            return check_alphabet([t for t, _ in ln.tokens], what)
        except LexFSTError as e:
            raise ParseError(str(e), ln.lineno, ln.key_col) from None

    def states(self) -> tuple:
        ln = self.decl["Q"]
        names: list = []
        for tok, col in ln.tokens:
            if tok in names:
                raise ParseError(f"duplicate state name {tok!r}", ln.lineno, col)
            if tok == EPS:
                raise ParseError("'-' is not a valid state name", ln.lineno, col)
            names.append(tok)
        return tuple(names)

    def state_set(self, key: str, index: dict) -> frozenset:
        ln = self.decl.get(key)
        if ln is None:
            return frozenset()
        out = set()
        for tok, col in ln.tokens:
            if tok not in index:
                raise ParseError(f"undeclared state {tok!r}", ln.lineno, col)
            out.add(index[tok])
        return frozenset(out)


def _state(tok, index, ln) -> int:
    name, col = tok
    if name not in index:
        raise ParseError(f"undeclared state {name!r}", ln.lineno, col)
    return index[name]


def _symbol(tok, alphabet, what, ln) -> str:
    name, col = tok
    if name not in alphabet:
        raise ParseError(f"undeclared {what} symbol {name!r}", ln.lineno, col)
    return name


def _out_word(tok, alphabet, ln, what="output") -> tuple:
    text, col = tok
    if text == EPS:
        return ()
    word = tuple(text.split("."))
    for s in word:
        if s not in alphabet:
            raise ParseError(f"undeclared {what} symbol {s!r}", ln.lineno, col)
    return word


def format_word(word: Sequence[str]) -> str:
    return ".".join(word) if word else EPS


def parse_lexfst(text: str) -> LexTransducer:
    lines = _read_document(text, "lexfst v1")
    d = _Decls(lines, {"W", "Sigma", "Gamma", "Q", "I", "F"}, {"W", "Sigma", "Q"})
    weights = WeightAlphabet(d.alphabet("W", "W"))
    sigma, gamma = d.alphabet("Sigma", "Sigma"), d.alphabet("Gamma", "Gamma")
    names = d.states()
    index = {n: i for i, n in enumerate(names)}
    initial, final = d.state_set("I", index), d.state_set("F", index)
    wset, sset, gset = set(weights.symbols), set(sigma), set(gamma)
    trans = []
    for ln in d.trans:
        toks = ln.tokens
        if len(toks) == 4:
            raise ParseError("transition with missing weight", ln.lineno, ln.key_col)
        if len(toks) != 5:
            raise ParseError(
                f"transition needs 5 fields (src input weight output dst), got {len(toks)}",
                ln.lineno, ln.key_col,
            )
        trans.append(LexTransition(
            _state(toks[0], index, ln),
            _symbol(toks[1], sset, "input", ln),
            _symbol(toks[2], wset, "weight", ln),
            _out_word(toks[3], gset, ln),
            _state(toks[4], index, ln),
        ))
    return LexTransducer(weights, sigma, gamma, names, initial, final, tuple(trans))


def parse_fst2(text: str) -> TwoTapeAutomaton:
    lines = _read_document(text, "fst2 v1")
    d = _Decls(lines, {"Sigma", "Gamma", "Q", "I", "F"}, {"Sigma", "Q"})
    sigma, gamma = d.alphabet("Sigma", "Sigma"), d.alphabet("Gamma", "Gamma")
    names = d.states()
    index = {n: i for i, n in enumerate(names)}
    initial, final = d.state_set("I", index), d.state_set("F", index)
    sset, gset = set(sigma), set(gamma)
    trans = []
    for ln in d.trans:
        toks = ln.tokens
        if len(toks) != 4:
            raise ParseError(
                f"transition needs 4 fields (src input output dst), got {len(toks)}",
                ln.lineno, ln.key_col,
            )
        inp = None if toks[1][0] == EPS else _symbol(toks[1], sset, "input", ln)
        trans.append(TwoTapeTransition(
            _state(toks[0], index, ln), inp, _out_word(toks[2], gset, ln), _state(toks[3], index, ln)
        ))
    return TwoTapeAutomaton(sigma, gamma, names, initial, final, tuple(trans))


def _names(states, ids) -> str:
    return " ".join(states[q] for q in sorted(ids))


def serialize_lexfst(M: LexTransducer) -> str:
    out = [
        "lexfst v1",
        "W: " + " ".join(M.weights.symbols),
        "Sigma: " + " ".join(M.sigma),
        "Gamma: " + " ".join(M.gamma),
        "Q: " + " ".join(M.states),
        "I: " + _names(M.states, M.initial),
        "F: " + _names(M.states, M.final),
    ]
    for t in M.transitions:
        out.append(
            f"T: {M.states[t.src]} {t.input} {t.weight} {format_word(t.output)} {M.states[t.dst]}"
        )
    return "\n".join(line.rstrip() for line in out) + "\n"


def serialize_fst2(N: TwoTapeAutomaton) -> str:
    out = [
        "fst2 v1",
        "Sigma: " + " ".join(N.sigma),
        "Gamma: " + " ".join(N.gamma),
        "Q: " + " ".join(N.states),
        "I: " + _names(N.states, N.initial),
        "F: " + _names(N.states, N.final),
    ]
    for t in N.transitions:
        inp = EPS if t.input is None else t.input
        out.append(f"T: {N.states[t.src]} {inp} {format_word(t.output)} {N.states[t.dst]}")
    return "\n".join(line.rstrip() for line in out) + "\n"


# ---------------------------------------------------------------------------
# single-tape encoding


def _has_output_cycle(N: TwoTapeAutomaton) -> bool:
    """True if some cycle of the trim automaton writes a nonempty output."""
    import networkx as nx

    g = nx.DiGraph()
    g.add_edges_from((t.src, t.dst) for t in N.transitions)
    comp = {}
    for i, scc in enumerate(nx.strongly_connected_components(g)):
        for q in scc:
            comp[q] = i
    for t in N.transitions:
        if t.output and comp[t.src] == comp[t.dst]:
            return True
    return False


def encode_single_tape(N: TwoTapeAutomaton) -> NFA:
    """Single-tape NFA accepting x # y for every pair (x, y) accepted by `N`.

    The output written along a path is buffered in the state and spelled out
    after the separator, so the output written by the trim part of `N` must be
    bounded (no cycle may write output).  Input and output symbols that clash
    are renamed with 'i:' and 'o:' prefixes.
    """
    if not N.is_input_eps_free:
        raise LexFSTError("single-tape encoding needs an automaton without epsilon inputs")
    N = trim_two_tape(N)
    if _has_output_cycle(N):
        raise LexFSTError(
            "a cycle writes output; x#y is not a regular language for this relation"
        )
    if set(N.sigma) & set(N.gamma):
        in_name = {s: "i:" + s for s in N.sigma}
        out_name = {s: "o:" + s for s in N.gamma}
    else:
        in_name = {s: s for s in N.sigma}
        out_name = {s: s for s in N.gamma}
    alphabet = tuple(in_name[s] for s in N.sigma) + (SEPARATOR,) + tuple(out_name[s] for s in N.gamma)

    ids: dict = {}
    trans: list = []

    def sid(key) -> int:
        if key not in ids:
            ids[key] = len(ids)
            todo.append(key)
        return ids[key]

    by_src: dict = {}
    for t in N.transitions:
        by_src.setdefault(t.src, []).append(t)
    todo: list = []
    initial = {sid(("in", q, ())) for q in sorted(N.initial)}
    final = set()
    while todo:
        key = todo.pop()
        src = ids[key]
        if key[0] == "in":
            _, q, buf = key
            for t in by_src.get(q, ()):
                trans.append((src, in_name[t.input], sid(("in", t.dst, buf + t.output))))
            if q in N.final:
                trans.append((src, SEPARATOR, sid(("out", buf))))
        else:
            _, rest = key
            if rest:
                trans.append((src, out_name[rest[0]], sid(("out", rest[1:]))))
            else:
                final.add(src)
    return NFA(alphabet, len(ids), frozenset(initial), frozenset(final), tuple(trans))


def words(alphabet: Sequence[str], max_len: int, min_len: int = 0) -> Iterator[tuple]:
    """All words over `alphabet` with min_len <= length <= max_len, shortest first."""
    from itertools import product

    for n in range(min_len, max_len + 1):
        yield from product(alphabet, repeat=n)
