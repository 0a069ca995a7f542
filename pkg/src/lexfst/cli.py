"""Command-line front end.

Exit codes: 0 success or property holds, 1 property fails or input rejected
(a ``witness:`` line is printed), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .core import (
    LexFSTError,
    LexTransducer,
    TwoTapeAutomaton,
    encode_single_tape,
    format_word,
    parse_fst2,
    parse_lexfst,
    serialize_fst2,
    serialize_lexfst,
)


class UsageError(LexFSTError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _header(text: str) -> str:
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            return " ".join(body.split())
    return ""


def load(path: str):
    text = _read(path)
    head = _header(text)
    if head == "lexfst v1":
        return parse_lexfst(text)
    if head == "fst2 v1":
        return parse_fst2(text)
    if head == "pfsa v1":
        from .prob import parse_pfsa

        return parse_pfsa(text)
    raise UsageError(f"{path}: unknown document header {head!r}")


def _load_as(path: str, kind: type, what: str):
    obj = load(path)
    if not isinstance(obj, kind):
        raise UsageError(f"{path}: expected a {what} document")
    return obj


def _split(text: Optional[str]) -> tuple:
    return tuple(text.split()) if text else ()


def _write(path: Optional[str], text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _witness_text(w, states=None) -> str:
    from .analysis import Conflict

    if isinstance(w, Conflict):
        name = (lambda q: states[q]) if states else str
        return (f"q1={name(w.q1)} q2={name(w.q2)} symbol={w.symbol} target={name(w.target)} "
                f"w1={w.w1} w2={w.w2}")
    if isinstance(w, (list, tuple)):
        return " ".join(map(str, w)) if w else "(empty input)"
    return str(w)


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(args, out) -> int:
    obj = load(args.file)
    kind = {LexTransducer: "lexfst", TwoTapeAutomaton: "fst2"}.get(type(obj), "pfsa")
    out.write(f"ok: {kind} with {len(obj.states)} states, {len(obj.transitions)} transitions\n")
    return 0


def cmd_run(args, out) -> int:
    from .evaluate import run

    M = _load_as(args.file, LexTransducer, "lexfst")
    res = run(M, _split(args.input))
    outputs = sorted(format_word(d) for d in res.selected)
    if args.format == "json":
        json.dump({
            "accepted": res.accepted,
            "min_weight": None if res.min_weight is None else list(res.min_weight),
            "selected": [list(d) for d in sorted(res.selected)],
            "quotient": [[list(d), list(b)] for d, b in res.quotient.items()],
        }, out, sort_keys=True)
        out.write("\n")
    elif res.accepted:
        out.write(f"ACCEPT minWeight={format_word(res.min_weight)} outputs: {' '.join(outputs)}\n")
    else:
        out.write("REJECT\n")
    return 0 if res.accepted else 1


def cmd_erase(args, out) -> int:
    from .erase import erase_general, erase_strong

    M = _load_as(args.file, LexTransducer, "lexfst")
    N = erase_general(M) if args.method == "general" else erase_strong(M)
    _write(args.output, serialize_fst2(N), out)
    report = out if args.output not in (None, "-") else sys.stderr
    report.write(
        f"input: {M.n_states} states, {len(M.transitions)} transitions\n"
        f"output: {N.n_states} states, {len(N.transitions)} transitions\n"
    )
    return 0


def cmd_check(args, out) -> int:
    from . import analysis

    obj = load(args.file)
    if args.classify:
        if not isinstance(obj, (LexTransducer, TwoTapeAutomaton)):
            raise UsageError("--classify needs a lexfst or fst2 document")
        rep = analysis.classify(obj)
        flags = {
            "sequential_up_to_input": rep.sequential_up_to_input,
            "epsilon_free_up_to_input": rep.epsilon_free_up_to_input,
            "deterministic_up_to_input": rep.deterministic_up_to_input,
            "single_initial": rep.single_initial,
        }
        if args.format == "json":
            json.dump(flags, out, sort_keys=True)
            out.write("\n")
        else:
            for k, v in flags.items():
                out.write(f"{k}: {'yes' if v else 'no'}\n")
        return 0
    if args.eps_cycles:
        if not isinstance(obj, TwoTapeAutomaton):
            raise UsageError("--eps-cycles needs an fst2 document")
        cycles = analysis.detect_eps_cycles(obj)
        verdict = analysis.Verdict(
            not cycles,
            [obj.states[t.src] for t in cycles[0]] if cycles else None,
            f"{len(cycles)} output-writing epsilon cycle(s)",
        )
        name = "no output-writing epsilon cycles"
    elif args.strong_functional:
        obj = _require(obj, LexTransducer, "--strong-functional", "lexfst")
        verdict = analysis.check_strongly_functional(obj)
        name = "strongly functional"
    else:
        if isinstance(obj, LexTransducer):
            verdict = analysis.check_functional(obj)
        elif isinstance(obj, TwoTapeAutomaton):
            verdict = analysis.check_functional_unweighted(obj)
        else:
            raise UsageError("--functional needs a lexfst or fst2 document")
        name = "functional"
    if args.format == "json":
        json.dump({
            "property": name,
            "holds": verdict.holds,
            "reason": verdict.reason,
            "witness": None if verdict.holds else _witness_text(verdict.witness, obj.states),
        }, out, sort_keys=True)
        out.write("\n")
    else:
        out.write(f"{name}: {'yes' if verdict.holds else 'no'}\n")
        if not verdict.holds:
            out.write(f"reason: {verdict.reason}\n")
            out.write(f"witness: {_witness_text(verdict.witness, obj.states)}\n")
    return 0 if verdict.holds else 1


def _require(obj, kind, flag, what):
    if not isinstance(obj, kind):
        raise UsageError(f"{flag} needs a {what} document")
    return obj


def cmd_gen_family(args, out) -> int:
    from .family import gen_family

    _write(args.output, serialize_lexfst(gen_family(args.n)), out)
    return 0


def cmd_bench(args, out) -> int:
    from dataclasses import asdict

    from .family import bench_family, rows_to_csv

    rows = bench_family(args.min, args.max, jobs=args.jobs)
    text = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text, encoding="utf-8")
    if args.format == "json":
        json.dump([asdict(r) for r in rows], out, sort_keys=True)
        out.write("\n")
    else:
        out.write(text)
    return 0


def cmd_oracle(args, out) -> int:
    from .oracle import oracle_equivalence

    M = _load_as(args.file, LexTransducer, "lexfst")
    against = None
    if args.against:
        against = _load_as(args.against, TwoTapeAutomaton, "fst2")
    res = oracle_equivalence(M, args.max_len, against=against)
    if res.equivalent:
        out.write(f"equivalent on all inputs up to length {args.max_len}\n")
        return 0
    out.write("diverges\n")
    out.write(f"witness: {_witness_text(res.witness)}\n")
    return 1


def cmd_min_dfa(args, out) -> int:
    from .analysis import minimal_dfa_size
    from .core import NFA

    N = _load_as(args.file, TwoTapeAutomaton, "fst2")
    if args.encode:
        A = encode_single_tape(N)
    else:
        if any(t.output for t in N.transitions):
            raise UsageError("transitions write output; use --encode for a two-tape automaton")
        A = NFA(N.sigma, N.n_states, N.initial, N.final,
                tuple((t.src, t.input, t.dst) for t in N.transitions))
    out.write(f"{minimal_dfa_size(A)}\n")
    return 0


def cmd_prob(args, out) -> int:
    from .prob import ProbAutomaton, cond_prob, prob_bracket

    P = _load_as(args.file, ProbAutomaton, "pfsa")
    c = _split(args.input)

    def show(label, br):
        out.write(f"{label}: lower={br.lower} upper={br.upper} "
                  f"(~{float(br.lower):.6f} .. {float(br.upper):.6f})\n")

    show("P(c)", prob_bracket(P, c, args.depth))
    if args.cond_output is not None:
        d = _split(args.cond_output)
        show("P(c,d)", prob_bracket(P, c, args.depth, d))
        show("P(d|c)", cond_prob(P, c, d, args.depth))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lexfst", description="Lexicographic finite-state transducers")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    s = sub.add_parser("validate", help="parse and validate a document")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("run", help="evaluate a lexfst transducer on one input")
    s.add_argument("file")
    s.add_argument("--input", default="", help="space-separated input symbols")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("erase", help="erase weights into an fst2 automaton")
    s.add_argument("file")
    s.add_argument("--method", choices=["general", "strong"], default="general")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_erase)

    s = sub.add_parser("check", help="decide a property")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--strong-functional", action="store_true")
    g.add_argument("--functional", action="store_true")
    g.add_argument("--eps-cycles", action="store_true")
    g.add_argument("--classify", action="store_true")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("gen-family", help="write the exponential-separation transducer")
    s.add_argument("n", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen_family)

    s = sub.add_parser("bench", help="state-blowup benchmark over the family")
    s.add_argument("--min", type=int, default=3)
    s.add_argument("--max", type=int, default=8)
    s.add_argument("--csv")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("oracle", help="compare against brute-force path enumeration")
    s.add_argument("file")
    s.add_argument("--max-len", type=int, default=6)
    s.add_argument("--against", help="fst2 automaton to check instead of the evaluator")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("min-dfa", help="size of the minimal DFA")
    s.add_argument("file")
    s.add_argument("--encode", action="store_true", help="encode x#y onto one tape first")
    s.set_defaults(func=cmd_min_dfa)

    s = sub.add_parser("prob", help="probability brackets for a pfsa automaton")
    s.add_argument("file")
    s.add_argument("--input", default="")
    s.add_argument("--cond-output")
    s.add_argument("--depth", type=int, default=20)
    s.set_defaults(func=cmd_prob)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except LexFSTError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
