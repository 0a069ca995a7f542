"""Lexicographic finite-state transducers."""
from .core import (
    NFA,
    LexFSTError,
    LexTransducer,
    LexTransition,
    ParseError,
    TwoTapeAutomaton,
    TwoTapeTransition,
    WeightAlphabet,
    cmp_weights,
    encode_single_tape,
    parse_fst2,
    parse_lexfst,
    serialize_fst2,
    serialize_lexfst,
)
from .evaluate import RunResult, Superposition, quotient, run, step_superposition
from .erase import OrderFormula, erase_general, erase_strong, successor_formula
from .analysis import (
    check_functional,
    check_functional_unweighted,
    check_strongly_functional,
    classify,
    detect_eps_cycles,
    eval_two_tape,
    find_conflicts,
    minimal_dfa_size,
)
from .family import bench_family, gen_family
from .oracle import enumerate_accepting, oracle_equivalence, oracle_run

__version__ = "0.1.0"
