from pathlib import Path

import pytest

from lexfst.core import parse_fst2, parse_lexfst

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES = []


def load_lex(name):
    return parse_lexfst((DATA / name).read_text())


def load_fst2(name):
    return parse_fst2((DATA / name).read_text())


@pytest.fixture
def t1():
    return load_lex("t1.lfst")


@pytest.fixture
def t1_tie():
    return load_lex("t1_tie.lfst")


@pytest.fixture
def t2():
    return load_lex("t2.lfst")


def w(text):
    """'x x' -> ('x', 'x')"""
    return tuple(text.split())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
