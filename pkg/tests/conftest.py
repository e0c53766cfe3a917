import pathlib

import pytest

from yulkit.syntax import parse_program

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

# Nested scopes with legal reuse of names across sibling function bodies:
# y and h are each declared twice, x is visible only at the top level, z only
# in the inner block.  Statically safe; executing it just declares x.
SCOPING_SRC = (FIXTURES / "scoping.yul").read_text()

# The same program with names made globally unique.
DISAMBIGUATED_SRC = (FIXTURES / "scoping_disambiguated.yul").read_text()


@pytest.fixture
def scoping_block():
    return parse_program(SCOPING_SRC)


@pytest.fixture
def disambiguated_block():
    return parse_program(DISAMBIGUATED_SRC)


# The acceptance tests append their verdict lines here; echoing them from the
# terminal-summary hook keeps them visible under default output capture.
CRITERION_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.line(line)
