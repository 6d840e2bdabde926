from fractions import Fraction

import pytest

from kakeya.entropy import JointDist

H = Fraction(1, 2)
Q = Fraction(1, 4)


@pytest.fixture
def fair_bit():
    return JointDist({(0,): H, (1,): H})


@pytest.fixture
def independent_bits():
    return JointDist({(a, b): Q for a in (0, 1) for b in (0, 1)})


@pytest.fixture
def equal_bits():
    return JointDist({(0, 0): H, (1, 1): H})


@pytest.fixture
def digit_witness():
    return JointDist({(-(y % 2), y): Q for y in range(4)})


@pytest.fixture
def skewed_pair():
    return JointDist({(0, 0): H, (0, 1): Q, (1, 1): Q})


# Acceptance lines are collected by tests/test_acceptance.py and echoed at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
