from __future__ import annotations

from fractions import Fraction

import pytest

from zigzagip import oracles as orc
from zigzagip import weakring as wr


@pytest.fixture
def naturals():
    return wr.NaturalSemiring()


@pytest.fixture
def matrices():
    return wr.MatrixSemiring(2)


@pytest.fixture
def endomaps():
    return wr.EndomapSemiring(3)


@pytest.fixture
def mult5(naturals):
    """Base oracle on the naturals that holds exactly on multiples of 5."""
    system = orc.RotationSystem(Fraction(1, 5), Fraction(0), Fraction(1, 5), orc.IDENTITY)
    return orc.base_oracle(naturals, system)


@pytest.fixture
def matrix_mod3(matrices):
    """Matrix-instance base oracle: entry sum divisible by 3."""
    system = orc.RotationSystem(Fraction(1, 3), Fraction(0), Fraction(1, 3), orc.ENTRY_SUM)
    return orc.base_oracle(matrices, system)


# Frozen non-commuting pair used across the matrix tests.
LOWER = wr.matrix([[1, 0], [1, 1]])
UPPER = wr.matrix([[1, 1], [0, 1]])


@pytest.fixture
def lower():
    return LOWER


@pytest.fixture
def upper():
    return UPPER


# One summary line per acceptance criterion, echoed after the test run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion_line():
    def record(number: int, ok: bool, elapsed: float, bound: float) -> None:
        verdict = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append(
            f"criterion {number:02d}: {verdict}  ({elapsed:.2f}s, bound {bound:g}s)"
        )

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
