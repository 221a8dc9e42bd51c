from __future__ import annotations

import math
from pathlib import Path

import pytest

from nevlab import IsmailValent, TildeIV, elliptic_pair

FIXTURES = Path(__file__).parent / "fixtures"
K_SYM = 1.0 / math.sqrt(2.0)


@pytest.fixture(scope="session")
def pair():
    return elliptic_pair(K_SYM)


@pytest.fixture(scope="session")
def pair_half():
    return elliptic_pair(0.5)


@pytest.fixture(scope="session")
def iv(pair):
    return IsmailValent(pair)


@pytest.fixture(scope="session")
def tilde(pair):
    return TildeIV(pair)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    from tests_acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
