from __future__ import annotations

import sys
from pathlib import Path

import pytest

from aidepth.enumerator import ComplexityTable, Horizon, enumerate_programs

sys.path.insert(0, str(Path(__file__).parent))

_TABLES: dict[tuple[int, int], ComplexityTable] = {}


def get_table(k_max: int, t_max: int = 256) -> ComplexityTable:
    key = (k_max, t_max)
    if key not in _TABLES:
        _TABLES[key] = enumerate_programs(Horizon(k_max, t_max))
    return _TABLES[key]


@pytest.fixture(scope="session")
def table2() -> ComplexityTable:
    return get_table(2, 20)


@pytest.fixture(scope="session")
def table3() -> ComplexityTable:
    return get_table(3, 20)


@pytest.fixture(scope="session")
def table5() -> ComplexityTable:
    return get_table(5)


@pytest.fixture(scope="session")
def table6() -> ComplexityTable:
    return get_table(6)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
