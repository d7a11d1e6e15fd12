from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"

# 8x8 worked example: raw intensities and the identifier grid after clustering
A = np.array(
    [
        [139, 108, 108, 108, 108, 108, 108, 121],
        [177, 165, 121, 139, 139, 139, 121, 95],
        [239, 183, 139, 139, 165, 139, 108, 108],
        [225, 165, 121, 165, 165, 151, 108, 108],
        [165, 139, 121, 152, 151, 134, 121, 121],
        [113, 121, 108, 121, 139, 165, 183, 139],
        [108, 90, 95, 134, 121, 121, 165, 151],
        [95, 121, 108, 108, 108, 121, 139, 121],
    ],
    dtype=np.uint8,
)

A_PRIME = np.array(
    [
        [3, 1, 1, 1, 3, 3, 3, 0],
        [2, 2, 1, 3, 2, 2, 0, 3],
        [0, 2, 3, 3, 1, 2, 3, 3],
        [0, 2, 1, 2, 1, 1, 3, 3],
        [3, 3, 0, 3, 3, 1, 2, 2],
        [2, 0, 2, 0, 1, 0, 0, 1],
        [2, 1, 1, 0, 2, 2, 0, 3],
        [1, 0, 2, 2, 2, 2, 1, 2],
    ],
    dtype=np.uint8,
)

# per-block cluster means of the worked example, indexed by identifier
TABLES_A = np.array(
    [[232, 113, 171, 139], [121, 160, 139, 106], [123, 93, 109, 152], [171, 137, 119, 151]],
    dtype=np.uint8,
)

E = [[4, 4, 1, 1, 2, 3, 3, 3], [1, 1, 3, 3, 3, 4, 4, 3]]


def seq(label: str) -> tuple:
    return tuple(int(c) for c in label)


_WORKED_PATTERNS = """
1022 2 2
1133 2 2
2203 2 1
3312 2 2
211 2 0
212 2 2
221 2 1
330 2 1
02 5 2
03 3 1
10 3 1
11 3 0
12 4 0
13 3 0
20 3 0
21 4 1
22 4 0
31 3 1
33 4 1
0 8 4
1 8 1
2 7 3
3 6 2
"""

WORKED_SUPPORT = {seq(r.split()[0]): int(r.split()[1]) for r in _WORKED_PATTERNS.split("\n") if r}
WORKED_PSI_MOD = {seq(r.split()[0]): int(r.split()[2]) for r in _WORKED_PATTERNS.split("\n") if r}


@pytest.fixture
def a_prime_rows():
    return [list(r) for r in A_PRIME]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
