from __future__ import annotations

import json

import pytest

from jordec.algebra import Bimodule, BlockPartition, bimodule_to_json
from jordec.exact_linalg import Matrix

ACCEPTANCE_PARTITIONS = [(1, 1), (2, 1), (1, 2), (1, 1, 1), (2, 2), (2, 1, 1), (2, 2, 2)]
BUILTINS = ("natural", "regular", "corner_scalar")

_acceptance_lines: list[str] = []


def record_criterion(number: int, passed: bool, detail: str = "") -> None:
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
    _acceptance_lines.append(line)
    print(line)


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def unimodular(dim: int) -> tuple[Matrix, Matrix]:
    """An integer matrix S with integer inverse: S = U L, U unit upper, L unit lower."""
    u = [[1 if i == j else (1 if j == i + 1 else 0) for j in range(dim)] for i in range(dim)]
    lo = [[1 if i == j else (-1 if i == j + 2 else 0) for j in range(dim)] for i in range(dim)]
    s = Matrix.from_rows(u, dim) @ Matrix.from_rows(lo, dim)
    u_inv = [[(-1) ** (j - i) if j >= i else 0 for j in range(dim)] for i in range(dim)]
    lo_inv = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            if i > j and (i - j) % 2 == 0:
                lo_inv[i][j] = 1
    s_inv = Matrix.from_rows(lo_inv, dim) @ Matrix.from_rows(u_inv, dim)
    assert s @ s_inv == Matrix.identity(dim)
    return s, s_inv


def scrambled(m: Bimodule) -> Bimodule:
    """The same bimodule written in a different (integer) basis."""
    s, s_inv = unimodular(m.dim)
    return Bimodule(m.partition, m.dim,
                    tuple(s_inv @ a @ s for a in m.left),
                    tuple(s_inv @ a @ s for a in m.right), f"scrambled({m.label})")


@pytest.fixture
def write_bimodule(tmp_path):
    def write(m: Bimodule, name: str = "custom.json"):
        path = tmp_path / name
        path.write_text(json.dumps(bimodule_to_json(m)))
        return path
    return write


@pytest.fixture
def p11():
    return BlockPartition((1, 1))
