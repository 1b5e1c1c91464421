import itertools

import pytest

from shadowprice import params_from_theta, solve

THETAS = (0.1, 0.3, 0.5, 0.7, 0.9, 1.5, 2.0, 3.0)
LAMS = (0.001, 0.01, 0.05, 0.1)
MATRIX = tuple(itertools.product(THETAS, LAMS))
SIGMA = 0.4


def cell_id(cell):
    return f"theta={cell[0]}-lam={cell[1]}"


@pytest.fixture(scope="session")
def solutions():
    """Solutions for every matrix cell, keyed by ``(theta, lam)``."""
    return {cell: solve(params_from_theta(cell[0], cell[1], SIGMA)) for cell in MATRIX}


# --- acceptance report ----------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def report(number: int, ok: bool, detail: str) -> None:
    """Record the one-line verdict for an acceptance criterion."""
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
