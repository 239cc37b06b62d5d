import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import tiny_game_roots  # noqa: E402


@pytest.fixture(scope="session")
def tiny_tables():
    """Solved tables for every 3x3 state with one king and one pawn per side.

    Keyed by ``"railed"`` and ``"open"``; shared because each solve takes tens of seconds.
    """
    from pushfight.game_solver import solve_table
    return {kind: solve_table(tiny_game_roots(kind == "railed")) for kind in ("railed", "open")}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
