import sys
from pathlib import Path

import pytest

from toucher_isolator.game import apply_move, final_score

sys.path.insert(0, str(Path(__file__).parent))


def naive_value(state):
    """Plain minimax through the public game API, no memo."""
    if state.is_terminal:
        return final_score(state)
    children = [naive_value(apply_move(state, e)) for e in state.legal_moves()]
    return min(children) if state.to_move.name == "TOUCHER" else max(children)


@pytest.fixture
def write_graph_file(tmp_path):
    def make(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return make


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
