import pytest

from toucher_isolator.game import final_score, new_game
from toucher_isolator.generators import cycle, path, star
from toucher_isolator.graph import Claim, build_graph
from toucher_isolator.solver import Solver, best_response_score
from toucher_isolator.strategies import (
    GreedyPlayer,
    LemmaIsolator,
    OptimalPlayer,
    RandomPlayer,
    StrategyError,
    TheoremIsolator,
    baseline_toucher_move,
    is_base_case,
    select_case,
    simulate,
    strategy_from_name,
)


def first_move(strategy, state):
    e, _ = strategy.move(state, strategy.start(state))
    return e


def test_lemma_case1():
    assert first_move(LemmaIsolator(), new_game(path(4), "nlit")) == 1


def test_lemma_case2():
    assert first_move(LemmaIsolator(), new_game(path(6), "nlit")) == 2


def test_lemma_case4():
    # center 0 with leaves 1, 2 and the twig 0-3-4
    g = build_graph([(0, 1), (0, 2), (0, 3), (3, 4)], 5)
    assert select_case(g)[0] == 4
    assert first_move(LemmaIsolator(), new_game(g, "nlit")) == 2


def test_lemma_case3_and_5():
    branch = build_graph([(0, 2), (2, 3), (3, 1), (0, 4), (0, 5), (1, 6), (1, 7)], 8)
    assert select_case(branch)[0] == 3
    twig = build_graph([(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)], 6)
    assert select_case(twig)[0] == 5


def test_base_case():
    assert is_base_case(star(5))
    assert not is_base_case(path(4))


def test_theorem_star():
    s = new_game(star(4)).play(0)
    assert first_move(TheoremIsolator(), s) == 1


def test_theorem_path():
    s = new_game(path(4)).play(1)
    assert first_move(TheoremIsolator(), s) == 0


def test_theorem_handoff():
    iso = TheoremIsolator(check=True)
    s = new_game(path(6))
    mem = iso.start(s)
    s = s.play(0)
    e, mem = iso.move(s, mem)
    assert e == 4 and mem.phase == 1
    s = s.play(e).play(3)
    # both meta-leaf edges now belong to Toucher
    e, mem = iso.move(s, mem)
    assert mem.phase == 2 and mem.handoff is not None
    r, l1, isolated = mem.handoff
    assert r + 1 >= l1 and isolated == 1
    assert s.graph.claims[e] == Claim.UNCLAIMED


def test_theorem_requires_tree():
    with pytest.raises(StrategyError):
        TheoremIsolator().start(new_game(cycle(5)))


def test_lemma_strategy_checked_run():
    g = build_graph([(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6), (6, 7)], 8)
    assert best_response_score(g, "nlit", LemmaIsolator(check=True), Claim.ISOLATOR) >= 0


def test_baselines():
    assert baseline_toucher_move(new_game(path(5)), "greedy") == 0
    s = new_game(path(6))
    e = baseline_toucher_move(s, "optimal")
    assert Solver(s).value(s.play(e)) == 1
    s = new_game(path(7))
    assert baseline_toucher_move(s, "random:7") == baseline_toucher_move(s, "random:7")


def test_simulate_deterministic():
    s = new_game(path(9))
    a = simulate(s, RandomPlayer(3), RandomPlayer(3))
    b = simulate(s, RandomPlayer(3), RandomPlayer(3))
    assert a.history == b.history


def test_simulate_theorem_vs_greedy():
    assert final_score(simulate(new_game(path(6)), GreedyPlayer(), TheoremIsolator())) >= 1
    assert final_score(simulate(new_game(cycle(5)), OptimalPlayer(), OptimalPlayer())) == 1


def test_strategy_names():
    assert isinstance(strategy_from_name("random:4"), RandomPlayer)
    with pytest.raises(ValueError):
        strategy_from_name("clever")
    with pytest.raises(ValueError):
        baseline_toucher_move(new_game(path(3)), "theorem")
