import random

import pytest

from conftest import naive_value
from toucher_isolator.game import Variant, apply_move, final_score, new_game
from toucher_isolator.generators import cycle, k_copies_p3, path, random_tree, star
from toucher_isolator.graph import Claim
from toucher_isolator.solver import (
    CapExceeded,
    Solver,
    best_response_score,
    optimal_move,
    optimal_score,
    principal_variation,
    value_profile,
)
from toucher_isolator.strategies import GreedyPlayer, LemmaIsolator, RandomPlayer, TheoremIsolator


@pytest.mark.parametrize(
    "g, variant, value",
    [(path(6), "ti", 1), (cycle(5), "ti", 1), (star(5), "ti", 2), (path(4), "nlit", 1)],
)
def test_optimal_score(g, variant, value):
    assert optimal_score(g, variant) == value
    assert naive_value(new_game(g, variant)) == value


def test_optimal_move():
    assert optimal_move(new_game(path(3))) == 0
    assert optimal_move(new_game(path(2))) == 0
    s = new_game(path(4)).play(0).play(2)
    assert optimal_move(s) == 1


def test_optimal_move_children():
    s = new_game(path(3))
    assert Solver(s).child_values(s) == {0: 1, 1: 1}


def test_principal_variation_realizes_value():
    end = principal_variation(new_game(path(7)))
    assert end.is_terminal
    assert final_score(end) == optimal_score(path(7))


def test_best_response():
    assert best_response_score(path(6), "ti", TheoremIsolator(), Claim.ISOLATOR) >= 1
    assert best_response_score(path(4), "nlit", LemmaIsolator(), Claim.ISOLATOR) >= 1
    for strat, side in [(GreedyPlayer(), Claim.TOUCHER), (RandomPlayer(1), Claim.ISOLATOR)]:
        assert best_response_score(path(2), "ti", strat, side) == 0


def test_value_profile():
    paths = [(f"P{n}", path(n)) for n in range(3, 8)]
    assert [v for _, v in value_profile(paths)] == [1, 1, 1, 1, 2]
    cycles = [(f"C{n}", cycle(n)) for n in range(3, 8)]
    assert [v for _, v in value_profile(cycles)] == [0, 1, 1, 1, 1]
    copies = [(f"{k}P3", k_copies_p3(k)) for k in (1, 2, 3)]
    assert [v for _, v in value_profile(copies)] == [1, 2, 3]


def test_cap():
    with pytest.raises(CapExceeded):
        optimal_score(path(20))
    with pytest.raises(CapExceeded):
        optimal_score(path(6), cap=4)
    assert optimal_score(path(14), cap=None) == 3


def test_solver_reuse_across_descendants():
    root = new_game(cycle(6))
    solver = Solver(root)
    child = apply_move(root, 2)
    assert solver.value(child) == optimal_score(child)


def test_pruned_matches_plain_on_nl():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(2, 9)
        g = random_tree(n, rng.randrange(10**6))
        for variant in Variant:
            assert optimal_score(g, variant, prune=True) == optimal_score(g, variant)
