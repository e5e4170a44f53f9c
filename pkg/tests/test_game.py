import pytest

from toucher_isolator.game import (
    GameError,
    Variant,
    apply_move,
    final_score,
    format_transcript,
    new_game,
    parse_transcript,
    replay,
)
from toucher_isolator.generators import path
from toucher_isolator.graph import Claim, build_graph

T, I = Claim.TOUCHER, Claim.ISOLATOR


def play(state, *edges):
    for e in edges:
        state = apply_move(state, e)
    return state


def test_first_mover():
    assert new_game(path(5), "ti").to_move == T
    assert new_game(path(5), "nlit").to_move == I
    assert new_game(path(4).with_claims({0: T, 1: I}), "ti").to_move == T


def test_inconsistent_claims_rejected():
    with pytest.raises(GameError):
        new_game(path(4).with_claims({0: I}), "ti")
    # explicit side to move skips the check
    assert new_game(path(4).with_claims({0: I}), "ti", to_move=I).to_move == I


def test_legal_moves():
    assert new_game(path(3)).legal_moves() == [0, 1]
    assert play(new_game(path(3)), 0, 1).legal_moves() == []
    assert new_game(path(4), to_move=T).play(1).legal_moves() == [0, 2]


def test_apply_move():
    s = play(new_game(path(2)), 0)
    assert s.is_terminal and final_score(s) == 0
    s = play(new_game(path(3)), 0, 1)
    assert final_score(s) == 1
    with pytest.raises(GameError):
        play(new_game(path(3)), 0, 0)


def test_final_score_hand_play():
    assert final_score(play(new_game(path(4)), 1, 0, 2)) == 1
    assert final_score(play(new_game(path(4), "nlit"), 1, 0, 2)) == 1
    assert final_score(new_game(build_graph([], 0))) == 0


def test_final_score_before_end():
    with pytest.raises(GameError):
        final_score(new_game(path(3)))


def test_transcript_round_trip():
    start = new_game(path(5))
    end = play(start, 2, 0, 3, 1)
    text = format_transcript(end, start)
    assert text.splitlines() == ["T e3", "I e1", "T e4", "I e2"]
    assert replay(start, parse_transcript(text)) == end


def test_transcript_errors():
    with pytest.raises(GameError):
        parse_transcript("X e1\n")
    with pytest.raises(GameError):
        parse_transcript("T e0\n")
    with pytest.raises(GameError):
        replay(new_game(path(3)), [(I, 0)])


def test_variant_parse():
    assert Variant.parse("NLIT") is Variant.NON_LEAF
    with pytest.raises(GameError):
        Variant.parse("chess")
