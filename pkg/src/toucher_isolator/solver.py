"""Exact game values by exhaustive search.

Positions are encoded as a pair of bitmasks (Toucher edges, Isolator
edges) over the edge ids of one fixed graph. The side to move follows from
how many edges were claimed since the search root, so the claim pair alone
keys the memo table.
"""

from __future__ import annotations

import sys
from typing import Callable, Iterable, Protocol

from .game import GameState, Variant, apply_move, final_score, new_game
from .graph import Claim, PartiallyPlayedGraph

DEFAULT_CAP = 16

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))


class CapExceeded(RuntimeError):
    """The position has more unclaimed edges than the configured cap."""


class _Board:
    def __init__(self, state: GameState, cap: int | None) -> None:
        g = state.graph
        free = sum(1 for c in g.claims if c == Claim.UNCLAIMED)
        if cap is not None and free > cap:
            raise CapExceeded(f"{free} unclaimed edges exceed the solver cap of {cap}")
        self.m = g.m
        self.full = (1 << g.m) - 1
        self.masks = []
        for v in state.counted:
            mk = 0
            for e in g.incident[v]:
                mk |= 1 << e
            self.masks.append(mk)
        self.t0 = sum(1 << e for e, c in enumerate(g.claims) if c == Claim.TOUCHER)
        self.i0 = sum(1 << e for e, c in enumerate(g.claims) if c == Claim.ISOLATOR)
        self.toucher_first = state.to_move == Claim.TOUCHER
        self.start = bin(self.t0 | self.i0).count("1")

    def toucher_to_move(self, t: int, i: int) -> bool:
        even = (bin(t | i).count("1") - self.start) % 2 == 0
        return even == self.toucher_first

    def masks_of(self, state: GameState) -> tuple[int, int]:
        t = i = 0
        for e, c in enumerate(state.graph.claims):
            if c == Claim.TOUCHER:
                t |= 1 << e
            elif c == Claim.ISOLATOR:
                i |= 1 << e
        return t, i


def _plain(board: _Board, memo: dict[int, int]) -> Callable[[int, int, bool], int]:
    masks, full, m = board.masks, board.full, board.m
    top = len(masks) + 1

    def rec(t: int, i: int, tmove: bool) -> int:
        key = (t << m) | i
        v = memo.get(key)
        if v is not None:
            return v
        free = full & ~(t | i)
        if not free:
            v = 0
            for mk in masks:
                if not mk & t:
                    v += 1
        elif tmove:
            v = top
            while free:
                b = free & -free
                free ^= b
                c = rec(t | b, i, False)
                if c < v:
                    v = c
        else:
            v = -1
            while free:
                b = free & -free
                free ^= b
                c = rec(t, i | b, True)
                if c > v:
                    v = c
        memo[key] = v
        return v

    return rec


def _alphabeta(board: _Board, table: dict[int, tuple[int, int]]) -> Callable[[int, int, bool, int, int], int]:
    """Fail-soft alpha-beta; ``table`` keeps a known [lower, upper] interval per position."""
    masks, full, m = board.masks, board.full, board.m

    def rec(t: int, i: int, tmove: bool, alpha: int, beta: int) -> int:
        free = full & ~(t | i)
        if not free:
            return sum(1 for mk in masks if not mk & t)
        key = (t << m) | i
        known = table.get(key)
        if known is None:
            # vertices already isolated for good / not yet touched
            lower = sum(1 for mk in masks if mk & i == mk)
            upper = sum(1 for mk in masks if not mk & t)
        else:
            lower, upper = known
        if lower == upper or lower >= beta:
            return lower
        if upper <= alpha:
            return upper
        if lower > alpha:
            alpha = lower
        if upper < beta:
            beta = upper
        if tmove:
            g = upper + 1
            b = beta
            while free:
                bit = free & -free
                free ^= bit
                v = rec(t | bit, i, False, alpha, b)
                if v < g:
                    g = v
                    if g <= alpha:
                        break
                    if g < b:
                        b = g
        else:
            g = lower - 1
            a = alpha
            while free:
                bit = free & -free
                free ^= bit
                v = rec(t, i | bit, True, a, beta)
                if v > g:
                    g = v
                    if g >= beta:
                        break
                    if g > a:
                        a = g
        if g <= alpha:
            upper = min(upper, g)
        elif g >= beta:
            lower = max(lower, g)
        else:
            lower = upper = g
        table[key] = (lower, upper)
        return g

    return rec


class Solver:
    """Memoized minimax rooted at one position; reusable for all its descendants."""

    def __init__(self, state: GameState, *, cap: int | None = DEFAULT_CAP, prune: bool = False) -> None:
        self.root = state
        self.board = _Board(state, cap)
        self.prune = prune
        self.memo: dict = {}
        self._rec = _alphabeta(self.board, self.memo) if prune else _plain(self.board, self.memo)

    def _value(self, t: int, i: int) -> int:
        tmove = self.board.toucher_to_move(t, i)
        if self.prune:
            return self._rec(t, i, tmove, -1, len(self.board.masks) + 1)
        return self._rec(t, i, tmove)

    def value(self, state: GameState | None = None) -> int:
        """Optimal score of ``state`` (default: the root), which must descend from the root."""
        state = self.root if state is None else state
        t, i = self.board.masks_of(state)
        if t & self.board.t0 != self.board.t0 or i & self.board.i0 != self.board.i0:
            raise ValueError("state does not descend from the solver root")
        if self.board.toucher_to_move(t, i) != (state.to_move == Claim.TOUCHER):
            raise ValueError("side to move disagrees with the solver root")
        return self._value(t, i)

    def child_values(self, state: GameState) -> dict[int, int]:
        return {e: self.value(apply_move(state, e)) for e in state.legal_moves()}

    def best_move(self, state: GameState) -> int:
        if state.is_terminal:
            raise ValueError("no move in a terminal position")
        vals = self.child_values(state)
        pick = min if state.to_move == Claim.TOUCHER else max
        target = pick(vals.values())
        return min(e for e, v in vals.items() if v == target)


def _as_state(g: PartiallyPlayedGraph | GameState, variant: Variant | str) -> GameState:
    return g if isinstance(g, GameState) else new_game(g, variant)


def optimal_score(
    g: PartiallyPlayedGraph | GameState,
    variant: Variant | str = Variant.TOUCHER_ISOLATOR,
    *,
    cap: int | None = DEFAULT_CAP,
    prune: bool = False,
) -> int:
    """Score under optimal play: Toucher minimizes, Isolator maximizes.

    A graph starts a game with :func:`new_game` (claims must fit alternating
    play); pass a :class:`GameState` for positions with an explicit side to
    move or leaf set.
    """
    return Solver(_as_state(g, variant), cap=cap, prune=prune).value()


def optimal_move(state: GameState, *, cap: int | None = DEFAULT_CAP) -> int:
    """An optimal move, smallest edge id among ties."""
    return Solver(state, cap=cap).best_move(state)


def principal_variation(state: GameState, *, cap: int | None = DEFAULT_CAP) -> GameState:
    solver = Solver(state, cap=cap)
    while not state.is_terminal:
        state = apply_move(state, solver.best_move(state))
    return state


class Strategy(Protocol):
    name: str

    def start(self, state: GameState): ...

    def move(self, state: GameState, memory) -> tuple[int, object]: ...


def best_response_score(
    g: PartiallyPlayedGraph | GameState,
    variant: Variant | str,
    strategy: Strategy,
    fixed_side: Claim,
    *,
    cap: int | None = DEFAULT_CAP,
    on_leaf: Callable[[GameState, object], None] | None = None,
) -> int:
    """Worst final score for ``fixed_side`` playing ``strategy`` against every reply.

    The opponent's moves are enumerated exhaustively; the strategy's memory
    is never mutated, so sibling branches share it. ``on_leaf`` sees each
    terminal state with the strategy memory that produced it.
    """
    state = _as_state(g, variant)
    free = sum(1 for c in state.graph.claims if c == Claim.UNCLAIMED)
    if cap is not None and free > cap:
        raise CapExceeded(f"{free} unclaimed edges exceed the solver cap of {cap}")
    pick = min if fixed_side == Claim.ISOLATOR else max

    def rec(s: GameState, memory) -> int:
        if s.is_terminal:
            if on_leaf is not None:
                on_leaf(s, memory)
            return final_score(s)
        if s.to_move == fixed_side:
            e, memory = strategy.move(s, memory)
            return rec(apply_move(s, e), memory)
        return pick(rec(apply_move(s, e), memory) for e in s.legal_moves())

    return rec(state, strategy.start(state))


def value_profile(
    family: Iterable[tuple[str, PartiallyPlayedGraph]],
    variant: Variant | str = Variant.TOUCHER_ISOLATOR,
    *,
    cap: int | None = DEFAULT_CAP,
) -> list[tuple[str, int]]:
    return [(name, optimal_score(g, variant, cap=cap)) for name, g in family]
