"""Rules of the Toucher-Isolator game and its non-leaf variant."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .graph import Claim, GraphError, PartiallyPlayedGraph, untouched_counts


class GameError(ValueError):
    pass


class Variant(enum.Enum):
    #: Toucher moves first; every untouched vertex scores.
    TOUCHER_ISOLATOR = "ti"
    #: Isolator moves first; untouched vertices score unless they were leaves at the start.
    NON_LEAF = "nlit"

    @property
    def first_mover(self) -> Claim:
        return Claim.TOUCHER if self is Variant.TOUCHER_ISOLATOR else Claim.ISOLATOR

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, Variant):
            return value
        aliases = {"ti": cls.TOUCHER_ISOLATOR, "toucher-isolator": cls.TOUCHER_ISOLATOR,
                   "nlit": cls.NON_LEAF, "non-leaf": cls.NON_LEAF, "nl": cls.NON_LEAF}
        try:
            return aliases[value.strip().lower()]
        except KeyError:
            raise GameError(f"unknown variant {value!r} (expected ti or nlit)") from None


def opponent(side: Claim) -> Claim:
    return Claim.ISOLATOR if side == Claim.TOUCHER else Claim.TOUCHER


@dataclass(frozen=True)
class GameState:
    variant: Variant
    graph: PartiallyPlayedGraph
    to_move: Claim
    frozen_leaves: frozenset[int]
    history: tuple[int, ...] = ()

    @property
    def is_terminal(self) -> bool:
        return Claim.UNCLAIMED not in self.graph.claims

    @property
    def counted(self) -> list[int]:
        """Vertices that contribute to the score when untouched."""
        if self.variant is Variant.TOUCHER_ISOLATOR:
            return list(range(self.graph.n))
        return [v for v in range(self.graph.n) if v not in self.frozen_leaves]

    def legal_moves(self) -> list[int]:
        return legal_moves(self)

    def play(self, e: int) -> "GameState":
        return apply_move(self, e)


def new_game(
    g: PartiallyPlayedGraph,
    variant: Variant | str = Variant.TOUCHER_ISOLATOR,
    *,
    to_move: Claim | None = None,
    leaves: Iterable[int] | None = None,
) -> GameState:
    """Start a game on ``g``, which may already carry claims.

    Without ``to_move`` the claim counts must fit an alternating prefix that
    began with the variant's first mover. Passing ``to_move`` skips that
    check, which is what reduced positions need. ``leaves`` overrides the
    frozen leaf set (default: the leaves of ``g``).
    """
    variant = Variant.parse(variant)
    n_t = sum(1 for c in g.claims if c == Claim.TOUCHER)
    n_i = sum(1 for c in g.claims if c == Claim.ISOLATOR)
    if to_move is None:
        first = variant.first_mover
        n_first, n_second = (n_t, n_i) if first == Claim.TOUCHER else (n_i, n_t)
        if n_first == n_second:
            to_move = first
        elif n_first == n_second + 1:
            to_move = opponent(first)
        else:
            raise GameError(
                f"{n_t} Toucher and {n_i} Isolator claims cannot arise from alternating play "
                f"with {first.name.lower()} moving first"
            )
    elif to_move == Claim.UNCLAIMED:
        raise GameError("side to move must be Toucher or Isolator")
    frozen = g.leaves() if leaves is None else frozenset(leaves)
    return GameState(variant, g, Claim(to_move), frozen)


def legal_moves(state: GameState) -> list[int]:
    return [e for e, c in enumerate(state.graph.claims) if c == Claim.UNCLAIMED]


def apply_move(state: GameState, e: int) -> GameState:
    if state.is_terminal:
        raise GameError("the game is over")
    if not 0 <= e < state.graph.m:
        raise GameError(f"no edge {e}")
    if state.graph.claims[e] != Claim.UNCLAIMED:
        raise GameError(f"edge {e} is already claimed by {state.graph.claims[e].name.lower()}")
    g = state.graph.with_claims({e: state.to_move})
    return GameState(state.variant, g, opponent(state.to_move), state.frozen_leaves, state.history + (e,))


def current_score(state: GameState) -> int:
    """Score if the game stopped now (unclaimed edges still count against untouched)."""
    total, non_leaf = untouched_counts(state.graph, state.frozen_leaves)
    return total if state.variant is Variant.TOUCHER_ISOLATOR else non_leaf


def final_score(state: GameState) -> int:
    if not state.is_terminal:
        raise GameError("final score requested before all edges are claimed")
    return current_score(state)


# transcripts: one move per line, "T e3" / "I e1", edge labels 1-based


def format_transcript(state: GameState, start: GameState | None = None) -> str:
    """Transcript of ``state.history`` (moves made since ``new_game``)."""
    side = start.to_move if start is not None else None
    lines = []
    for e in state.history:
        c = state.graph.claims[e]
        if side is not None and c != side:
            raise GameError("history does not alternate")
        lines.append(f"{c.letter} e{e + 1}")
        side = opponent(c)
    return "\n".join(lines) + ("\n" if lines else "")


def parse_transcript(text: str) -> list[tuple[Claim, int]]:
    moves = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 2 or parts[0].upper() not in ("T", "I") or not parts[1].lower().startswith("e"):
            raise GameError(f"line {lineno}: expected 'T eN' or 'I eN', got {raw!r}")
        try:
            label = int(parts[1][1:])
        except ValueError:
            raise GameError(f"line {lineno}: bad edge label {parts[1]!r}") from None
        if label < 1:
            raise GameError(f"line {lineno}: edge labels start at e1")
        moves.append((Claim.parse(parts[0]), label - 1))
    return moves


def replay(state: GameState, moves: Iterable[tuple[Claim, int]]) -> GameState:
    for side, e in moves:
        if side != state.to_move:
            raise GameError(f"{side.name.lower()} moved out of turn on e{e + 1}")
        state = apply_move(state, e)
    return state


__all__ = [
    "GameError",
    "GameState",
    "GraphError",
    "Variant",
    "apply_move",
    "current_score",
    "final_score",
    "format_transcript",
    "legal_moves",
    "new_game",
    "opponent",
    "parse_transcript",
    "replay",
]
