"""Isolator strategies with guaranteed scores, plus baseline players.

Every strategy is deterministic given the position and its memory. Memory
values are never mutated; ``move`` returns a fresh one, so a search can
fork a strategy by simply reusing the memory it was handed.

Two Isolator strategies are provided:

* :class:`LemmaIsolator` plays the non-leaf game on a forest. It grows a
  run of consecutive Isolator edges inside one path component, branch or
  twig; when both ends are blocked it reduces a private copy of the forest
  (split off Toucher edges, delete the finished run, drop single-edge
  components) and starts a new run on what is left.
* :class:`TheoremIsolator` plays the ordinary game on a tree. It claims
  edges that isolate a vertex immediately for as long as it can, then
  reduces the position to a non-leaf game and hands over to the lemma
  strategy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .game import GameState, Variant
from .graph import Claim, LocusKind, PartiallyPlayedGraph, find_loci, meta_leaf_edges, stats
from .solver import DEFAULT_CAP, Solver
from .surgery import (
    ProfitLedger,
    locus_of,
    remove_isolator_subgraph,
    remove_length1_components,
    remove_toucher_edge,
)


class StrategyError(RuntimeError):
    """Internal bookkeeping went wrong; never a legitimate game situation."""


SELECT, EXTEND, BASE = "select", "extend", "base"

# (case, locus kind, length test, index of the first edge to claim)
CASES = (
    (1, LocusKind.PATH_COMPONENT, lambda s: s == 3, 1),
    (2, LocusKind.PATH_COMPONENT, lambda s: s >= 4, 2),
    (3, LocusKind.BRANCH, lambda s: s >= 3, 1),
    (4, LocusKind.TWIG, lambda s: s == 2, 0),
    (5, LocusKind.TWIG, lambda s: s >= 3, 1),
)


def select_case(forest: PartiallyPlayedGraph) -> tuple[int, tuple[int, ...], int] | None:
    """First matching (case, locus edges, start index), or None in the base case."""
    loci = find_loci(forest)
    for case, kind, fits, idx in CASES:
        for loc in loci:
            if loc.kind is kind and fits(loc.length):
                return case, loc.edges, idx
    return None


def is_base_case(forest: PartiallyPlayedGraph) -> bool:
    """Path components and branches of length <= 2, twigs of length <= 1."""
    return select_case(forest) is None


@dataclass(frozen=True)
class CycleRecord:
    """Accounting for one finished run of Isolator edges."""

    case: int
    r: int
    toucher_profits: tuple[int, ...]
    isolator_profit: int
    length1_profit: int
    passes: int
    potential_change: int

    @property
    def profit_sum(self) -> int:
        return self.r + sum(self.toucher_profits) + self.isolator_profit + self.length1_profit

    @property
    def slack(self) -> int:
        # the floor bound survives the cycle iff 5r + change in (m + 4k - 3l) >= 0
        return 5 * self.r + self.potential_change


@dataclass(frozen=True)
class LemmaMemory:
    phase: str
    forest: PartiallyPlayedGraph
    to_original: dict[int, int]
    seen: tuple[Claim, ...]
    dormant: frozenset[int] = frozenset()
    locus: tuple[int, ...] = ()
    lo: int = -1
    hi: int = -1
    case: int = 0
    passes: int = 0
    score: int = 0
    cycles: tuple[CycleRecord, ...] = ()


def _compose(to_original: dict[int, int], edge_map: dict[int, int]) -> dict[int, int]:
    return {edge_map[x]: o for x, o in to_original.items() if x in edge_map}


def _current(to_original: dict[int, int], originals) -> list[int]:
    inv = {o: x for x, o in to_original.items()}
    return sorted(inv[o] for o in originals)


def split_toucher_edges(g: PartiallyPlayedGraph, to_original: dict[int, int], ledger: ProfitLedger | None = None):
    """Split off every Toucher edge of ``g`` in ascending id order."""
    pending = [to_original[e] for e in g.edges_with(Claim.TOUCHER)]
    for o in pending:
        (cur,) = _current(to_original, [o])
        res = remove_toucher_edge(g, cur)
        if ledger is not None:
            ledger.add_toucher(res)
        g = res.graph
        to_original = _compose(to_original, res.edge_map)
    return g, to_original


class LemmaIsolator:
    """Isolator for the non-leaf game on a forest (Isolator moves first)."""

    name = "lemma"

    def __init__(self, check: bool = False) -> None:
        self.check = check

    def start(self, state: GameState) -> LemmaMemory:
        g = state.graph
        if any(c != Claim.UNCLAIMED for c in g.claims):
            raise StrategyError("the lemma strategy starts from an unclaimed forest")
        if not g.is_forest():
            raise StrategyError("the lemma strategy needs a forest")
        return self.memory_for(g, {e: e for e in range(g.m)}, g.claims)

    @staticmethod
    def memory_for(forest: PartiallyPlayedGraph, to_original: dict[int, int], seen) -> LemmaMemory:
        return LemmaMemory(SELECT, forest, dict(to_original), tuple(seen))

    def move(self, state: GameState, mem: LemmaMemory) -> tuple[int, LemmaMemory]:
        if state.to_move != Claim.ISOLATOR:
            raise StrategyError("not Isolator's turn")
        if state.is_terminal:
            raise StrategyError("no unclaimed edges")
        mem = self._sync(state, mem)
        if self.check:
            self._check(state, mem)
        while True:
            if mem.phase == EXTEND:
                c, path = mem.forest.claims, mem.locus
                if mem.lo > 0 and c[path[mem.lo - 1]] == Claim.UNCLAIMED:
                    return self._claim(replace(mem, lo=mem.lo - 1), path[mem.lo - 1])
                if mem.hi < len(path) - 1 and c[path[mem.hi + 1]] == Claim.UNCLAIMED:
                    return self._claim(replace(mem, hi=mem.hi + 1), path[mem.hi + 1])
                mem = self._reduce(mem)
            elif mem.phase == SELECT:
                if Claim.UNCLAIMED not in mem.forest.claims:
                    if not mem.dormant:
                        raise StrategyError("unclaimed edge outside the reduced forest")
                    e = min(mem.dormant)
                    seen = list(mem.seen)
                    seen[e] = Claim.ISOLATOR
                    return e, replace(mem, dormant=mem.dormant - {e}, seen=tuple(seen))
                pick = select_case(mem.forest)
                if pick is None:
                    mem = replace(mem, phase=BASE)
                    continue
                case, path, idx = pick
                mem = replace(mem, phase=EXTEND, case=case, locus=path, lo=idx, hi=idx, passes=0)
                return self._claim(mem, path[idx])
            else:
                e = state.legal_moves()[0]
                seen = list(mem.seen)
                seen[e] = Claim.ISOLATOR
                return e, replace(mem, seen=tuple(seen))

    def _claim(self, mem: LemmaMemory, v: int) -> tuple[int, LemmaMemory]:
        o = mem.to_original[v]
        seen = list(mem.seen)
        seen[o] = Claim.ISOLATOR
        forest = mem.forest.with_claims({v: Claim.ISOLATOR})
        return o, replace(mem, forest=forest, seen=tuple(seen))

    def _sync(self, state: GameState, mem: LemmaMemory) -> LemmaMemory:
        claims = state.graph.claims
        fresh = [e for e, (a, b) in enumerate(zip(mem.seen, claims)) if a != b]
        if not fresh:
            return mem
        if mem.phase == BASE:
            return replace(mem, seen=claims)
        inv = {o: x for x, o in mem.to_original.items()}
        updates = {}
        passes = mem.passes
        dormant = set(mem.dormant)
        for e in fresh:
            if claims[e] != Claim.TOUCHER or mem.seen[e] != Claim.UNCLAIMED:
                raise StrategyError(f"unexpected claim change on edge {e}")
            if e in inv:
                updates[inv[e]] = Claim.TOUCHER
            elif e in dormant:
                dormant.discard(e)
                passes += 1
            else:
                raise StrategyError(f"Toucher edge {e} is unknown to the reduced forest")
        forest = mem.forest.with_claims(updates) if updates else mem.forest
        return replace(mem, forest=forest, seen=claims, dormant=frozenset(dormant), passes=passes)

    def _reduce(self, mem: LemmaMemory) -> LemmaMemory:
        g = mem.forest
        to_orig = mem.to_original
        run = [to_orig[v] for v in mem.locus[mem.lo : mem.hi + 1]]
        r = len(run) - 1
        start_potential = stats(g).potential
        ledger = ProfitLedger()
        g, to_orig = split_toucher_edges(g, to_orig, ledger)
        q_edges = _current(to_orig, run)
        if sorted(g.edges_with(Claim.ISOLATOR)) != q_edges or locus_of(g, q_edges) is None:
            raise StrategyError("finished run is not an Isolator path after splitting")
        res = remove_isolator_subgraph(g, q_edges)
        if res.non_leaf_internal != r:
            raise StrategyError(f"run of length {r + 1} isolated {res.non_leaf_internal} counted vertices")
        ledger.add_isolator(res, r)
        g, to_orig = res.graph, _compose(to_orig, res.edge_map)
        res1 = remove_length1_components(g)
        ledger.add_length1(res1)
        dropped = {to_orig[x] for x in res1.removed_edges}
        g, to_orig = res1.graph, _compose(to_orig, res1.edge_map)
        change = stats(g).potential - start_potential
        if change != ledger.potential_change:
            raise StrategyError("profit ledger disagrees with the recount")
        record = CycleRecord(
            case=mem.case,
            r=r,
            toucher_profits=tuple(ledger.toucher),
            isolator_profit=ledger.isolator[0][0],
            length1_profit=ledger.length1[0],
            passes=mem.passes,
            potential_change=change,
        )
        return LemmaMemory(
            SELECT,
            g,
            to_orig,
            mem.seen,
            dormant=mem.dormant | dropped,
            score=mem.score + r,
            cycles=mem.cycles + (record,),
        )

    def _check(self, state: GameState, mem: LemmaMemory) -> None:
        if mem.phase == BASE:
            return
        claims = state.graph.claims
        originals = set(mem.to_original.values())
        if len(originals) != len(mem.to_original):
            raise StrategyError("edge map is not injective")
        for v, o in mem.to_original.items():
            vc = mem.forest.claims[v]
            if vc != claims[o]:
                raise StrategyError(f"reduced edge {v} and original edge {o} disagree")
        for e, c in enumerate(claims):
            if c == Claim.UNCLAIMED and e not in originals and e not in mem.dormant:
                raise StrategyError(f"unclaimed edge {e} is not tracked")
        if not mem.forest.is_forest():
            raise StrategyError("reduced graph is not a forest")


@dataclass(frozen=True)
class TheoremMemory:
    phase: int = 1
    lemma: LemmaMemory | None = None
    phase1_moves: int = 0
    # (Isolator edges r, leaves of the reduced tree l1, vertices isolated in phase 1)
    handoff: tuple[int, int, int] | None = None


class TheoremIsolator:
    """Isolator for the ordinary game on a tree (Toucher moves first)."""

    name = "theorem"

    def __init__(self, check: bool = False) -> None:
        self.lemma = LemmaIsolator(check=check)

    def start(self, state: GameState) -> TheoremMemory:
        if state.variant is not Variant.TOUCHER_ISOLATOR:
            raise StrategyError("the theorem strategy plays the Toucher-Isolator game")
        if not state.graph.is_tree():
            raise StrategyError("the theorem strategy needs a tree")
        return TheoremMemory()

    def move(self, state: GameState, mem: TheoremMemory) -> tuple[int, TheoremMemory]:
        if state.to_move != Claim.ISOLATOR:
            raise StrategyError("not Isolator's turn")
        if state.is_terminal:
            raise StrategyError("no unclaimed edges")
        if mem.phase == 1:
            g = state.graph
            options = sorted(e for e in meta_leaf_edges(g) if g.claims[e] == Claim.UNCLAIMED)
            if options:
                return options[0], replace(mem, phase1_moves=mem.phase1_moves + 1)
            mem = self.handoff(state, mem)
        e, lm = self.lemma.move(state, mem.lemma)
        return e, replace(mem, lemma=lm)

    def handoff(self, state: GameState, mem: TheoremMemory) -> TheoremMemory:
        g = state.graph
        to_orig = {e: e for e in range(g.m)}
        iso = g.edges_with(Claim.ISOLATOR)
        isolated = 0
        if iso:
            res = remove_isolator_subgraph(g, iso)
            g, to_orig, isolated = res.graph, _compose(to_orig, res.edge_map), res.internal
        for v in g.leaves():
            if all(g.claims[e] != Claim.TOUCHER for e in g.incident[v]):
                raise StrategyError(f"leaf {v} of the reduced tree is untouched at handoff")
        l1 = stats(g).l
        g, to_orig = split_toucher_edges(g, to_orig)
        lemma = LemmaIsolator.memory_for(g, to_orig, state.graph.claims)
        return replace(mem, phase=2, lemma=lemma, handoff=(len(iso), l1, isolated))


class OptimalPlayer:
    name = "optimal"

    def __init__(self, cap: int | None = DEFAULT_CAP) -> None:
        self.cap = cap

    def start(self, state: GameState) -> Solver:
        return Solver(state, cap=self.cap)

    def move(self, state: GameState, solver: Solver) -> tuple[int, Solver]:
        return solver.best_move(state), solver


class GreedyPlayer:
    """Toucher: touch the most counted vertices. Isolator: isolate the most
    counted vertices right now. Ties go to the smallest edge id."""

    name = "greedy"

    def start(self, state: GameState) -> None:
        return None

    def move(self, state: GameState, memory=None) -> tuple[int, None]:
        return greedy_move(state), None


def greedy_move(state: GameState) -> int:
    g = state.graph
    counted = set(state.counted)
    best, best_gain = None, -1
    for e in state.legal_moves():
        gain = 0
        for x in g.edges[e]:
            if x not in counted:
                continue
            others = [f for f in g.incident[x] if f != e]
            if state.to_move == Claim.TOUCHER:
                gain += all(g.claims[f] != Claim.TOUCHER for f in others)
            else:
                gain += all(g.claims[f] == Claim.ISOLATOR for f in others)
        if gain > best_gain:
            best, best_gain = e, gain
    if best is None:
        raise StrategyError("no legal move")
    return best


class RandomPlayer:
    """Uniform over legal moves, seeded by (seed, position) so reruns repeat."""

    def __init__(self, seed: int = 0) -> None:
        self.seed = seed
        self.name = f"random:{seed}"

    def start(self, state: GameState) -> None:
        return None

    def move(self, state: GameState, memory=None) -> tuple[int, None]:
        moves = state.legal_moves()
        if not moves:
            raise StrategyError("no legal move")
        claims = "".join(c.letter for c in state.graph.claims)
        rng = random.Random(f"{self.seed}|{claims}|{state.to_move.letter}")
        return rng.choice(moves), None


STRATEGY_NAMES = ("theorem", "lemma", "optimal", "greedy", "random:<seed>")


def strategy_from_name(name: str, seed: int = 0, *, cap: int | None = DEFAULT_CAP):
    key, _, arg = name.strip().lower().partition(":")
    if key == "theorem":
        return TheoremIsolator()
    if key == "lemma":
        return LemmaIsolator()
    if key == "optimal":
        return OptimalPlayer(cap)
    if key == "greedy":
        return GreedyPlayer()
    if key == "random":
        try:
            return RandomPlayer(int(arg) if arg else seed)
        except ValueError:
            raise ValueError(f"bad seed in strategy {name!r}") from None
    raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")


def baseline_toucher_move(state: GameState, policy: str = "greedy", seed: int = 0) -> int:
    if state.to_move != Claim.TOUCHER:
        raise StrategyError("not Toucher's turn")
    if state.is_terminal:
        raise StrategyError("the game is over")
    player = strategy_from_name(policy, seed)
    if isinstance(player, (TheoremIsolator, LemmaIsolator)):
        raise ValueError(f"{policy} is an Isolator strategy")
    e, _ = player.move(state, player.start(state))
    return e


def simulate(state: GameState, toucher, isolator) -> GameState:
    """Play both strategies to the end."""
    mem = {Claim.TOUCHER: toucher.start(state), Claim.ISOLATOR: isolator.start(state)}
    players = {Claim.TOUCHER: toucher, Claim.ISOLATOR: isolator}
    while not state.is_terminal:
        side = state.to_move
        e, mem[side] = players[side].move(state, mem[side])
        state = state.play(e)
    return state
