"""Reductions of partially played forests and their profit accounting.

Three operators shrink a position without changing its game value:
splitting off a Toucher edge, deleting an Isolator subgraph together with
the vertices it isolates, and dropping single-edge components. Each one
reports how the edge, component and leaf counts move, and the
``table_row_*`` helpers give the closed-form prediction for the same
change so the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import (
    Claim,
    GraphError,
    LocusKind,
    PartiallyPlayedGraph,
    VertexClass,
    find_loci,
    stats,
)


class SurgeryError(GraphError):
    pass


@dataclass(frozen=True)
class SurgeryDelta:
    dm: int
    dk: int
    dl: int
    dpotential: int

    def __post_init__(self) -> None:
        if self.dpotential != self.dm + 4 * self.dk - 3 * self.dl:
            raise SurgeryError(f"inconsistent delta {self}")

    @classmethod
    def of(cls, dm: int, dk: int, dl: int) -> "SurgeryDelta":
        return cls(dm, dk, dl, dm + 4 * dk - 3 * dl)

    @classmethod
    def between(cls, before: PartiallyPlayedGraph, after: PartiallyPlayedGraph) -> "SurgeryDelta":
        a, b = stats(before), stats(after)
        return cls.of(b.m - a.m, b.k - a.k, b.l - a.l)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.dm, self.dk, self.dl, self.dpotential)


@dataclass(frozen=True)
class ToucherRemoval:
    graph: PartiallyPlayedGraph
    delta: SurgeryDelta
    edge_map: dict[int, int]
    vertex_map: dict[int, int]
    fresh: tuple[int, ...]

    @property
    def profit(self) -> int:
        return self.delta.dpotential + 3


@dataclass(frozen=True)
class IsolatorRemoval:
    graph: PartiallyPlayedGraph
    internal: int
    non_leaf_internal: int
    delta: SurgeryDelta
    edge_map: dict[int, int]
    vertex_map: dict[int, int]


@dataclass(frozen=True)
class Length1Removal:
    graph: PartiallyPlayedGraph
    q: int
    delta: SurgeryDelta
    edge_map: dict[int, int]
    vertex_map: dict[int, int]
    removed_edges: tuple[int, ...]

    @property
    def profit(self) -> int:
        return self.delta.dpotential


def _require_forest(g: PartiallyPlayedGraph) -> None:
    if not g.is_forest():
        raise SurgeryError("surgery is only defined on forests")


def _rebuild(
    g: PartiallyPlayedGraph,
    drop_vertices: set[int],
    drop_edges: set[int],
    split: set[int] = frozenset(),
) -> tuple[PartiallyPlayedGraph, dict[int, int], dict[int, int], list[int]]:
    """Delete vertices/edges, compact ids, and give each surviving edge that
    touched a vertex in ``split`` a fresh endpoint in its place."""
    vmap: dict[int, int] = {}
    for v in range(g.n):
        if v not in drop_vertices:
            vmap[v] = len(vmap)
    next_id = len(vmap)
    fresh = []
    edges = []
    claims = []
    emap: dict[int, int] = {}
    for e, (a, b) in enumerate(g.edges):
        if e in drop_edges:
            continue
        ends = []
        for x in (a, b):
            if x in split:
                ends.append(next_id)
                fresh.append(next_id)
                next_id += 1
            elif x in drop_vertices:
                raise SurgeryError(f"edge {e} survives but endpoint {x} was deleted")
            else:
                ends.append(vmap[x])
        emap[e] = len(edges)
        edges.append(tuple(ends))
        claims.append(g.claims[e])
    out = PartiallyPlayedGraph(next_id, tuple(edges), tuple(claims))
    return out, emap, vmap, fresh


def remove_toucher_edge(g: PartiallyPlayedGraph, e: int, *, check_table: bool = True) -> ToucherRemoval:
    """Delete both endpoints of Toucher edge ``e``; every other edge at an
    endpoint keeps its claim but gets a fresh leaf in that endpoint's place."""
    _require_forest(g)
    if not 0 <= e < g.m:
        raise SurgeryError(f"no edge {e}")
    if g.claims[e] != Claim.TOUCHER:
        raise SurgeryError(f"edge {e} is not a Toucher edge")
    u, v = g.edges[e]
    out, emap, vmap, fresh = _rebuild(g, {u, v}, {e}, {u, v})
    delta = SurgeryDelta.between(g, out)
    if check_table:
        row = table_row_for_toucher_edge(g, e)
        if row.delta != delta:
            raise SurgeryError(f"recounted {delta} disagrees with table row {row.row} {row.delta}")
    return ToucherRemoval(out, delta, emap, vmap, tuple(fresh))


def internal_vertices(g: PartiallyPlayedGraph, h: Iterable[int]) -> list[int]:
    """Vertices all of whose incident edges lie in ``h``."""
    hs = set(h)
    touched = {x for e in hs for x in g.edges[e]}
    return sorted(v for v in touched if all(x in hs for x in g.incident[v]))


def remove_isolator_subgraph(g: PartiallyPlayedGraph, h: Iterable[int]) -> IsolatorRemoval:
    """Delete the edges of Isolator subgraph ``h`` and the vertices it covers
    completely. Those vertices are untouched for good; both their total and
    the number that are not leaves of ``g`` are returned."""
    hs = set(h)
    for e in hs:
        if not 0 <= e < g.m:
            raise SurgeryError(f"no edge {e}")
        if g.claims[e] != Claim.ISOLATOR:
            raise SurgeryError(f"edge {e} is not an Isolator edge")
    inner = internal_vertices(g, hs)
    non_leaf = sum(1 for v in inner if g.degrees[v] != 1)
    out, emap, vmap, _ = _rebuild(g, set(inner), hs)
    return IsolatorRemoval(out, len(inner), non_leaf, SurgeryDelta.between(g, out), emap, vmap)


def remove_length1_components(g: PartiallyPlayedGraph) -> Length1Removal:
    """Drop every component that is a single edge, whatever its claim."""
    doomed_v: set[int] = set()
    doomed_e: set[int] = set()
    for comp in g.components:
        if len(comp) == 2:
            doomed_v.update(comp)
            doomed_e.update(g.incident[comp[0]])
    out, emap, vmap, _ = _rebuild(g, doomed_v, doomed_e)
    q = len(doomed_e)
    return Length1Removal(out, q, SurgeryDelta.between(g, out), emap, vmap, tuple(sorted(doomed_e)))


@dataclass(frozen=True)
class TableRow:
    row: str
    delta: SurgeryDelta
    profit: int


# ordering used to name Toucher-edge rows: small < big < leaf
_RANK = {VertexClass.SMALL: 0, VertexClass.BIG: 1, VertexClass.LEAF: 2}


def table_row_for_toucher_edge(g: PartiallyPlayedGraph, e: int) -> TableRow:
    """Closed-form change of (m, k, l, m + 4k - 3l) when splitting off edge ``e``."""
    u, v = g.edges[e]
    du, dv = g.degrees[u], g.degrees[v]
    cu, cv = VertexClass.of_degree(du), VertexClass.of_degree(dv)
    if cu is VertexClass.ISOLATED or cv is VertexClass.ISOLATED:
        raise SurgeryError("no table row covers an isolated endpoint")
    if _RANK[cu] > _RANK[cv]:
        cu, cv, du, dv = cv, cu, dv, du
    key = (cu.value, cv.value)
    if key == ("small", "small"):
        d = SurgeryDelta(-1, 1, 2, -3)
    elif key == ("small", "big"):
        d = SurgeryDelta(-1, dv - 1, dv, dv - 5)
    elif key == ("small", "leaf"):
        d = SurgeryDelta(-1, 0, 0, -1)
    elif key == ("big", "big"):
        d = SurgeryDelta(-1, du + dv - 3, du + dv - 2, du + dv - 7)
    elif key == ("big", "leaf"):
        d = SurgeryDelta(-1, du - 2, du - 2, du - 3)
    else:
        d = SurgeryDelta(-1, -1, -2, 1)
    return TableRow(f"{key[0]}/{key[1]}", d, d.dpotential + 3)


def locus_of(g: PartiallyPlayedGraph, h: Iterable[int]):
    """The locus whose edge set is exactly ``h``, or None."""
    hs = set(h)
    for loc in find_loci(g):
        if set(loc.edges) == hs:
            return loc
    return None


def table_row_for_isolator_path(g: PartiallyPlayedGraph, h: Iterable[int]) -> TableRow:
    """Closed-form change when deleting an Isolator path of length r + 1."""
    loc = locus_of(g, h)
    if loc is None:
        raise SurgeryError("edges do not form a path component, branch or twig")
    r = loc.length - 1
    if loc.kind is LocusKind.PATH_COMPONENT:
        name, d = "leaf/leaf", SurgeryDelta(-(r + 1), -1, -2, -r + 1)
    elif loc.kind is LocusKind.TWIG:
        name, d = "big/leaf", SurgeryDelta(-(r + 1), 0, -1, -r + 2)
    else:
        name, d = "big/big", SurgeryDelta(-(r + 1), 1, 0, -r + 3)
    return TableRow(name, d, d.dpotential + r - 1)


def table_row_for_length1(g: PartiallyPlayedGraph) -> TableRow:
    q = stats(g).q
    d = SurgeryDelta(-q, -q, -2 * q, q)
    return TableRow("q", d, d.dpotential)


@dataclass
class ProfitLedger:
    """Profits collected while reducing one finished Isolator path."""

    toucher: list[int] = field(default_factory=list)
    isolator: list[tuple[int, int]] = field(default_factory=list)  # (p_I, r)
    length1: list[int] = field(default_factory=list)

    def add_toucher(self, removal: ToucherRemoval) -> None:
        p = removal.delta.dpotential + 3
        if p < 0:
            raise SurgeryError(f"negative Toucher profit {p}")
        self.toucher.append(p)

    def add_isolator(self, removal: IsolatorRemoval, r: int) -> None:
        p = removal.delta.dpotential + r - 1
        if p < 0:
            raise SurgeryError(f"negative Isolator-path profit {p}")
        self.isolator.append((p, r))

    def add_length1(self, removal: Length1Removal) -> None:
        if removal.delta.dpotential != removal.q:
            raise SurgeryError("length-1 profit must equal q")
        self.length1.append(removal.q)

    @property
    def potential_change(self) -> int:
        return (
            sum(p - 3 for p in self.toucher)
            + sum(p - r + 1 for p, r in self.isolator)
            + sum(self.length1)
        )

    @property
    def total_profit(self) -> int:
        return sum(self.toucher) + sum(p for p, _ in self.isolator) + sum(self.length1)
