"""Partially played graphs and the vertex/path vocabulary used on forests."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed graph input or a query that does not apply to the graph."""


class Claim(enum.IntEnum):
    UNCLAIMED = 0
    TOUCHER = 1
    ISOLATOR = 2

    @property
    def letter(self) -> str:
        return "UTI"[self]

    @classmethod
    def parse(cls, value: "Claim | str | int") -> "Claim":
        if isinstance(value, Claim):
            return value
        if isinstance(value, str):
            try:
                return cls("UTI".index(value.strip().upper()))
            except ValueError:
                raise GraphError(f"unknown claim mark {value!r}") from None
        return cls(value)


class VertexClass(enum.Enum):
    ISOLATED = "isolated"
    LEAF = "leaf"
    SMALL = "small"
    BIG = "big"

    @classmethod
    def of_degree(cls, d: int) -> "VertexClass":
        if d == 0:
            return cls.ISOLATED
        if d == 1:
            return cls.LEAF
        if d == 2:
            return cls.SMALL
        return cls.BIG


class LocusKind(enum.Enum):
    PATH_COMPONENT = "path-component"
    BRANCH = "branch"
    TWIG = "twig"


@dataclass(frozen=True)
class PartiallyPlayedGraph:
    """A simple graph on vertices ``0..n-1`` whose edges carry claim marks.

    Edge ids are positions in ``edges``. Instances are immutable; the
    ``with_*`` methods return modified copies.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    claims: tuple[Claim, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        if len(self.claims) != len(self.edges):
            raise GraphError("one claim mark is required per edge")
        seen: set[frozenset[int]] = set()
        for idx, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {idx} ({u}, {v}) has an endpoint out of range 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"edge {idx} ({u}, {v}) is a self-loop")
            key = frozenset((u, v))
            if key in seen:
                raise GraphError(f"edge {idx} ({u}, {v}) duplicates an earlier edge")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex, ascending."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for idx, (u, v) in enumerate(self.edges):
            inc[u].append(idx)
            inc[v].append(idx)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.incident)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.degrees[v]

    def other(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        return w if u == v else u

    def neighbors(self, v: int) -> list[int]:
        self._check_vertex(v)
        return [self.other(e, v) for e in self.incident[v]]

    def edges_with(self, claim: Claim) -> list[int]:
        return [e for e, c in enumerate(self.claims) if c == claim]

    def with_claims(self, updates: dict[int, Claim]) -> "PartiallyPlayedGraph":
        claims = list(self.claims)
        for e, c in updates.items():
            claims[e] = Claim.parse(c)
        g = PartiallyPlayedGraph(self.n, self.edges, tuple(claims))
        # structure is unchanged, so the adjacency index can be shared
        if "incident" in self.__dict__:
            g.__dict__["incident"] = self.incident
        return g

    def unclaimed(self) -> "PartiallyPlayedGraph":
        return PartiallyPlayedGraph(self.n, self.edges, (Claim.UNCLAIMED,) * self.m)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted vertex tuples, ordered by smallest vertex."""
        comp = [-1] * self.n
        out: list[tuple[int, ...]] = []
        for s in range(self.n):
            if comp[s] >= 0:
                continue
            comp[s] = len(out)
            members = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for e in self.incident[x]:
                    y = self.other(e, x)
                    if comp[y] < 0:
                        comp[y] = len(out)
                        members.append(y)
                        queue.append(y)
            out.append(tuple(sorted(members)))
        return tuple(out)

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components)

    def is_tree(self) -> bool:
        return self.n >= 1 and len(self.components) == 1 and self.m == self.n - 1

    def leaves(self) -> frozenset[int]:
        return frozenset(v for v, d in enumerate(self.degrees) if d == 1)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"unknown vertex {v}")


def build_graph(edge_list: Iterable[Sequence], vertex_count: int) -> PartiallyPlayedGraph:
    """Build a graph from ``(u, v)`` or ``(u, v, claim)`` items.

    Claims may be :class:`Claim` members or the letters ``U``/``T``/``I``.
    """
    edges = []
    claims = []
    for item in edge_list:
        if len(item) == 2:
            u, v = item
            c = Claim.UNCLAIMED
        elif len(item) == 3:
            u, v, c = item
            c = Claim.parse(c)
        else:
            raise GraphError(f"edge item {item!r} must be (u, v) or (u, v, claim)")
        edges.append((int(u), int(v)))
        claims.append(c)
    return PartiallyPlayedGraph(vertex_count, tuple(edges), tuple(claims))


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    k: int
    l: int
    q: int

    @property
    def potential(self) -> int:
        return self.m + 4 * self.k - 3 * self.l


def stats(g: PartiallyPlayedGraph) -> GraphStats:
    q = sum(1 for comp in g.components if len(comp) == 2)
    l = sum(1 for d in g.degrees if d == 1)
    return GraphStats(n=g.n, m=g.m, k=len(g.components), l=l, q=q)


def classify_vertex(g: PartiallyPlayedGraph, v: int) -> VertexClass:
    return VertexClass.of_degree(g.degree(v))


@dataclass(frozen=True)
class PathLocus:
    """A maximal path through degree-2 vertices.

    ``edges`` are ordered e1..es and ``vertices`` v0..vs so that edge
    ``edges[i]`` joins ``vertices[i]`` and ``vertices[i + 1]``. Twigs start
    at their big end; branches and path components start at the end whose
    end edge has the smaller id.
    """

    kind: LocusKind
    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    start_class: VertexClass
    end_class: VertexClass

    @property
    def length(self) -> int:
        return len(self.edges)


def _walk(g: PartiallyPlayedGraph, start: int, via: int) -> tuple[list[int], list[int]]:
    """Follow degree-2 vertices from ``start`` through edge ``via``."""
    verts = [start]
    edges = [via]
    cur = g.other(via, start)
    while g.degrees[cur] == 2:
        verts.append(cur)
        e1, e2 = g.incident[cur]
        nxt = e2 if e1 == edges[-1] else e1
        edges.append(nxt)
        cur = g.other(nxt, cur)
    verts.append(cur)
    return verts, edges


def find_loci(g: PartiallyPlayedGraph) -> list[PathLocus]:
    """Split the edges of a forest into path components, branches and twigs.

    Claims are ignored. Loci come out ordered by their smallest edge id.
    """
    if not g.is_forest():
        raise GraphError("locus decomposition needs a forest")
    assigned = [False] * g.m
    out = []
    for e in range(g.m):
        if assigned[e]:
            continue
        u = g.edges[e][0]
        verts, edges = _walk(g, u, e)
        if g.degrees[u] == 2:
            back = next(x for x in g.incident[u] if x != e)
            left_v, left_e = _walk(g, u, back)
            verts = left_v[::-1] + verts[1:]
            edges = left_e[::-1] + edges
        for x in edges:
            assigned[x] = True
        out.append(_orient(g, verts, edges))
    return out


def _orient(g: PartiallyPlayedGraph, verts: list[int], edges: list[int]) -> PathLocus:
    a, b = VertexClass.of_degree(g.degrees[verts[0]]), VertexClass.of_degree(g.degrees[verts[-1]])
    if a is VertexClass.LEAF and b is VertexClass.BIG:
        flip = True
    elif a is VertexClass.BIG and b is VertexClass.LEAF:
        flip = False
    else:
        flip = (edges[-1], verts[-1]) < (edges[0], verts[0])
    if flip:
        verts, edges = verts[::-1], edges[::-1]
        a, b = b, a
    if a is VertexClass.LEAF and b is VertexClass.LEAF:
        kind = LocusKind.PATH_COMPONENT
    elif a is VertexClass.BIG and b is VertexClass.BIG:
        kind = LocusKind.BRANCH
    else:
        kind = LocusKind.TWIG
    return PathLocus(kind, tuple(edges), tuple(verts), a, b)


def meta_leaf_edges(g: PartiallyPlayedGraph) -> frozenset[int]:
    """Non-Isolator edges at a vertex that has exactly one non-Isolator edge.

    Such a vertex is a leaf once every Isolator edge is deleted; claiming
    its last edge for Isolator leaves it untouched.
    """
    out = set()
    for v in range(g.n):
        live = [e for e in g.incident[v] if g.claims[e] != Claim.ISOLATOR]
        if len(live) == 1:
            out.add(live[0])
    return frozenset(out)


def untouched_counts(g: PartiallyPlayedGraph, frozen_leaves: Iterable[int] = ()) -> tuple[int, int]:
    """Return (untouched vertices, untouched vertices outside ``frozen_leaves``).

    A vertex is untouched when every incident edge is an Isolator edge, so
    isolated vertices count.
    """
    leaves = frozenset(frozen_leaves)
    total = non_leaf = 0
    for v in range(g.n):
        if all(g.claims[e] == Claim.ISOLATOR for e in g.incident[v]):
            total += 1
            if v not in leaves:
                non_leaf += 1
    return total, non_leaf


# text format: "# comment", then "n m", then m lines "u v [U|T|I]"


def parse_graph(text: str) -> PartiallyPlayedGraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    data = [(i + 1, ln) for i, ln in enumerate(lines) if ln]
    if not data:
        raise GraphError("empty graph file: expected a header line 'n m'")
    lineno, header = data[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphError(f"line {lineno}: header must be 'n m', got {header!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphError(f"line {lineno}: header must hold two integers, got {header!r}") from None
    body = data[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges but {len(body)} edge lines follow")
    items = []
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"line {lineno}: expected 'u v [U|T|I]', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: vertex ids must be integers, got {ln!r}") from None
        c = Claim.parse(parts[2]) if len(parts) == 3 else Claim.UNCLAIMED
        items.append((u, v, c))
    try:
        return build_graph(items, n)
    except GraphError as exc:
        raise GraphError(f"invalid graph: {exc}") from None


def format_graph(g: PartiallyPlayedGraph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {ln}" for ln in comment.splitlines())
    out.append(f"{g.n} {g.m}")
    out.extend(f"{u} {v} {c.letter}" for (u, v), c in zip(g.edges, g.claims))
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> PartiallyPlayedGraph:
    return parse_graph(Path(path).read_text())


def write_graph(g: PartiallyPlayedGraph, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_graph(g, comment))
