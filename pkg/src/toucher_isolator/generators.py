"""Graph families and exhaustive enumeration of small trees and forests."""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .graph import GraphError, PartiallyPlayedGraph, build_graph

MAX_TREE_N = 12
MAX_FOREST_M = 10

FAMILIES = ("path", "cycle", "star", "k_copies_P3", "random_tree", "all_trees", "all_forests", "cubic")


def path(n: int) -> PartiallyPlayedGraph:
    if n < 1:
        raise GraphError("a path needs at least one vertex")
    return build_graph([(i, i + 1) for i in range(n - 1)], n)


def cycle(n: int) -> PartiallyPlayedGraph:
    if n < 3:
        raise GraphError("a cycle needs at least three vertices")
    return build_graph([(i, (i + 1) % n) for i in range(n)], n)


def star(n: int) -> PartiallyPlayedGraph:
    """Center 0 joined to leaves 1..n-1."""
    if n < 1:
        raise GraphError("a star needs at least one vertex")
    return build_graph([(0, i) for i in range(1, n)], n)


def k_copies_p3(k: int) -> PartiallyPlayedGraph:
    if k < 1:
        raise GraphError("k must be at least 1")
    edges = []
    for c in range(k):
        edges += [(3 * c, 3 * c + 1), (3 * c + 1, 3 * c + 2)]
    return build_graph(edges, 3 * k)


def disjoint_union(*graphs: PartiallyPlayedGraph) -> PartiallyPlayedGraph:
    items = []
    offset = 0
    for g in graphs:
        items += [(u + offset, v + offset, c) for (u, v), c in zip(g.edges, g.claims)]
        offset += g.n
    return build_graph(items, offset)


def prufer_decode(seq: list[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree on ``0..n-1`` with Pruefer sequence ``seq``."""
    if n == 1:
        return []
    if len(seq) != n - 2:
        raise GraphError("sequence length must be n - 2")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    heap = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(heap)
    edges = []
    for x in seq:
        leaf = heapq.heappop(heap)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(heap, x)
    u, v = heapq.heappop(heap), heapq.heappop(heap)
    edges.append((u, v))
    return edges


def random_tree(n: int, seed: int) -> PartiallyPlayedGraph:
    """Uniform over labeled trees on n vertices (not over isomorphism classes)."""
    if n < 1:
        raise GraphError("a tree needs at least one vertex")
    rng = random.Random(seed)
    seq = [rng.randrange(n) for _ in range(max(n - 2, 0))]
    return build_graph(prufer_decode(seq, n), n)


def tree_centers(g: PartiallyPlayedGraph) -> list[int]:
    degree = list(g.degrees)
    layer = [v for v in range(g.n) if degree[v] <= 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in g.neighbors(v):
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_code(g: PartiallyPlayedGraph, root: int) -> str:
    # iterative post-order so deep paths do not hit the recursion limit
    parent = {root: -1}
    order = [root]
    for v in order:
        for w in g.neighbors(v):
            if w not in parent:
                parent[w] = v
                order.append(w)
    codes: dict[int, list[str]] = {v: [] for v in order}
    out = ""
    for v in reversed(order):
        out = "(" + "".join(sorted(codes[v])) + ")"
        if parent[v] >= 0:
            codes[parent[v]].append(out)
    return out


def canonical_code(g: PartiallyPlayedGraph) -> str:
    """Isomorphism-invariant code of a free tree (claims ignored)."""
    if not g.is_tree():
        raise GraphError("canonical code needs a tree")
    return min(_rooted_code(g, c) for c in tree_centers(g))


def forest_code(g: PartiallyPlayedGraph) -> tuple[str, ...]:
    if not g.is_forest():
        raise GraphError("forest code needs a forest")
    parts = []
    for comp in g.components:
        idx = {v: i for i, v in enumerate(comp)}
        sub = [(idx[u], idx[v]) for u, v in g.edges if u in idx]
        parts.append(canonical_code(build_graph(sub, len(comp))))
    return tuple(sorted(parts))


@lru_cache(maxsize=None)
def _trees(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    if n == 1:
        return ((),)
    seen = {}
    for edges in _trees(n - 1):
        for v in range(n - 1):
            grown = edges + ((v, n - 1),)
            code = canonical_code(build_graph(grown, n))
            seen.setdefault(code, grown)
    return tuple(seen[c] for c in sorted(seen))


def all_trees(n: int) -> list[PartiallyPlayedGraph]:
    """One representative per isomorphism class of trees on n vertices."""
    if not 1 <= n <= MAX_TREE_N:
        raise GraphError(f"tree enumeration supports 1 <= n <= {MAX_TREE_N}")
    return [build_graph(e, n) for e in _trees(n)]


def all_forests(m: int) -> list[PartiallyPlayedGraph]:
    """One representative per isomorphism class of forests with m edges and
    no isolated vertices."""
    if not 0 <= m <= MAX_FOREST_M:
        raise GraphError(f"forest enumeration supports 0 <= m <= {MAX_FOREST_M}")
    pool = [(e, i, g) for e in range(1, m + 1) for i, g in enumerate(all_trees(e + 1))]
    out = []

    def grow(budget: int, start: int, parts: list[PartiallyPlayedGraph]) -> None:
        if budget == 0:
            out.append(disjoint_union(*parts) if parts else build_graph([], 0))
            return
        for j in range(start, len(pool)):
            e, _, g = pool[j]
            if e <= budget:
                grow(budget - e, j, parts + [g])

    grow(m, 0, [])
    return out


def cubic_graphs() -> dict[str, PartiallyPlayedGraph]:
    """A few small 3-regular graphs for exploration."""
    k4 = build_graph([(a, b) for a in range(4) for b in range(a + 1, 4)], 4)
    k33 = build_graph([(a, b) for a in range(3) for b in range(3, 6)], 6)
    prism = build_graph([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)], 6)
    petersen = build_graph(
        [(i, (i + 1) % 5) for i in range(5)]
        + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        + [(i, i + 5) for i in range(5)],
        10,
    )
    return {"K4": k4, "K33": k33, "prism": prism, "petersen": petersen}


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None = None
    k: int | None = None
    m: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise GraphError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")


def make(spec: FamilySpec) -> Iterator[tuple[str, PartiallyPlayedGraph]]:
    """Yield ``(name, graph)`` pairs for a family."""
    f = spec.family

    def need(value, what):
        if value is None:
            raise GraphError(f"family {f} needs {what}")
        return value

    if f == "path":
        n = need(spec.n, "n")
        yield f"P{n}", path(n)
    elif f == "cycle":
        n = need(spec.n, "n")
        yield f"C{n}", cycle(n)
    elif f == "star":
        n = need(spec.n, "n")
        yield f"S{n}", star(n)
    elif f == "k_copies_P3":
        k = need(spec.k if spec.k is not None else spec.n, "k")
        yield f"{k}P3", k_copies_p3(k)
    elif f == "random_tree":
        n = need(spec.n, "n")
        yield f"T{n}-seed{spec.seed}", random_tree(n, spec.seed)
    elif f == "all_trees":
        n = need(spec.n, "n")
        for i, g in enumerate(all_trees(n)):
            yield f"T{n}.{i}", g
    elif f == "all_forests":
        m = need(spec.m if spec.m is not None else spec.n, "m")
        for i, g in enumerate(all_forests(m)):
            yield f"F{m}.{i}", g
    else:
        yield from cubic_graphs().items()
