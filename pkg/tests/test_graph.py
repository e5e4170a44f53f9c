import pytest

from toucher_isolator.generators import k_copies_p3, path, star
from toucher_isolator.graph import (
    Claim,
    GraphError,
    LocusKind,
    VertexClass,
    build_graph,
    classify_vertex,
    find_loci,
    format_graph,
    meta_leaf_edges,
    parse_graph,
    stats,
    untouched_counts,
)

T, I, U = Claim.TOUCHER, Claim.ISOLATOR, Claim.UNCLAIMED


def double_star():
    # u=0, v=1 big, joined through w=2; leaves 3,4 on u and 5,6 on v
    return build_graph([(0, 2), (2, 1), (0, 3), (0, 4), (1, 5), (1, 6)], 7)


def test_build_path():
    g = build_graph([(0, 1), (1, 2), (2, 3)], 4)
    assert g.m == 3 and g.n == 4
    assert set(g.claims) == {U}


def test_build_with_claim():
    g = build_graph([(0, 1, "T")], 2)
    assert g.claims == (T,)


@pytest.mark.parametrize(
    "edges, n",
    [([(0, 1), (0, 1)], 2), ([(1, 0), (0, 1)], 2), ([(0, 0)], 1), ([(0, 5)], 3)],
)
def test_build_rejects(edges, n):
    with pytest.raises(GraphError):
        build_graph(edges, n)


@pytest.mark.parametrize(
    "g, expected",
    [
        (path(4), (4, 3, 1, 2, 0, 1)),
        (k_copies_p3(2), (6, 4, 2, 4, 0, 0)),
        (path(2), (2, 1, 1, 2, 1, -1)),
    ],
)
def test_stats(g, expected):
    s = stats(g)
    assert (s.n, s.m, s.k, s.l, s.q, s.potential) == expected


def test_classify():
    assert classify_vertex(path(3), 1) is VertexClass.SMALL
    assert classify_vertex(star(4), 0) is VertexClass.BIG
    assert classify_vertex(build_graph([], 1), 0) is VertexClass.ISOLATED
    assert classify_vertex(path(3), 0) is VertexClass.LEAF


def test_loci_path():
    (loc,) = find_loci(path(5))
    assert loc.kind is LocusKind.PATH_COMPONENT and loc.length == 4


def test_loci_star():
    loci = find_loci(star(4))
    assert [l.kind for l in loci] == [LocusKind.TWIG] * 3
    assert all(l.length == 1 for l in loci)


def test_loci_double_star():
    loci = find_loci(double_star())
    kinds = sorted((l.kind.name, l.length) for l in loci)
    assert kinds == [("BRANCH", 2)] + [("TWIG", 1)] * 4


def test_twig_starts_at_big_end():
    g = build_graph([(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)], 6)
    twig = next(l for l in find_loci(g) if l.length == 3)
    assert twig.vertices[0] == 0 and twig.vertices[-1] == 5


def test_meta_leaf_edges():
    assert meta_leaf_edges(path(3)) == {0, 1}
    assert meta_leaf_edges(path(4).with_claims({1: T})) == {0, 2}
    assert meta_leaf_edges(path(3).with_claims({0: I})) == {1}


def test_untouched_counts():
    assert untouched_counts(path(3).with_claims({0: T, 1: I}))[0] == 1
    assert untouched_counts(path(2).with_claims({0: T}))[0] == 0
    g = path(4).with_claims({0: I, 1: I, 2: I})
    assert untouched_counts(g, {0, 3}) == (4, 2)


def test_isolated_vertex_counts_untouched():
    assert untouched_counts(build_graph([], 3)) == (3, 3)


def test_text_format():
    text = "# a comment\n4 3\n0 1 T\n1 2\n\n2 3 I\n"
    g = parse_graph(text)
    assert g.claims == (T, U, I)
    assert parse_graph(format_graph(g)) == g


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "3 2\n0 1\n", "2 1\n0 1 X\n", "2 1\n0 a\n", "2 1\n0 1\n1 0\n"],
)
def test_text_format_errors(text):
    with pytest.raises(GraphError):
        parse_graph(text)


def test_forest_checks():
    assert path(4).is_tree()
    assert k_copies_p3(2).is_forest() and not k_copies_p3(2).is_tree()
    assert not build_graph([(0, 1), (1, 2), (2, 0)], 3).is_forest()
