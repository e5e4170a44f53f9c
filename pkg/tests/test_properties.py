import random

from hypothesis import given, settings
from hypothesis import strategies as st

from toucher_isolator.game import Variant, current_score, format_transcript, new_game, parse_transcript, replay
from toucher_isolator.generators import disjoint_union, prufer_decode
from toucher_isolator.graph import Claim, build_graph, find_loci, format_graph, parse_graph, stats
from toucher_isolator.harness import random_relabel
from toucher_isolator.solver import optimal_score
from toucher_isolator.surgery import SurgeryDelta, remove_length1_components

claims = st.sampled_from(list(Claim))


@st.composite
def trees(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    seq = draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))
    return build_graph(prufer_decode(seq, n), n)


@st.composite
def forests(draw, max_parts=3, max_n=6):
    parts = draw(st.lists(trees(max_n), min_size=1, max_size=max_parts))
    return disjoint_union(*parts)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=10)) if pairs else []
    marks = draw(st.lists(claims, min_size=len(chosen), max_size=len(chosen)))
    return build_graph([(u, v, c) for (u, v), c in zip(chosen, marks)], n)


@given(graphs())
def test_text_round_trip(g):
    assert parse_graph(format_graph(g)) == g
    assert format_graph(parse_graph(format_graph(g))) == format_graph(g)


@given(forests())
def test_loci_partition_edges(g):
    seen = [e for loc in find_loci(g) for e in loc.edges]
    assert sorted(seen) == list(range(g.m))


@given(forests())
def test_leaf_identity(g):
    s = stats(g)
    big = [d for d in g.degrees if d >= 3]
    assert s.l == sum(big) - 2 * len(big) + 2 * s.k


@given(forests())
def test_potential_recount(g):
    res = remove_length1_components(g)
    assert res.delta == SurgeryDelta.between(g, res.graph)


@settings(max_examples=40, deadline=None)
@given(forests(max_parts=2, max_n=5), st.integers(0, 10**6), st.sampled_from(list(Variant)))
def test_relabel_invariance(g, seed, variant):
    h = random_relabel(g, random.Random(seed))
    assert optimal_score(g, variant) == optimal_score(h, variant)


def _bounds(state):
    g = state.graph
    counted = state.counted
    touched = {v for e in g.edges_with(Claim.TOUCHER) for v in g.edges[e]}
    isolated = sum(1 for v in counted if all(g.claims[e] == Claim.ISOLATOR for e in g.incident[v]))
    return isolated, sum(1 for v in counted if v not in touched)


@settings(deadline=None)
@given(forests(), st.integers(0, 10**6), st.sampled_from(list(Variant)))
def test_replay_and_monotone_bounds(g, seed, variant):
    rng = random.Random(seed)
    start = state = new_game(g, variant)
    lo, hi = _bounds(state)
    while not state.is_terminal:
        state = state.play(rng.choice(state.legal_moves()))
        new_lo, new_hi = _bounds(state)
        assert lo <= new_lo <= new_hi <= hi
        lo, hi = new_lo, new_hi
    assert lo == hi == current_score(state)
    assert replay(start, parse_transcript(format_transcript(state, start))) == state
