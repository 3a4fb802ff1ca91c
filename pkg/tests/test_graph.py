from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsdist.errors import GraphSpecError, SelfLoop, UnknownVertex
from gsdist.graph import (
    GraphSpec,
    LabeledGraph,
    apply_cz,
    complete_bipartite,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    format_graph_text,
    load_graph,
    local_complement,
    measure,
    parse_generator,
    parse_graph_text,
    path_graph,
    random_graph,
    star_graph,
    subgraph_complement,
    wheel_graph,
)


def test_basic_construction():
    G = LabeledGraph([0, 1, 2], [(0, 1), (2, 1)])
    assert G.n == 3 and G.num_edges == 2
    assert G.edges == frozenset({(0, 1), (1, 2)})
    assert G.neighbors(1) == {0, 2}
    with pytest.raises(SelfLoop):
        LabeledGraph([0], [(0, 0)])
    with pytest.raises(UnknownVertex):
        G.neighbors(7)


def test_cz_toggles():
    G = path_graph(3)
    H = apply_cz(G, 0, 2)
    assert H.has_edge(0, 2)
    assert apply_cz(H, 0, 2) == G
    assert G == path_graph(3), "rules must not mutate their input"


def test_local_complement_star_center_gives_complete():
    assert local_complement(star_graph(5), 0) == complete_graph(5)
    assert local_complement(complete_graph(5), 0) == star_graph(5)


def test_local_complement_leaf_is_noop():
    G = star_graph(4)
    assert local_complement(G, 2) == G


@given(st.integers(2, 9), st.integers(0, 10**6), st.data())
@settings(max_examples=100, deadline=None)
def test_local_complement_is_involution(n, seed, data):
    G = random_graph(n, 0.5, seed)
    v = data.draw(st.integers(0, n - 1))
    assert local_complement(local_complement(G, v), v) == G


@given(st.integers(2, 9), st.integers(0, 10**6), st.data())
@settings(max_examples=100, deadline=None)
def test_subgraph_complement_is_involution_and_commutes(n, seed, data):
    G = random_graph(n, 0.5, seed)
    S = data.draw(st.sets(st.integers(0, n - 1)))
    T = data.draw(st.sets(st.integers(0, n - 1)))
    assert subgraph_complement(subgraph_complement(G, S), S) == G
    assert subgraph_complement(subgraph_complement(G, S), T) == subgraph_complement(subgraph_complement(G, T), S)


def test_subgraph_complement_examples():
    assert subgraph_complement(LabeledGraph.empty(4), range(4)) == complete_graph(4)
    assert subgraph_complement(complete_graph(3), [0, 1]) == LabeledGraph(range(3), [(0, 2), (1, 2)])


def test_measurements():
    H, rec = measure(path_graph(3), 1, "Z")
    assert H == LabeledGraph([0, 2]) and rec.basis == "Z"
    H, rec = measure(path_graph(3), 1, "Y")
    assert H == LabeledGraph([0, 2], [(0, 2)]) and rec.companion_lc == 1
    with pytest.raises(ValueError):
        measure(path_graph(3), 1, "X")


def test_generators():
    assert complete_graph(4).num_edges == 6
    assert complete_bipartite(2, 3).num_edges == 6
    assert complete_multipartite([2, 2, 2]).num_edges == 12
    assert cycle_graph(5).num_edges == 5
    assert path_graph(5).num_edges == 4
    W = wheel_graph(5)
    assert W.degree(0) == 4 and W.num_edges == 8
    assert star_graph(6).degree(0) == 5


def test_random_graph_is_deterministic():
    assert random_graph(10, 0.3, 42) == random_graph(10, 0.3, 42)
    assert random_graph(6, 0.0, 1).num_edges == 0
    assert random_graph(6, 1.0, 1) == complete_graph(6)


@pytest.mark.parametrize(
    "text,kind",
    [("complete:5", "complete"), ("bipartite:2,3", "bipartite"), ("mpartite:1,2,3", "mpartite"),
     ("gnp:6,0.5,7", "gnp"), ("wheel:5", "wheel")],
)
def test_parse_generator(text, kind):
    spec = parse_generator(text)
    assert isinstance(spec, GraphSpec) and spec.kind == kind


@pytest.mark.parametrize("bad", ["complete", "complete:x", "bipartite:3", "nope:3", "gnp:3,0.5"])
def test_parse_generator_errors(bad):
    with pytest.raises(GraphSpecError):
        parse_generator(bad)


def test_text_format_roundtrip(tmp_path):
    G = random_graph(7, 0.4, 5)
    text = format_graph_text(G)
    assert parse_graph_text(text) == G
    f = tmp_path / "g.txt"
    f.write_text("# comment\n" + text)
    assert load_graph(str(f))[0] == G
    with pytest.raises(GraphSpecError):
        parse_graph_text("3\n0 5\n")
    with pytest.raises(GraphSpecError):
        parse_graph_text("2\n1 1\n")
