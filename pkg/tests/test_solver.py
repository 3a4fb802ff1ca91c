from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import all_graphs, naive_c2
from gsdist.errors import SizeLimitExceeded, UnsupportedClass
from gsdist.graph import (
    LabeledGraph,
    complete_bipartite,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    path_graph,
    random_graph,
    star_graph,
)
from gsdist.solver import (
    ScSystem,
    best_system,
    c2_report,
    closed_form_for_graph,
    closed_form_system,
    detect_class,
    elimination_system,
    exact_min_system,
    greedy_system,
    replay,
    trivial_system,
)


def builds(system: ScSystem, G: LabeledGraph) -> bool:
    return replay(system) == G


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exact_matches_bfs_on_every_small_graph(n):
    for G in all_graphs(n):
        s = exact_min_system(G)
        assert builds(s, G)
        assert s.d == naive_c2(G)


def test_exact_matches_bfs_on_sampled_five_vertex_graphs():
    for seed in range(25):
        G = random_graph(5, 0.5, seed)
        assert exact_min_system(G).d == naive_c2(G)


@pytest.mark.parametrize("maker", [trivial_system, greedy_system, elimination_system, best_system])
@pytest.mark.parametrize("seed", range(8))
def test_every_method_builds_target(maker, seed):
    G = random_graph(9, 0.5, seed)
    s = maker(G)
    assert builds(s, G)
    if maker in (elimination_system, best_system):
        assert s.d <= max(G.n - 1, 0)
    if maker is greedy_system:
        assert s.d <= 2 * G.num_edges


@pytest.mark.parametrize("seed", range(10))
def test_greedy_never_beats_exact(seed):
    G = random_graph(7, 0.5, seed)
    assert greedy_system(G).d >= exact_min_system(G).d


def test_exact_refuses_large_graphs():
    with pytest.raises(SizeLimitExceeded):
        exact_min_system(complete_graph(9))


@pytest.mark.parametrize(
    "G,kind,d",
    [
        (complete_graph(7), "complete", 1),
        (complete_bipartite(3, 4), "mpartite", 3),
        (complete_multipartite([2, 2, 3]), "mpartite", 4),
        (star_graph(6), "mpartite", 2),
        (cycle_graph(6), "cycle", 4),
        (path_graph(5), "path", 4),
        (LabeledGraph.empty(4), "empty", 0),
    ],
)
def test_closed_forms(G, kind, d):
    assert detect_class(G) == kind
    s = closed_form_for_graph(G)
    assert builds(s, G) and s.d == d and s.provenance == "closed_form"


def test_closed_form_by_name():
    s = closed_form_system("bipartite", 3, 3)
    assert s.d == 3 and builds(s, complete_bipartite(3, 3))
    assert closed_form_system("complete:5").d == 1
    with pytest.raises(UnsupportedClass):
        closed_form_system("gnp", 5, 0.5, 1)
    with pytest.raises(UnsupportedClass):
        closed_form_for_graph(random_graph(7, 0.5, 3), "cycle")


def test_text_roundtrip():
    s = best_system(random_graph(7, 0.5, 11))
    t = ScSystem.from_text(s.to_text(), s.provenance)
    assert t.sets == s.sets and t.n == s.n


def test_system_rejects_singletons():
    with pytest.raises(ValueError):
        ScSystem(3, (frozenset({1}),))
    with pytest.raises(ValueError):
        ScSystem(3, (frozenset({1, 5}),))


def test_report_on_known_graphs():
    rep = c2_report(complete_graph(5))
    assert (rep.lower, rep.upper, rep.exact) == (1, 1, 1)
    assert rep.avg_schmidt_rank == Fraction(2**5 - 2, 2**5)
    empty = c2_report(LabeledGraph.empty(4))
    assert empty.exact == 0 and empty.avg_schmidt_rank == 0
    rep = c2_report(path_graph(4))
    assert rep.exact == 3 and rep.lower_is_min_rank
    # cut ranks of the 16 subsets of a 4-path: 0 twice, 2 for {0,2}/{1,3}/{0,3}/{1,2}, else 1
    assert rep.avg_schmidt_rank == Fraction(18, 16)
    assert rep.upper_bound_ok and rep.cut_rank_bound_ok and rep.dichotomy_ok


@pytest.mark.parametrize("seed", range(10))
def test_report_bounds_are_ordered(seed):
    rep = c2_report(random_graph(7, 0.5, seed))
    assert rep.lower <= rep.exact <= rep.upper <= 6
    assert rep.exact in (rep.lower, rep.lower + 1)


def test_report_without_exact_on_larger_graph():
    rep = c2_report(random_graph(14, 0.5, 1))
    assert rep.exact is None and rep.cut_rank_bound_ok is None
    assert rep.lower <= rep.upper <= 13
