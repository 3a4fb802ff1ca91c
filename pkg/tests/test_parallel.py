from __future__ import annotations

import pytest

from gsdist.errors import InsufficientAux, InsufficientTargets
from gsdist.graph import complete_bipartite, complete_graph, random_graph, star_graph
from gsdist.parallel import (
    ParallelConfig,
    default_aux,
    ghz_double,
    ghz_log_depth,
    ghz_round_bound,
    parallel_distribute,
    plan_star,
)
from gsdist.protocol import distribute
from gsdist.schedule import ScheduleBuilder, cz, live_spans
from gsdist.verify import schedule_matches_oracle


def test_doubling_block_toggles_center_edges():
    b = ScheduleBuilder(initial=range(6))
    b.add_round([cz(0, 1)])
    b.extend(ghz_double(0, [1], [2, 3, 4, 5]))
    assert b.graph == star_graph(6)


def test_doubling_block_limits():
    with pytest.raises(InsufficientTargets):
        ghz_double(0, [1], [2, 3, 4, 5, 6])
    with pytest.raises(InsufficientTargets):
        ghz_double(0, [1], [])


@pytest.mark.parametrize("n", [2, 3, 5, 8, 16, 33, 64, 100])
def test_ghz_log_depth_within_bound(n):
    s = ghz_log_depth(n)
    s.check_disjoint()
    assert s.replay_graph() == star_graph(n)
    assert s.depth <= ghz_round_bound(n)


def test_ghz_log_depth_beats_linear_for_large_n():
    assert ghz_log_depth(64).depth < 63
    assert schedule_matches_oracle(ghz_log_depth(9))


def test_plan_star_short_queue_is_direct():
    rounds, leaves = plan_star(0, [1, 2], [(3, True), (4, False)])
    assert len(rounds) == 2 and leaves == [1, 2, 3]


def test_aux_defaults():
    assert default_aux(2) == 2
    assert default_aux(16) == 4
    assert ParallelConfig(aux_count=5).aux_for(100) == 5
    with pytest.raises(InsufficientAux):
        ParallelConfig(aux_count=0)


@pytest.mark.parametrize("n", [4, 8, 10, 16, 32])
def test_parallel_never_slower_than_serial_on_cliques(n):
    G = complete_graph(n)
    par = parallel_distribute(G)[1].rounds
    ser = distribute(G)[1].rounds
    assert par <= ser
    if n >= 8:
        assert par < ser


@pytest.mark.parametrize("seed", range(12))
def test_parallel_random_graphs(seed):
    n = 3 + seed % 7
    G = random_graph(n, 0.5, seed)
    hub = None if seed % 3 == 0 else 0
    sched, rep = parallel_distribute(G, hub_vertex=hub)
    sched.check_disjoint()
    assert schedule_matches_oracle(sched)
    assert rep.rounds <= distribute(G, hub_vertex=hub)[1].rounds


@pytest.mark.parametrize("aux", [1, 2, 6])
def test_parallel_respects_aux_budget(aux):
    G = complete_bipartite(6, 6)
    sched, _ = parallel_distribute(G, cfg=ParallelConfig(aux_count=aux))
    helpers = [q for q in sched.qubits() if q > 2 * G.n]
    assert sched.replay_graph() == G
    # helpers are fresh per round, but never more than the budget alive at once
    spans = live_spans(sched)
    for r in range(sched.depth + 1):
        alive = [q for q in helpers if spans[q][0] <= r and (spans[q][1] is None or spans[q][1] >= r)]
        assert len(alive) <= aux
