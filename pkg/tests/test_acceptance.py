"""Acceptance criteria, one pass/fail line each (see the summary section of the run).

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from conftest import all_graphs
from gsdist.gf2 import expected_cut_rank, min_rank_f2
from gsdist.graph import (
    complete_bipartite,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    path_graph,
    random_graph,
    wheel_graph,
)
from gsdist.noise import NoiseModel, estimate_fidelity
from gsdist.parallel import ghz_log_depth, ghz_round_bound, parallel_distribute
from gsdist.protocol import baseline_factory, clique_protocol, distribute
from gsdist.solver import best_system, closed_form_for_graph, exact_min_system, replay
from gsdist.verify import frame_suite, random_system, schedule_matches_oracle

TRIALS = 10_000
SEED = 1


def test_criterion_1_wheel(criterion):
    W = wheel_graph(5)
    s = exact_min_system(W)
    criterion("1", s.d == 3 and replay(s) == W, f"exact d={s.d} for wheel:5, replay ok={replay(s) == W}")


def _closed_form_cases():
    for n in range(2, 13):
        yield f"path:{n}", path_graph(n), "path", n - 1
    for n in range(3, 13):
        yield f"cycle:{n}", cycle_graph(n), "cycle", n - 2
    for n in range(2, 13):
        yield f"complete:{n}", complete_graph(n), "complete", 1
    for a in range(2, 7):
        for b in range(a, 13 - a):
            yield f"bipartite:{a},{b}", complete_bipartite(a, b), "mpartite", 3
    for parts in ([2, 2, 2], [2, 3, 3], [3, 3, 3], [2, 2, 2, 2], [3, 3, 3, 3], [2, 2, 2, 2, 2, 2]):
        yield f"mpartite:{','.join(map(str, parts))}", complete_multipartite(parts), "mpartite", len(parts) + 1


def test_criterion_2_closed_forms(criterion):
    size_bad, not_optimal, checked = [], [], 0
    for name, G, kind, want in _closed_form_cases():
        s = closed_form_for_graph(G, kind)
        if s.d != want or replay(s) != G:
            size_bad.append(f"{name}: d={s.d} want {want}")
        if G.n <= 8:
            checked += 1
            exact = exact_min_system(G).d
            if exact != s.d:
                not_optimal.append(f"{name}: closed {s.d} > exact {exact}")
    detail = (
        f"sizes wrong={len(size_bad)} {size_bad[:4]}; optimality checked on {checked} graphs, "
        f"not optimal={len(not_optimal)} {not_optimal}"
    )
    criterion("2", not size_bad and not not_optimal, detail)


def _dichotomy_sample():
    for n in range(1, 6):
        yield from all_graphs(n)
    rng = np.random.default_rng(SEED)
    for _ in range(500):
        n = int(rng.integers(6, 8))
        yield random_graph(n, 0.5, int(rng.integers(2**31)))


def test_criterion_3_dichotomy(criterion):
    bad = total = 0
    for G in _dichotomy_sample():
        total += 1
        mr, _ = min_rank_f2(G.adjacency_matrix(range(G.n)))
        c2 = exact_min_system(G).d
        if G.num_edges and c2 not in (mr, mr + 1):
            bad += 1
    criterion("3", bad == 0, f"{total} graphs, {bad} violations of c2 in {{mr, mr+1}}")


def test_criterion_4_bounds(criterion):
    upper_bad = lower_bad = total = 0
    for G in _dichotomy_sample():
        if not G.num_edges:
            continue
        total += 1
        if best_system(G).d > G.n - 1:
            upper_bad += 1
        E = expected_cut_rank(G)
        assert isinstance(E, Fraction)
        if not exact_min_system(G).d > E:
            lower_bad += 1
    criterion("4", upper_bad == 0 and lower_bad == 0,
              f"{total} graphs with edges; c2 > n-1: {upper_bad}; c2 <= E_r: {lower_bad}")


def test_criterion_5_clique_counts(criterion):
    wrong = []
    for k in range(2, 13):
        _, rep = clique_protocol(k)
        if (rep.cz_count, rep.lc_count) != (2 * k - 2, k):
            wrong.append((k, rep.cz_count, rep.lc_count))
    criterion("5", not wrong, f"k=2..12, mismatches {wrong}")


def test_criterion_6_end_state(criterion):
    rng = np.random.default_rng(SEED)
    bad: list[str] = []
    pairs = 0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        gseed = int(rng.integers(2**31))
        G = random_graph(n, float(rng.uniform(0.2, 0.8)), gseed)
        hub = None if rng.random() < 0.25 else int(rng.integers(n))
        system = random_system(G.isolate(hub) if hub is not None else G, rng)
        pairs += 1
        for label, sched in (
            ("serial", distribute(G, system, hub_vertex=hub)[0]),
            ("parallel", parallel_distribute(G, system, hub_vertex=hub)[0]),
            ("factory", baseline_factory(G, parallel=bool(rng.integers(2)))[0]),
        ):
            if not schedule_matches_oracle(sched, rng):
                bad.append(f"{label} n={n} seed={gseed} hub={hub}")
    criterion("6", not bad, f"{pairs} (G, system) pairs x 3 protocols, {len(bad)} mismatches {bad[:3]}")


def test_criterion_7_frames(criterion):
    checked, failures, seed = 0, [], SEED
    while checked < 10_000:
        res = frame_suite(8, 30, seed)
        checked += res.checked
        failures += res.failures
        seed += 1
    criterion("7", not failures, f"{checked} sampled noise locations, {len(failures)} mismatches")


def _exponent(ns, values) -> float:
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def test_criterion_8_rounds(criterion):
    ns = list(range(8, 33, 2))
    clique = [distribute(complete_graph(n))[1].rounds for n in ns]
    bip = [distribute(complete_bipartite(n // 2, n // 2))[1].rounds for n in ns]
    e_clique, e_bip = _exponent(ns, clique), _exponent(ns, bip)
    linear = abs(e_clique - 1) <= 0.1 and abs(e_bip - 1) <= 0.1
    over_bound = [n for n in range(2, 129) if ghz_log_depth(n).depth > ghz_round_bound(n)]
    slower = [
        n for n in range(8, 33) if parallel_distribute(complete_graph(n))[1].rounds >= distribute(complete_graph(n))[1].rounds
    ]
    detail = (
        f"exponents complete={e_clique:.3f} bipartite={e_bip:.3f}; GHZ over bound at {over_bound}; "
        f"parallel not faster at n={slower}"
    )
    criterion("8", linear and not over_bound and not slower, detail)


def _fid(sched, p):
    return estimate_fidelity(sched, NoiseModel(p), TRIALS, SEED)


def _separated(hi, lo) -> bool:
    """``hi`` above ``lo`` with non-overlapping 95% intervals."""
    return hi.mean - hi.ci95_halfwidth > lo.mean + lo.ci95_halfwidth


def _fmt(e) -> str:
    return f"{e.mean:.4f}+-{e.ci95_halfwidth:.4f}"


def test_criterion_9a_small_ghz(criterion):
    sc, fac = distribute(complete_graph(3))[0], baseline_factory(complete_graph(3))[0]
    wins, parts = 0, []
    for p in (0.003, 0.006, 0.009):
        a, b = _fid(sc, p), _fid(fac, p)
        wins += a.mean >= b.mean and _separated(a, b)
        parts.append(f"p={p}: sc {_fmt(a)} factory {_fmt(b)}")
    criterion("9a", wins >= 2, f"{wins}/3 separated; " + "; ".join(parts))


def test_criterion_9b_ghz_scaling(criterion):
    ok, parts = True, []
    for n in (10, 20, 30):
        G = complete_graph(n)
        a, b = _fid(distribute(G)[0], 1e-4), _fid(baseline_factory(G)[0], 1e-4)
        ok &= a.mean > b.mean and (n < 20 or _separated(a, b))
        parts.append(f"n={n}: sc {_fmt(a)} factory {_fmt(b)}")
    criterion("9b", ok, "; ".join(parts))


def test_criterion_9c_small_bipartite(criterion):
    G = complete_bipartite(3, 3)
    a, b = _fid(distribute(G)[0], 1e-3), _fid(baseline_factory(G)[0], 1e-3)
    criterion("9c", b.mean >= a.mean, f"bipartite:3,3 sc {_fmt(a)} factory {_fmt(b)}")


def test_criterion_9d_large_bipartite(criterion):
    G = complete_bipartite(10, 10)
    a, b = _fid(distribute(G)[0], 1e-3), _fid(baseline_factory(G)[0], 1e-3)
    criterion("9d", a.mean > b.mean and _separated(a, b), f"bipartite:10,10 sc {_fmt(a)} factory {_fmt(b)}")


def test_criterion_9e_serial_vs_parallel(criterion):
    G = complete_graph(20)
    a, b = _fid(distribute(G)[0], 1e-4), _fid(parallel_distribute(G)[0], 1e-4)
    criterion("9e", a.mean >= b.mean, f"n=20 serial {_fmt(a)} parallel {_fmt(b)}")


def test_criterion_10_resources(criterion):
    wrong = []
    for n in (4, 10, 30):
        for G in (complete_graph(n), random_graph(n, 0.5, n)):
            sc, fac = distribute(G)[1], baseline_factory(G)[1]
            got = (sc.bell_pairs, sc.central_qubit_highwater <= n, fac.bell_pairs, fac.central_qubit_highwater)
            if got != (n - 1, True, n, 2 * n):
                wrong.append((n, got))
    criterion("10", not wrong, f"n in (4, 10, 30), mismatches {wrong}")


CLI_RUNS = [
    ["solve", "wheel:5"],
    ["distribute", "bipartite:4,4", "--protocol", "sc-parallel"],
    ["distribute", "gnp:8,0.5,3", "--protocol", "factory"],
    ["sweep", "complete:3", "--vary", "p:0:0.01:3", "--protocols", "sc,factory", "--trials", "2000", "--seed", "7"],
    ["sweep", "bipartite:{h},{h}", "--vary", "n:4:8:2", "--p", "0.002", "--pmem", "0.001", "--trials", "500"],
    ["verify", "--n-max", "6", "--samples", "40", "--seed", "3"],
]


def _cli(argv):
    return subprocess.run([sys.executable, "-m", "gsdist.cli", *argv], capture_output=True, check=False).stdout


def test_criterion_11_determinism(criterion):
    differ, empty = [], []
    for argv in CLI_RUNS:
        first, second = _cli(argv), _cli(argv)
        if first != second:
            differ.append(" ".join(argv))
        if not first:
            empty.append(" ".join(argv))
    detail = f"{len(CLI_RUNS)} invocations run twice, differing: {differ}, empty output: {empty}"
    criterion("11", not differ and not empty, detail)
