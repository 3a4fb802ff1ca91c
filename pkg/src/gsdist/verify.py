"""Cross-checks of graph rules, schedules and Z-frames against the stabilizer oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from gsdist.graph import LabeledGraph, local_complement, random_graph
from gsdist.noise import PAULIS, NoiseModel, compile_schedule, noise_stream
from gsdist.oracle import StabilizerTableau, stabilizer_equal
from gsdist.schedule import Schedule
from gsdist.solver import ScSystem, best_system, greedy_system, trivial_system


def _ensure(T: StabilizerTableau, q: int) -> None:
    if q not in T.labels:
        T.add_qubit(q)


def oracle_measure_z(T: StabilizerTableau, v: int, rng: np.random.Generator) -> int:
    """Z measurement with the standard Z corrections on the former neighbors."""
    nb = T.graph_neighbors(v)
    out = T.measure("Z", v, rng=rng)
    if out:
        for w in nb:
            T.apply_pauli("Z", w)
    return out


def run_schedule_oracle(
    schedule: Schedule,
    injections: Mapping[int, int] | None = None,
    rng: np.random.Generator | None = None,
    model: NoiseModel = NoiseModel(),
) -> StabilizerTableau:
    """Execute ``schedule`` on the tableau, applying injected Paulis as gates.

    ``injections`` maps noise-location index to a Pauli index into ``XYZ``;
    locations follow :func:`gsdist.noise.noise_stream`. Idle locations only
    dephase, so any hit there applies Z.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    injections = injections or {}
    steps, kinds = noise_stream(schedule, model)
    T = StabilizerTableau.plus_state(schedule.outputs)
    for st in steps:
        for q in st[1:] if st[0] != "N" else st[2:]:
            _ensure(T, q)
        if st[0] == "CZ":
            T.apply_cz(st[1], st[2])
        elif st[0] == "LC":
            T.apply_lc(st[1])
        elif st[0] == "MZ":
            oracle_measure_z(T, st[1], rng)
        elif st[1] in injections:
            basis = "Z" if kinds[st[1]] == 1 else PAULIS[injections[st[1]]]
            T.apply_pauli(basis, st[2])
    return T


def expected_tableau(target: LabeledGraph, z_qubits=()) -> StabilizerTableau:
    T = StabilizerTableau.from_graph(target)
    for q in z_qubits:
        T.apply_pauli("Z", q)
    return T


def schedule_matches_oracle(schedule: Schedule, rng: np.random.Generator | None = None) -> bool:
    """Noiseless oracle run lands exactly on the target graph state."""
    target = schedule.target if schedule.target is not None else schedule.replay_graph()
    return stabilizer_equal(run_schedule_oracle(schedule, rng=rng), expected_tableau(target))


def frame_matches_oracle(
    schedule: Schedule,
    injections: Mapping[int, int],
    rng: np.random.Generator | None = None,
    model: NoiseModel = NoiseModel(),
) -> bool:
    """Frame propagation predicts the oracle's final ``Z^b |G>`` exactly."""
    c = compile_schedule(schedule, model)
    frame = c.run(injections)
    zq = [q for q, i in c.bit_of.items() if (frame >> i) & 1]
    target = schedule.target if schedule.target is not None else schedule.replay_graph()
    got = run_schedule_oracle(schedule, injections, rng, model)
    return stabilizer_equal(got, expected_tableau(target, zq))


# -- suites ---------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.checked} checks, {len(self.failures)} mismatches"


def random_system(G: LabeledGraph, rng: np.random.Generator) -> ScSystem:
    """One of several valid systems for ``G``, chosen at random."""
    makers = [trivial_system, greedy_system, best_system]
    return makers[int(rng.integers(len(makers)))](G)


def graph_rule_suite(
    n_max: int,
    samples: int,
    seed: int,
    lc_rule: Callable[[LabeledGraph, int], LabeledGraph] = local_complement,
) -> SuiteResult:
    """Graph rules for CZ, LC and Z measurement against the tableau."""
    res = SuiteResult("graph rules vs oracle")
    rng = np.random.default_rng(seed)
    for i in range(samples):
        n = int(rng.integers(2, n_max + 1))
        gseed = int(rng.integers(2**31))
        G = random_graph(n, 0.5, gseed)
        v = int(rng.integers(n))
        kind = ("CZ", "LC", "MZ")[i % 3]
        T = StabilizerTableau.from_graph(G)
        if kind == "CZ":
            w = (v + 1 + int(rng.integers(n - 1))) % n
            T.apply_cz(v, w)
            H = G.copy()
            H.cz_(v, w)
        elif kind == "LC":
            T.apply_lc(v)
            H = lc_rule(G, v)
        else:
            oracle_measure_z(T, v, rng)
            H = G.copy()
            H.remove_vertex_(v)
        res.checked += 1
        if not stabilizer_equal(T, StabilizerTableau.from_graph(H)):
            res.failures.append(f"{kind} at {v} on gnp:{n},0.5,{gseed}")
    return res


def schedule_suite(n_max: int, samples: int, seed: int) -> SuiteResult:
    """Serial, parallel and factory schedules reach the target exactly."""
    from gsdist.parallel import parallel_distribute
    from gsdist.protocol import baseline_factory, distribute

    res = SuiteResult("schedules vs oracle")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        n = int(rng.integers(2, n_max + 1))
        gseed = int(rng.integers(2**31))
        p = round(float(rng.uniform(0.2, 0.8)), 3)
        G = random_graph(n, p, gseed)
        hub = None if rng.random() < 0.25 else int(rng.integers(n))
        base = G.isolate(hub) if hub is not None else G
        system = random_system(base, rng)
        for label, sched in (
            ("sc", distribute(G, system, hub_vertex=hub)[0]),
            ("sc-parallel", parallel_distribute(G, system, hub_vertex=hub)[0]),
            ("factory", baseline_factory(G, parallel=bool(rng.integers(2)))[0]),
        ):
            res.checked += 1
            if not schedule_matches_oracle(sched, rng):
                res.failures.append(f"{label} on gnp:{n},{p},{gseed} hub={hub}")
    return res


def frame_suite(n_max: int, samples: int, seed: int, p_hit: float = 0.15) -> SuiteResult:
    """Random Pauli injections: frame prediction vs full oracle run.

    ``checked`` counts sampled noise locations (every location is either hit
    or left clean, and both outcomes are compared).
    """
    from gsdist.parallel import parallel_distribute
    from gsdist.protocol import baseline_factory, distribute

    res = SuiteResult("Z-frame vs oracle")
    rng = np.random.default_rng(seed)
    for i in range(samples):
        n = int(rng.integers(2, n_max + 1))
        gseed = int(rng.integers(2**31))
        G = random_graph(n, 0.5, gseed)
        maker = i % 3
        if maker == 0:
            sched = distribute(G)[0]
        elif maker == 1:
            sched = parallel_distribute(G)[0]
        else:
            sched = baseline_factory(G, parallel=bool(rng.integers(2)))[0]
        model = NoiseModel(noise_on_measure=bool(rng.random() < 0.8))
        n_loc = len(noise_stream(sched, model)[1])
        hit = np.flatnonzero(rng.random(n_loc) < p_hit)
        inj = {int(h): int(rng.integers(3)) for h in hit}
        res.checked += n_loc
        if not frame_matches_oracle(sched, inj, rng, model):
            res.failures.append(f"{sched.name} on gnp:{n},0.5,{gseed} injections={sorted(inj.items())}")
    return res


def run_all(n_max: int = 8, samples: int = 200, seed: int = 0) -> list[SuiteResult]:
    if n_max > 10:
        raise ValueError("oracle suites are limited to n_max <= 10")
    return [
        graph_rule_suite(n_max, samples, seed),
        schedule_suite(n_max, max(1, samples // 4), seed + 1),
        frame_suite(n_max, max(1, samples // 4), seed + 2),
    ]
