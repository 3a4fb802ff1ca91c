"""Monte Carlo fidelity under depolarizing gate noise and idle dephasing.

Any Pauli error on a graph state equals a product of Z operators, so a
run only needs to carry a bitstring ``b`` of pending Z errors. The final
state ``Z^b |G>`` is orthogonal to ``|G>`` unless ``b`` vanishes on the
outputs, so the fraction of error-free trials estimates the fidelity.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from gsdist.graph import LabeledGraph
from gsdist.schedule import GateOp, ResourceReport, Schedule, apply_primitive

PAULIS = ("X", "Y", "Z")
RESULT_COLUMNS = [
    "protocol", "n", "p_gate", "p_mem", "trials", "fidelity", "ci95", "seed",
    "rounds", "cz", "lc", "meas", "bell_pairs", "cc_bits", "central_qubits",
]


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing probability per touched qubit per op, dephasing per idle round."""

    p_gate: float = 0.0
    p_mem: float = 0.0
    noise_on_measure: bool = True

    def __post_init__(self) -> None:
        for name in ("p_gate", "p_mem"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class FidelityEstimate:
    mean: float
    trials: int
    ci95_halfwidth: float
    seed: int
    successes: int = 0


# -- per-op frame API ---------------------------------------------------------


@dataclass
class PauliFrame:
    """Pending Z errors on the live qubits of ``graph_view``."""

    z_bits: dict[int, int]
    graph_view: LabeledGraph

    @classmethod
    def zero(cls, graph: LabeledGraph) -> PauliFrame:
        return cls({q: 0 for q in graph.vertices}, graph.copy())

    def toggle(self, qubits: Iterable[int]) -> None:
        for q in qubits:
            self.z_bits[q] ^= 1

    def add_pauli(self, basis: str, q: int) -> None:
        """Fold a Pauli on ``q`` into the frame using the current graph."""
        nb = self.graph_view.neighbors(q)
        if basis == "X":
            self.toggle(nb)
        elif basis == "Y":
            self.toggle(nb | {q})
        elif basis == "Z":
            self.toggle([q])
        else:
            raise ValueError(f"unknown Pauli {basis!r}")

    def is_zero(self, qubits: Iterable[int] | None = None) -> bool:
        keys = self.z_bits if qubits is None else qubits
        return not any(self.z_bits[q] for q in keys)


def _frame_primitive(frame: PauliFrame, prim: tuple) -> None:
    g = frame.graph_view
    for q in prim[1:]:
        if q not in g:
            g.add_vertex_(q)
            frame.z_bits[q] = 0
    apply_primitive(g, prim)
    if prim[0] == "LC":
        v = prim[1]
        if frame.z_bits[v]:
            frame.toggle(g.neighbors(v))
    elif prim[0] == "MZ":
        del frame.z_bits[prim[1]]


def frame_update(frame: PauliFrame, op: GateOp) -> PauliFrame:
    """Apply ``op`` to the graph view and carry the frame through it.

    CZ commutes with Z. After a local complementation at ``v``, a pending
    Z on ``v`` also becomes Z on the new neighbors of ``v``. A Z
    measurement drops the measured bit.
    """
    for prim in op.primitives():
        _frame_primitive(frame, prim)
    return frame


def inject_noise(frame: PauliFrame, op: GateOp, model: NoiseModel, rng: np.random.Generator) -> PauliFrame:
    """Depolarize every surviving qubit ``op`` touched (call after ``frame_update``)."""
    for q in op.qubits:
        if q in frame.z_bits and rng.random() < model.p_gate:
            frame.add_pauli(PAULIS[int(rng.integers(3))], q)
    return frame


# -- compiled event stream ----------------------------------------------------


def noise_stream(schedule: Schedule, model: NoiseModel = NoiseModel()) -> tuple[list[tuple], list[int]]:
    """Primitive steps with noise locations in execution order.

    Steps are ``("CZ", a, b)``, ``("LC", v)``, ``("MZ", v)`` and
    ``("N", loc, q)``. Gate noise follows each op on its surviving qubits;
    a measured qubit is hit just before projection when
    ``model.noise_on_measure`` is set. Idle live qubits get one dephasing
    location per round. Returns the steps and each location's kind
    (0 for gate, 1 for memory).
    """
    steps: list[tuple] = []
    kinds: list[int] = []

    def loc(q: int, kind: int) -> None:
        steps.append(("N", len(kinds), q))
        kinds.append(kind)

    live: set[int] = set(schedule.outputs)
    for op in schedule.setup:
        steps += op.primitives()
        live |= set(op.qubits)
    for rnd in schedule.rounds:
        idle = set(live)
        for op in rnd:
            idle -= set(op.qubits)
            live |= set(op.qubits)
            m = op.measured
            if m is not None and model.noise_on_measure:
                loc(m, 0)
            steps += op.primitives()
            for q in op.qubits:
                if q != m:
                    loc(q, 0)
            if m is not None:
                live.discard(m)
        for q in sorted(idle & live):
            loc(q, 1)
    return steps, kinds


@dataclass
class CompiledSchedule:
    """Bitmask program for fast frame propagation.

    ``events`` holds ``(0, vbit, nbmask)`` for a local complementation,
    ``(1, keepmask, 0)`` for a measurement and ``(2, loc, 0)`` for a noise
    location whose X/Y/Z images are ``masks[loc]``.
    """

    events: list[tuple[int, int, int]]
    masks: list[tuple[int, int, int]]
    loc_event: list[int]
    loc_kind: np.ndarray
    output_mask: int
    bit_of: dict[int, int] = field(default_factory=dict)

    def probabilities(self, model: NoiseModel) -> np.ndarray:
        return np.where(self.loc_kind == 0, model.p_gate, model.p_mem)

    def run(self, hits: Mapping[int, int] | list[tuple[int, int]]) -> int:
        """Final frame for the given ``(loc, pauli index)`` injections."""
        hits = sorted(dict(hits).items())
        if not hits:
            return 0
        events, masks, loc_event = self.events, self.masks, self.loc_event
        frame, hi, nh = 0, 0, len(hits)
        e, E = loc_event[hits[0][0]], len(events)
        while e < E:
            if frame == 0:
                if hi >= nh:
                    break
                e = loc_event[hits[hi][0]]
            kind, a, b = events[e]
            if kind == 2:
                if hi < nh and hits[hi][0] == a:
                    frame ^= masks[a][hits[hi][1]]
                    hi += 1
            elif kind == 0:
                if frame & a:
                    frame ^= b
            else:
                frame &= a
            e += 1
        return frame & self.output_mask


def compile_schedule(schedule: Schedule, model: NoiseModel = NoiseModel()) -> CompiledSchedule:
    steps, kinds = noise_stream(schedule, model)
    bit_of = {q: i for i, q in enumerate(schedule.qubits())}
    g = LabeledGraph(schedule.outputs)

    def mask(qs: Iterable[int]) -> int:
        out = 0
        for q in qs:
            out |= 1 << bit_of[q]
        return out

    events: list[tuple[int, int, int]] = []
    masks: list[tuple[int, int, int]] = []
    loc_event: list[int] = []
    for st in steps:
        if st[0] == "N":
            _, idx, q = st
            if q not in g:
                g.add_vertex_(q)
            zb = 1 << bit_of[q]
            if kinds[idx] == 1:
                masks.append((zb, zb, zb))
            else:
                nb = mask(g.neighbors(q))
                masks.append((nb, nb | zb, zb))
            loc_event.append(len(events))
            events.append((2, idx, 0))
            continue
        apply_primitive(g, st)
        if st[0] == "LC":
            events.append((0, 1 << bit_of[st[1]], mask(g.neighbors(st[1]))))
        elif st[0] == "MZ":
            events.append((1, ~(1 << bit_of[st[1]]), 0))
    return CompiledSchedule(
        events, masks, loc_event, np.asarray(kinds, dtype=np.int8), mask(schedule.outputs), bit_of
    )


def _trial(c: CompiledSchedule, probs: np.ndarray, seed: int) -> bool:
    rng = np.random.default_rng(seed)
    hit = np.flatnonzero(rng.random(len(probs)) < probs)
    if hit.size == 0:
        return True
    paulis = rng.integers(0, 3, size=hit.size)
    return c.run(list(zip(hit.tolist(), paulis.tolist()))) == 0


def simulate_trial(schedule: Schedule | CompiledSchedule, model: NoiseModel, seed: int) -> bool:
    """One noisy run; True when no Z error survives on the outputs."""
    c = schedule if isinstance(schedule, CompiledSchedule) else compile_schedule(schedule, model)
    return _trial(c, c.probabilities(model), seed)


def _count(c: CompiledSchedule, probs: np.ndarray, seeds: range) -> int:
    return sum(_trial(c, probs, s) for s in seeds)


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("GSD_THREADS", "1")))
    except ValueError:
        return 1


def estimate_fidelity(
    schedule: Schedule,
    model: NoiseModel,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> FidelityEstimate:
    """Fraction of error-free trials; trial ``i`` uses seed ``seed + i``.

    ``workers`` (default from ``GSD_THREADS``) splits trials over
    processes; the result does not depend on it.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    c = compile_schedule(schedule, model)
    probs = c.probabilities(model)
    workers = thread_cap() if workers is None else max(1, workers)
    if not probs.any():
        ok = trials
    elif workers == 1 or trials < 2 * workers:
        ok = _count(c, probs, range(seed, seed + trials))
    else:
        bounds = np.linspace(0, trials, workers + 1).astype(int)
        chunks = [range(seed + a, seed + b) for a, b in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            ok = sum(ex.map(_count, [c] * workers, [probs] * workers, chunks))
    mean = ok / trials
    half = 1.96 * math.sqrt(mean * (1 - mean) / trials)
    return FidelityEstimate(mean, trials, half, seed, ok)


def result_row(
    protocol: str, n: int, model: NoiseModel, est: FidelityEstimate, report: ResourceReport
) -> dict[str, object]:
    return {
        "protocol": protocol,
        "n": n,
        "p_gate": model.p_gate,
        "p_mem": model.p_mem,
        "trials": est.trials,
        "fidelity": f"{est.mean:.6f}",
        "ci95": f"{est.ci95_halfwidth:.6f}",
        "seed": est.seed,
        "rounds": report.rounds,
        "cz": report.cz_count,
        "lc": report.lc_count,
        "meas": report.meas_count,
        "bell_pairs": report.bell_pairs,
        "cc_bits": report.cc_bits,
        "central_qubits": report.central_qubit_highwater,
    }
