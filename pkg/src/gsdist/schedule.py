"""Gate schedules: rounds of qubit-disjoint operations plus resource tallies."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Sequence

from gsdist.errors import TargetMismatch, UnknownQubit
from gsdist.graph import LabeledGraph

OpKind = Literal["CZ", "LC", "MeasZ", "MeasY", "MeasX", "BellPrep"]
MEASUREMENTS = ("MeasZ", "MeasY", "MeasX")


@dataclass(frozen=True)
class GateOp:
    """One scheduled operation.

    ``MeasX`` carries ``(v, b)``: X measurement of ``v`` realised through
    local complementations at ``v`` and its neighbor ``b``.
    """

    kind: OpKind
    qubits: tuple[int, ...]
    phase: str = ""

    def __post_init__(self) -> None:
        arity = {"CZ": 2, "BellPrep": 2, "MeasX": 2, "LC": 1, "MeasZ": 1, "MeasY": 1}
        if self.kind not in arity:
            raise ValueError(f"unknown op kind {self.kind!r}")
        if len(self.qubits) != arity[self.kind]:
            raise ValueError(f"{self.kind} takes {arity[self.kind]} qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} on repeated qubit {self.qubits}")

    @property
    def is_measurement(self) -> bool:
        return self.kind in MEASUREMENTS

    @property
    def measured(self) -> int | None:
        return self.qubits[0] if self.is_measurement else None

    def primitives(self) -> list[tuple]:
        """Decomposition into ``("CZ", a, b)``, ``("LC", v)`` and ``("MZ", v)``."""
        k, q = self.kind, self.qubits
        if k in ("CZ", "BellPrep"):
            return [("CZ", q[0], q[1])]
        if k == "LC":
            return [("LC", q[0])]
        if k == "MeasZ":
            return [("MZ", q[0])]
        if k == "MeasY":
            return [("LC", q[0]), ("MZ", q[0])]
        v, b = q
        return [("LC", b), ("LC", v), ("MZ", v), ("LC", b)]


def cz(a: int, b: int, phase: str = "") -> GateOp:
    return GateOp("CZ", (a, b), phase)


def lc(v: int, phase: str = "") -> GateOp:
    return GateOp("LC", (v,), phase)


def meas_z(v: int, phase: str = "") -> GateOp:
    return GateOp("MeasZ", (v,), phase)


def apply_primitive(g: LabeledGraph, prim: tuple) -> None:
    """Apply one primitive to a working graph in place, adding fresh qubits."""
    for q in prim[1:]:
        if q not in g:
            g.add_vertex_(q)
    if prim[0] == "CZ":
        g.cz_(prim[1], prim[2])
    elif prim[0] == "LC":
        g.local_complement_(prim[1])
    else:
        g.remove_vertex_(prim[1])


@dataclass(frozen=True)
class Schedule:
    """Pre-distributed ``setup`` ops followed by timed ``rounds``.

    Qubits start in ``|+>`` and become live at first use; measured qubits
    are retired. ``outputs`` are the qubits left holding the target state.
    """

    setup: tuple[GateOp, ...]
    rounds: tuple[tuple[GateOp, ...], ...]
    central: frozenset[int]
    outputs: tuple[int, ...]
    target: LabeledGraph | None = field(default=None, compare=False)
    name: str = ""

    @property
    def depth(self) -> int:
        return len(self.rounds)

    def ops(self) -> Iterator[GateOp]:
        yield from self.setup
        for rnd in self.rounds:
            yield from rnd

    def qubits(self) -> list[int]:
        seen: dict[int, None] = {}
        for op in self.ops():
            for q in op.qubits:
                seen.setdefault(q, None)
        for q in self.outputs:
            seen.setdefault(q, None)
        return list(seen)

    def check_disjoint(self) -> None:
        for r, rnd in enumerate(self.rounds, start=1):
            used: set[int] = set()
            for op in rnd:
                if used & set(op.qubits):
                    raise AssertionError(f"round {r}: overlapping supports at {op}")
                used |= set(op.qubits)

    def replay_graph(self) -> LabeledGraph:
        """Final graph on the output qubits under the graph rules."""
        g = LabeledGraph(self.outputs)
        for op in self.ops():
            for prim in op.primitives():
                apply_primitive(g, prim)
        return g

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "op_kind", "qubit1", "qubit2", "phase_annotation"])
        for r, ops in [(0, self.setup)] + list(enumerate(self.rounds, start=1)):
            for op in ops:
                q2 = op.qubits[1] if len(op.qubits) > 1 else ""
                w.writerow([r, op.kind, op.qubits[0], q2, op.phase])
        return buf.getvalue()


class ScheduleBuilder:
    """Accumulates rounds while tracking the graph they produce."""

    def __init__(self, central: Iterable[int] = (), initial: Iterable[int] = ()):
        self.graph = LabeledGraph(initial)
        self.central: set[int] = set(central)
        self.setup: list[GateOp] = []
        self.rounds: list[tuple[GateOp, ...]] = []
        self.retired: set[int] = set()

    def is_live(self, q: int) -> bool:
        return q in self.graph

    def _apply(self, op: GateOp) -> None:
        for q in op.qubits:
            if q in self.retired:
                raise UnknownQubit(f"qubit {q} was already measured")
        if op.kind == "MeasX" and op.qubits[1] not in self.graph.neighbors(op.qubits[0]):
            raise ValueError(f"MeasX partner {op.qubits[1]} is not adjacent to {op.qubits[0]}")
        for prim in op.primitives():
            apply_primitive(self.graph, prim)
        if op.is_measurement:
            self.retired.add(op.qubits[0])

    def add_setup(self, op: GateOp) -> None:
        self._apply(op)
        self.setup.append(op)

    def add_round(self, ops: Sequence[GateOp]) -> None:
        ops = tuple(ops)
        if not ops:
            return
        used: set[int] = set()
        for op in ops:
            if used & set(op.qubits):
                raise ValueError(f"overlapping supports in one round at {op}")
            used |= set(op.qubits)
        for op in ops:
            self._apply(op)
        self.rounds.append(ops)

    def extend(self, rounds: Iterable[Sequence[GateOp]]) -> None:
        for rnd in rounds:
            self.add_round(rnd)

    def build(self, outputs: Iterable[int], target: LabeledGraph | None = None, name: str = "") -> Schedule:
        outputs = tuple(sorted(outputs))
        if set(self.graph.vertices) != set(outputs):
            raise TargetMismatch(
                f"live qubits {sorted(self.graph.vertices)} differ from outputs {list(outputs)}"
            )
        if target is not None and self.graph != target:
            raise TargetMismatch("schedule does not produce the target graph")
        return Schedule(tuple(self.setup), tuple(self.rounds), frozenset(self.central), outputs, target, name)


@dataclass(frozen=True)
class ResourceReport:
    bell_pairs: int = 0
    central_qubit_highwater: int = 0
    cz_count: int = 0
    lc_count: int = 0
    meas_count: int = 0
    rounds: int = 0
    cc_bits: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "bell_pairs": self.bell_pairs,
            "central_qubit_highwater": self.central_qubit_highwater,
            "cz_count": self.cz_count,
            "lc_count": self.lc_count,
            "meas_count": self.meas_count,
            "rounds": self.rounds,
            "cc_bits": self.cc_bits,
        }


def live_spans(schedule: Schedule) -> dict[int, tuple[int, int | None]]:
    """``qubit -> (first round used, round measured or None)``; setup is round 0."""
    spans: dict[int, list] = {}
    for r, ops in [(0, schedule.setup)] + list(enumerate(schedule.rounds, start=1)):
        for op in ops:
            for q in op.qubits:
                spans.setdefault(q, [r, None])
            if op.is_measurement:
                spans[op.qubits[0]][1] = r
    return {q: (a, b) for q, (a, b) in spans.items()}


def resources(schedule: Schedule) -> ResourceReport:
    """Exact tallies for a schedule.

    Classical communication: one bit per instruction a local complementation
    sends to each remote neighbor, plus one bit per measurement outcome.
    """
    bell = cz_n = lc_n = meas = cc = 0
    g = LabeledGraph(schedule.outputs)
    for op in schedule.ops():
        if op.kind == "BellPrep":
            bell += 1
        elif op.kind == "CZ":
            cz_n += 1
        if op.is_measurement:
            meas += 1
            cc += 1
        for prim in op.primitives():
            if prim[0] == "LC":
                lc_n += 1
                if prim[1] in g:
                    v = prim[1]
                    cc += sum(1 for w in g.neighbors(v) if w not in schedule.central)
                    cc += v not in schedule.central
            apply_primitive(g, prim)
    spans = live_spans(schedule)
    high = 0
    for r in range(0, schedule.depth + 1):
        live = sum(
            1
            for q, (a, b) in spans.items()
            if q in schedule.central and a <= r and (b is None or b >= r)
        )
        high = max(high, live)
    return ResourceReport(bell, high, cz_n, lc_n, meas, schedule.depth, cc)
