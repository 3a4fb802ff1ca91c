"""Star-network distribution of graph states by subgraph complementation.

A central node holds a hub qubit ``a0`` and one companion qubit ``a_i`` per
end node; each companion starts Bell-paired with its end qubit ``c_i``.
Qubit ids: ``c_v = v``, ``a_v = n + v``; the hub is the hub vertex's own id
when the hub is a graph vertex and ``2n`` otherwise; auxiliary qubits are
drawn fresh from ``2n + 1`` upward.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gsdist.errors import DeadCompanion, ProtocolOrderViolation, SystemMismatch, TargetMismatch
from gsdist.graph import LabeledGraph, complete_graph
from gsdist.schedule import (
    GateOp,
    ResourceReport,
    Schedule,
    ScheduleBuilder,
    cz,
    lc,
    meas_z,
    resources,
)
from gsdist.solver import ScSystem, best_system, replay

Rounds = list[list[GateOp]]


@dataclass
class NetworkLayout:
    """Qubit assignment for one distribution run."""

    n: int
    hub: int
    hub_vertex: int | None
    companions: dict[int, int]
    end_qubits: dict[int, int]
    bell_pairs: frozenset[tuple[int, int]]
    next_aux: int = field(default=0)

    @property
    def central(self) -> set[int]:
        return {self.hub, *self.companions.values()}

    @property
    def outputs(self) -> list[int]:
        ends = list(self.end_qubits.values())
        return sorted(ends + ([self.hub] if self.hub_vertex is not None else []))

    def fresh_aux(self) -> int:
        q = self.next_aux
        self.next_aux += 1
        return q


def init_network(G: LabeledGraph, hub_vertex: int | None = None) -> tuple[NetworkLayout, list[GateOp]]:
    """Layout plus the pre-distributed Bell pairs.

    With ``hub_vertex`` given, the hub qubit is that vertex and the other
    ``n - 1`` vertices get a companion each; otherwise every vertex does.
    """
    n = G.n
    if set(G.vertices) != set(range(n)):
        raise ValueError("distribution expects graph vertices 0..n-1")
    if hub_vertex is not None and hub_vertex not in G:
        raise ValueError(f"hub vertex {hub_vertex} not in graph")
    ends = [v for v in range(n) if v != hub_vertex]
    hub = hub_vertex if hub_vertex is not None else 2 * n
    companions = {v: n + v for v in ends}
    end_qubits = {v: v for v in ends}
    pairs = frozenset((companions[v], end_qubits[v]) for v in ends)
    layout = NetworkLayout(n, hub, hub_vertex, companions, end_qubits, pairs, next_aux=2 * n + 1)
    setup = [GateOp("BellPrep", (companions[v], end_qubits[v]), "bell") for v in ends]
    return layout, setup


class DistributionState:
    """Mutable bookkeeping while compiling one distribution."""

    def __init__(self, layout: NetworkLayout, setup: Iterable[GateOp]):
        self.layout = layout
        self.builder = ScheduleBuilder(layout.central, layout.outputs)
        for op in setup:
            self.builder.add_setup(op)
        self.pending_reset: frozenset[int] | None = None
        self.hub_star: set[int] = set()

    def companion(self, v: int) -> int:
        if v not in self.layout.companions:
            raise ValueError(f"vertex {v} has no companion (hub or unknown)")
        a = self.layout.companions[v]
        if a in self.builder.retired:
            raise DeadCompanion(f"companion of vertex {v} was measured")
        return a

    def aux(self) -> int:
        q = self.layout.fresh_aux()
        self.builder.central.add(q)
        return q

    def emit(self, rounds: Rounds) -> Rounds:
        self.builder.extend(rounds)
        return rounds

    def end_graph(self) -> LabeledGraph:
        ends = self.layout.end_qubits
        inv = {q: v for v, q in ends.items()}
        g = self.builder.graph.induced(q for q in ends.values() if q in self.builder.graph)
        return g.relabel(inv)


def _check_set(state: DistributionState, S: Iterable[int]) -> list[int]:
    S = sorted(set(S))
    if not S:
        raise ValueError("empty complementation set")
    if state.pending_reset is not None:
        raise ProtocolOrderViolation("previous complementation round was not reset")
    for v in S:
        state.companion(v)
    return S


def schedule_sc_round(state: DistributionState, S: Iterable[int]) -> Rounds:
    """Serial complementation of ``S`` on the end qubits.

    Leaves the hub adjacent to every end qubit in ``S`` until the matching
    edge reset runs. Costs ``2m`` CZ and ``m + 1`` LC in ``2m + 2`` rounds.
    """
    S = _check_set(state, S)
    a0 = state.layout.hub
    comp = [state.companion(v) for v in S]
    rounds: Rounds = [[cz(a, a0, "sc:link")] for a in comp]
    rounds.append([lc(a, "sc:swap") for a in comp])
    rounds += [[cz(a, a0, "sc:unlink")] for a in comp]
    rounds.append([lc(a0, "sc:complement")])
    state.emit(rounds)
    state.pending_reset = frozenset(S)
    state.hub_star ^= set(S)
    return rounds


def schedule_edge_reset(state: DistributionState, S: Iterable[int]) -> Rounds:
    """Undo the hub links of the preceding round, keeping the complementation."""
    S = sorted(set(S))
    if state.pending_reset != frozenset(S):
        raise ProtocolOrderViolation("edge reset must follow a complementation round on the same set")
    a0 = state.layout.hub
    comp = [state.companion(v) for v in S]
    rounds: Rounds = [[cz(a, a0, "reset:link")] for a in comp]
    rounds.append([lc(a, "reset:swap") for a in comp])
    rounds += [[cz(a, a0, "reset:unlink")] for a in comp]
    state.emit(rounds)
    state.pending_reset = None
    state.hub_star ^= set(S)
    return rounds


def _serial_toggle(state: DistributionState, targets: Sequence[int]) -> tuple[Rounds, list[int]]:
    a0 = state.layout.hub
    return [[cz(state.companion(v), a0, "final:link")] for v in targets], []


def hub_targets(state: DistributionState, G: LabeledGraph) -> list[int]:
    """End vertices whose hub adjacency must still be toggled."""
    h = state.layout.hub_vertex
    want = set(G.neighbors(h)) if h is not None else set()
    return sorted(state.hub_star ^ want)


def check_pre_finalize(state: DistributionState, G: LabeledGraph) -> None:
    want = G.induced(state.layout.end_qubits)
    if state.end_graph() != want:
        raise TargetMismatch("end-qubit graph differs from the target before finalization")


def schedule_finalize(
    state: DistributionState,
    G: LabeledGraph,
    toggle: Callable[[DistributionState, Sequence[int]], tuple[Rounds, list[int]]] = _serial_toggle,
    extra_measure: Iterable[int] = (),
) -> Rounds:
    """Attach the hub to its target neighbors and measure out the companions.

    Each remaining hub edge is made by linking ``a_i`` to the hub and
    complementing at ``a_i``. When the hub is not a graph vertex it is
    measured together with the companions.
    """
    check_pre_finalize(state, G)
    lay = state.layout
    T = hub_targets(state, G) if lay.hub_vertex is not None else []
    rounds, helpers = toggle(state, T) if T else ([], [])
    rounds = list(rounds)
    if T:
        rounds.append([lc(state.companion(v), "final:swap") for v in T])
    doomed = [q for q in lay.companions.values() if q not in state.builder.retired]
    doomed += list(extra_measure) + helpers
    if lay.hub_vertex is None:
        doomed.append(lay.hub)
    rounds.append([meas_z(q, "final:measure") for q in sorted(set(doomed))])
    state.pending_reset = None
    return state.emit(rounds)


def order_for_finalization(sets: Sequence[frozenset[int]], hub_neighbors: set[int]) -> list[frozenset[int]]:
    """Put last the set whose skipped reset saves the most work.

    Skipping the final reset leaves the hub linked to that set; the links
    that disagree with the hub's target neighborhood are fixed afterwards.
    """
    if not sets:
        return []
    def gain(s: frozenset[int]) -> tuple:
        return (len(s) - len(s ^ hub_neighbors), len(s), sorted(s))
    last = max(range(len(sets)), key=lambda i: gain(sets[i]))
    return [s for i, s in enumerate(sets) if i != last] + [sets[last]]


def _system_without_hub(G: LabeledGraph, hub_vertex: int | None, method: str) -> ScSystem:
    """Solve on the graph with the hub deleted, then map back to ``G``'s labels.

    Deleting (rather than isolating) the hub keeps class detection working,
    e.g. a complete bipartite graph stays complete bipartite.
    """
    if hub_vertex is None:
        return best_system(G, method)
    ends = [v for v in sorted(G.vertices) if v != hub_vertex]
    to_local = {v: i for i, v in enumerate(ends)}
    sub = best_system(G.induced(ends).relabel(to_local), method)
    sets = tuple(frozenset(ends[i] for i in s) for s in sub.sets)
    return ScSystem(G.n, sets, sub.provenance)


def prepare_system(G: LabeledGraph, system: ScSystem | None, hub_vertex: int | None, method: str) -> list[frozenset[int]]:
    """End-vertex sets to execute; hub members are dropped (hub edges come last)."""
    base = G.isolate(hub_vertex) if hub_vertex is not None else G
    if system is None:
        system = _system_without_hub(G, hub_vertex, method)
    if system.n != G.n:
        raise SystemMismatch(f"system is for {system.n} vertices, graph has {G.n}")
    got = replay(system)
    if hub_vertex is not None:
        got = got.isolate(hub_vertex)
    if got != base:
        raise SystemMismatch("system does not rebuild the target graph")
    sets = [frozenset(s - {hub_vertex}) for s in system.sets]
    sets = [s for s in sets if len(s) >= 2]
    hub_nb = set(G.neighbors(hub_vertex)) if hub_vertex is not None else set()
    return order_for_finalization(sets, hub_nb)


def distribute(
    G: LabeledGraph,
    system: ScSystem | None = None,
    hub_vertex: int | None = 0,
    method: str = "auto",
) -> tuple[Schedule, ResourceReport]:
    """Compile the serial protocol for ``G`` and check it by graph replay.

    Parameters
    ----------
    G : LabeledGraph
        Target on vertices ``0..n-1``.
    system : ScSystem, optional
        Complementation system; computed with ``method`` when omitted. It may
        or may not include the hub vertex; only its effect on the other
        vertices matters.
    hub_vertex : int or None
        Vertex played by the central node's hub qubit; ``None`` keeps the hub
        outside the graph (one more Bell pair).
    """
    if hub_vertex is not None and G.n == 0:
        hub_vertex = None
    sets = prepare_system(G, system, hub_vertex, method)
    layout, setup = init_network(G, hub_vertex)
    state = DistributionState(layout, setup)
    for i, S in enumerate(sets):
        schedule_sc_round(state, S)
        if i < len(sets) - 1:
            schedule_edge_reset(state, S)
    schedule_finalize(state, G)
    sched = state.builder.build(layout.outputs, G, name="sc")
    return sched, resources(sched)


def clique_protocol(k: int) -> tuple[Schedule, ResourceReport]:
    """Single-round distribution of the ``k``-vertex complete graph.

    One complementation round over all end vertices with no reset, then
    the companions are measured out: ``2k - 2`` CZ and ``k`` LC.
    """
    if k < 2:
        raise ValueError("clique protocol needs k >= 2")
    G = complete_graph(k)
    layout, setup = init_network(G, 0)
    state = DistributionState(layout, setup)
    schedule_sc_round(state, range(1, k))
    schedule_finalize(state, G)
    sched = state.builder.build(layout.outputs, G, name="clique")
    return sched, resources(sched)


def edge_coloring(G: LabeledGraph) -> list[list[tuple[int, int]]]:
    """Proper edge coloring: round robin for complete graphs, greedy otherwise."""
    n = G.n
    if n >= 2 and G.num_edges == n * (n - 1) // 2 and set(G.vertices) == set(range(n)):
        m = n if n % 2 == 0 else n + 1
        classes: list[list[tuple[int, int]]] = []
        for r in range(m - 1):
            pairs = [(r, m - 1)] + [((r + i) % (m - 1), (r - i) % (m - 1)) for i in range(1, m // 2)]
            cls = sorted(tuple(sorted(p)) for p in pairs if max(p) < n)
            if cls:
                classes.append(cls)
        return classes
    color_of: dict[int, set[int]] = {v: set() for v in G.vertices}
    classes = []
    for u, v in sorted(G.edges):
        c = 0
        while c in color_of[u] or c in color_of[v]:
            c += 1
        if c == len(classes):
            classes.append([])
        classes[c].append((u, v))
        color_of[u].add(c)
        color_of[v].add(c)
    return classes


def baseline_factory(G: LabeledGraph, parallel: bool = False) -> tuple[Schedule, ResourceReport]:
    """Build ``G`` on central qubits, then teleport every qubit to its end node.

    Qubits: outputs ``v``, local ``n + v``, Bell halves ``2n + v``. Teleport
    of ``q`` to ``c`` uses CZ(q, a'), then X measurements of ``a'`` and
    ``q``, each realised with ``c`` as the helper neighbor.
    """
    n = G.n
    if set(G.vertices) != set(range(n)):
        raise ValueError("distribution expects graph vertices 0..n-1")
    local = {v: n + v for v in range(n)}
    half = {v: 2 * n + v for v in range(n)}
    b = ScheduleBuilder(set(local.values()) | set(half.values()), range(n))
    for v in range(n):
        b.add_setup(GateOp("BellPrep", (half[v], v), "bell"))
    complete = n >= 3 and G.num_edges == n * (n - 1) // 2
    if complete and not parallel:
        b.extend([[cz(local[0], local[v], "local:star")] for v in range(1, n)])
        b.add_round([lc(local[0], "local:complete")])
    elif parallel:
        for cls in edge_coloring(G):
            b.add_round([cz(local[u], local[v], "local:edge") for u, v in cls])
    else:
        b.extend([[cz(local[u], local[v], "local:edge")] for u, v in sorted(G.edges)])
    if n:
        b.add_round([cz(local[v], half[v], "teleport:link") for v in range(n)])
        b.add_round([GateOp("MeasX", (half[v], v), "teleport:measure") for v in range(n)])
        b.add_round([GateOp("MeasX", (local[v], v), "teleport:measure") for v in range(n)])
    name = "factory-parallel" if parallel else "factory"
    sched = b.build(range(n), G, name=name)
    return sched, resources(sched)
