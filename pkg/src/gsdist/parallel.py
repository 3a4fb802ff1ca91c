"""Log-depth schedules built from the star doubling trick.

A star with center ``q0`` grows by a constant-depth block: every leaf ``l``
runs CZ(l, t), LC(l), CZ(l, t) on a fresh target ``t``, which toggles the
edge ``q0 - t`` and leaves ``l`` untouched. While the leaves work, the
center itself is free to link up to three more targets directly. The same
block with the targets already attached removes those edges instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from gsdist.errors import InsufficientAux, InsufficientTargets, ProtocolOrderViolation
from gsdist.graph import LabeledGraph, star_graph
from gsdist.protocol import (
    DistributionState,
    Rounds,
    _check_set,
    hub_targets,
    init_network,
    prepare_system,
    schedule_finalize,
)
from gsdist.schedule import ResourceReport, Schedule, ScheduleBuilder, cz, lc, meas_z, resources
from gsdist.solver import ScSystem

DIRECT_PER_BLOCK = 3


@dataclass(frozen=True)
class ParallelConfig:
    """Auxiliary budget ``aux_count`` and GHZ seed size ``base_size``."""

    aux_count: int | None = None
    base_size: int = 2

    def __post_init__(self) -> None:
        if self.aux_count is not None and self.aux_count < 1:
            raise InsufficientAux("at least one auxiliary qubit is required")
        if self.base_size < 2:
            raise ValueError("base_size must be at least 2")

    def aux_for(self, n: int) -> int:
        if self.aux_count is not None:
            return self.aux_count
        return default_aux(n)


def default_aux(n: int) -> int:
    """``max(2, ceil(n / log2 n))``."""
    if n < 3:
        return 2
    return max(2, math.ceil(n / math.log2(n)))


def ghz_double(center: int, leaves: Sequence[int], targets: Sequence[int], phase: str = "double") -> Rounds:
    """Three rounds toggling ``center - t`` for every target.

    The first ``len(leaves)`` targets are handled by leaf triples; up to
    three more are linked directly by the center, one per round.
    """
    if len(targets) > len(leaves) + DIRECT_PER_BLOCK:
        raise InsufficientTargets("more targets than one block can handle")
    if not targets:
        raise InsufficientTargets("a doubling block needs at least one target")
    pairs = list(zip(leaves, targets))
    direct = list(targets[len(pairs):])
    r1 = [cz(l, t, phase) for l, t in pairs]
    r2 = [lc(l, phase) for l, _ in pairs]
    r3 = [cz(l, t, phase) for l, t in pairs]
    for rnd, t in zip((r1, r2, r3), direct):
        rnd.append(cz(center, t, phase))
    return [r for r in (r1, r2, r3) if r]


def plan_star(
    center: int,
    leaves: Sequence[int],
    pending: Sequence[tuple[int, bool]],
    phase: str = "star",
) -> tuple[Rounds, list[int]]:
    """Rounds toggling ``center - q`` for every pending ``(q, joins)``.

    Items flagged ``joins`` become leaves once linked and help with later
    blocks. Returns the rounds and the final leaf list.
    """
    leaves = list(leaves)
    pending = list(pending)
    rounds: Rounds = []
    while pending:
        if len(pending) <= DIRECT_PER_BLOCK or not leaves:
            q, joins = pending.pop(0)
            rounds.append([cz(center, q, phase)])
            if joins:
                leaves.append(q)
            continue
        take = min(len(pending), len(leaves) + DIRECT_PER_BLOCK)
        # direct links go to the earliest items so helpers join soonest
        block = pending[:take]
        direct, rest = block[:DIRECT_PER_BLOCK], block[DIRECT_PER_BLOCK:]
        order = [q for q, _ in rest] + [q for q, _ in direct]
        rounds += ghz_double(center, leaves, order, phase)
        leaves += [q for q, j in block if j]
        pending = pending[take:]
    return rounds, leaves


def ghz_log_depth(n: int, cfg: ParallelConfig = ParallelConfig()) -> Schedule:
    """Star graph on qubits ``0..n-1`` (center 0) in logarithmic depth."""
    if n < 2:
        raise ValueError("need n >= 2")
    c = min(cfg.base_size, n)
    b = ScheduleBuilder(initial=range(n))
    b.extend([[cz(0, v, "seed")] for v in range(1, c)])
    rounds, _ = plan_star(0, list(range(1, c)), [(v, True) for v in range(c, n)], "double")
    b.extend(rounds)
    return b.build(range(n), star_graph(n), name="ghz-log")


def ghz_round_bound(n: int, c: int = 2) -> int:
    """``c + 3 * ceil(log2(n / c))``."""
    c = min(c, n)
    return c + 3 * max(0, math.ceil(math.log2(n / c)))


def _helper_count(k: int, m: int, unlink: bool = True) -> int:
    """Helpers minimising the rounds spent on ``m`` targets.

    Counts linking, then unlinking when ``unlink`` is set, plus the round
    that removes the helpers.
    """
    def cost(h: int) -> int:
        hs = list(range(-h, 0))
        ts = list(range(1, m + 1))
        up, lv = plan_star(0, [], [(q, True) for q in hs] + [(q, False) for q in ts])
        total = len(up) + (1 if h and unlink else 0)
        if unlink:
            total += len(plan_star(0, lv, [(q, False) for q in ts])[0])
        return total
    return min(range(k + 1), key=lambda h: (cost(h), h))


class ParallelState(DistributionState):
    def __init__(self, layout, setup, aux_count: int):
        super().__init__(layout, setup)
        self.aux_count = aux_count
        self.deferred: list[int] = []


def _link_swap_unlink(state: ParallelState, S: Sequence[int], tag: str) -> tuple[Rounds, list[int]]:
    a0 = state.layout.hub
    comp = [state.companion(v) for v in S]
    h = _helper_count(state.aux_count, len(comp))
    helpers = [state.aux() for _ in range(h)]
    up, leaves = plan_star(a0, [], [(q, True) for q in helpers] + [(a, False) for a in comp], f"{tag}:link")
    swap = [[lc(a, f"{tag}:swap") for a in comp]]
    down, _ = plan_star(a0, leaves, [(a, False) for a in comp], f"{tag}:unlink")
    return up + swap + down, helpers


def parallel_sc_round(state: ParallelState, S, cfg: ParallelConfig | None = None, defer_helpers: bool = False) -> Rounds:
    """Complementation round with the hub's star grown by doubling.

    Auxiliary helpers are attached to the hub first, help link and unlink
    the companions, and are measured out before the hub's complementation,
    unless ``defer_helpers`` leaves them for the final measurement round.
    """
    S = _check_set(state, S)
    rounds, helpers = _link_swap_unlink(state, S, "sc")
    if helpers and not defer_helpers:
        rounds.append([meas_z(q, "sc:drop-aux") for q in helpers])
    elif helpers:
        state.deferred += helpers
    rounds.append([lc(state.layout.hub, "sc:complement")])
    state.emit(rounds)
    state.pending_reset = frozenset(S)
    state.hub_star ^= set(S)
    return rounds


def parallel_edge_reset(state: ParallelState, S) -> Rounds:
    S = sorted(set(S))
    if state.pending_reset != frozenset(S):
        raise ProtocolOrderViolation("edge reset must follow a complementation round on the same set")
    rounds, helpers = _link_swap_unlink(state, S, "reset")
    if helpers:
        rounds.append([meas_z(q, "reset:drop-aux") for q in helpers])
    state.emit(rounds)
    state.pending_reset = None
    state.hub_star ^= set(S)
    return rounds


def _parallel_toggle(state: ParallelState, targets: Sequence[int]) -> tuple[Rounds, list[int]]:
    comp = [state.companion(v) for v in targets]
    h = _helper_count(state.aux_count, len(comp), unlink=False)
    helpers = [state.aux() for _ in range(h)]
    rounds, _ = plan_star(
        state.layout.hub, [], [(q, True) for q in helpers] + [(a, False) for a in comp], "final:link"
    )
    return rounds, helpers


def parallel_distribute(
    G: LabeledGraph,
    system: ScSystem | None = None,
    cfg: ParallelConfig = ParallelConfig(),
    hub_vertex: int | None = 0,
    method: str = "auto",
) -> tuple[Schedule, ResourceReport]:
    """Distribution with auxiliary-assisted complementation rounds."""
    if hub_vertex is not None and G.n == 0:
        hub_vertex = None
    sets = prepare_system(G, system, hub_vertex, method)
    layout, setup = init_network(G, hub_vertex)
    state = ParallelState(layout, setup, cfg.aux_for(G.n))
    for i, S in enumerate(sets):
        last = i == len(sets) - 1
        if last:
            want = set(G.neighbors(hub_vertex)) if hub_vertex is not None else set()
            no_fixup = hub_vertex is None or not (set(S) ^ state.hub_star ^ want)
            parallel_sc_round(state, S, cfg, defer_helpers=no_fixup)
        else:
            parallel_sc_round(state, S, cfg)
            parallel_edge_reset(state, S)
    schedule_finalize(state, G, _parallel_toggle, extra_measure=state.deferred)
    sched = state.builder.build(layout.outputs, G, name="sc-parallel")
    return sched, resources(sched)


__all__ = [
    "ParallelConfig",
    "default_aux",
    "ghz_double",
    "ghz_log_depth",
    "ghz_round_bound",
    "hub_targets",
    "parallel_distribute",
    "parallel_edge_reset",
    "parallel_sc_round",
    "plan_star",
]
