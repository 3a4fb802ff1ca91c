"""Subgraph complementation systems: construction, bounds and serialization."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal

from gsdist.errors import SizeLimitExceeded, UnsupportedClass
from gsdist.gf2 import (
    EXPECTED_CUT_RANK_LIMIT,
    MIN_RANK_LIMIT,
    cut_rank,
    expected_cut_rank,
    min_rank_f2,
    symmetric_factor,
)
from gsdist.graph import GraphSpec, LabeledGraph, parse_generator

Provenance = Literal["trivial", "closed_form", "greedy", "elimination", "exact"]

EXACT_LIMIT = 8


def graph_digest(G: LabeledGraph) -> str:
    text = f"{sorted(G.vertices)}|{sorted(G.edges)}"
    return hashlib.sha1(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ScSystem:
    """Ordered collection of vertex subsets, one subgraph complementation each."""

    n: int
    sets: tuple[frozenset[int], ...]
    provenance: Provenance = "trivial"
    target_digest: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        for s in self.sets:
            if len(s) < 2:
                raise ValueError(f"set {sorted(s)} has fewer than two vertices")
            if min(s) < 0 or max(s) >= self.n:
                raise ValueError(f"set {sorted(s)} not within 0..{self.n - 1}")

    @property
    def d(self) -> int:
        return len(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.sets]

    def mean_size(self) -> float:
        return sum(self.sizes) / self.d if self.sets else 0.0

    def reordered(self, sets: Iterable[frozenset[int]]) -> ScSystem:
        sets = tuple(sets)
        if sorted(map(sorted, sets)) != sorted(map(sorted, self.sets)):
            raise ValueError("reordering must keep the same sets")
        return ScSystem(self.n, sets, self.provenance, self.target_digest)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.d}"] + [" ".join(map(str, sorted(s))) for s in self.sets]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, provenance: Provenance = "trivial") -> ScSystem:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        n, d = (int(t) for t in lines[0].split())
        sets = [frozenset(int(t) for t in ln.split()) for ln in lines[1 : 1 + d]]
        if len(sets) != d:
            raise ValueError(f"expected {d} sets, found {len(sets)}")
        return cls(n, tuple(sets), provenance)


def _make(G: LabeledGraph, sets: Iterable[Iterable[int]], provenance: Provenance) -> ScSystem:
    _require_standard_labels(G)
    system = ScSystem(G.n, tuple(frozenset(s) for s in sets), provenance, graph_digest(G))
    assert replay(system) == G, f"{provenance} system does not rebuild its target"
    return system


def _require_standard_labels(G: LabeledGraph) -> None:
    if G.vertices != frozenset(range(G.n)):
        raise ValueError("systems are defined for graphs on vertices 0..n-1")


def replay(system: ScSystem) -> LabeledGraph:
    """Apply every set of ``system`` to the empty graph on ``system.n`` vertices."""
    g = LabeledGraph.empty(system.n)
    for s in system.sets:
        g.complement_(s)
    return g


def trivial_system(G: LabeledGraph) -> ScSystem:
    """One two-element set per edge."""
    return _make(G, (set(e) for e in sorted(G.edges)), "trivial")


def greedy_system(G: LabeledGraph) -> ScSystem:
    """Star elimination by maximum remaining degree.

    Each step removes the star at ``v`` using ``{v} | N(v)`` followed by
    ``N(v)``; two cliques whose symmetric difference is exactly that star.
    """
    work = G.copy()
    sets: list[set[int]] = []
    while work.num_edges:
        v = min(work.vertices, key=lambda u: (-work.degree(u), u))
        nb = set(work.neighbors(v))
        sets.append({v} | nb)
        if len(nb) > 1:
            sets.append(nb)
        for w in nb:
            work._toggle_(v, w)
    return _make(G, sets, "greedy")


def elimination_system(G: LabeledGraph) -> ScSystem:
    """At most ``n - 1`` sets by successive vertex elimination.

    Complementing ``{v} | N(v)`` isolates ``v`` while only rewiring edges
    inside ``N(v)``, so each non-isolated vertex costs one set.
    """
    work = G.copy()
    sets: list[set[int]] = []
    while work.num_edges:
        v = min((u for u in work.vertices if work.degree(u)), key=lambda u: (work.degree(u), u))
        s = {v} | set(work.neighbors(v))
        sets.append(s)
        work.complement_(s)
        work.remove_vertex_(v)
    return _make(G, sets, "elimination")


def exact_min_system(G: LabeledGraph, limit: int = EXACT_LIMIT) -> ScSystem:
    """A system of minimum size.

    Columns of ``B`` are set indicators; ``B B^T`` matches the adjacency
    matrix off the diagonal. The fewest columns achieving ``A + D`` is
    ``rank(A + D)`` when ``D != 0`` and never fewer when ``D = 0``, so the
    minimum is taken over nonzero diagonals and the best ``A + D`` is
    factored directly.
    """
    _require_standard_labels(G)
    n = G.n
    if n > limit:
        raise SizeLimitExceeded(f"n={n} exceeds exact solver limit {limit}")
    if G.num_edges == 0:
        return _make(G, [], "exact")
    A = G.adjacency_matrix(range(n))
    _, diag = min_rank_f2(A, limit=max(limit, n), nonzero_diagonal=True)
    cols = symmetric_factor(A.with_diagonal(diag))
    sets = [{j for j in range(n) if (c >> j) & 1} for c in cols]
    return _make(G, sets, "exact")


# -- closed forms -------------------------------------------------------------


def multipartite_parts(G: LabeledGraph) -> list[list[int]] | None:
    """Parts of ``G`` if it is complete multipartite, else ``None``."""
    remaining = set(G.vertices)
    parts = []
    while remaining:
        v = min(remaining)
        part = sorted(G.vertices - G.neighbors(v))
        parts.append(part)
        remaining -= set(part)
    seen = set()
    for part in parts:
        if seen & set(part):
            return None
        seen |= set(part)
        outside = G.vertices - set(part)
        for u in part:
            if G.neighbors(u) != outside:
                return None
    return parts


def _is_connected(G: LabeledGraph) -> bool:
    if G.n == 0:
        return True
    start = min(G.vertices)
    seen, stack = {start}, [start]
    while stack:
        for w in G.neighbors(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == G.n


def _cycle_order(G: LabeledGraph) -> list[int]:
    start = min(G.vertices)
    order, prev, cur = [start], None, start
    while True:
        nxt = min(w for w in G.neighbors(cur) if w != prev)
        if nxt == start:
            return order
        order.append(nxt)
        prev, cur = cur, nxt


def detect_classes(G: LabeledGraph) -> list[str]:
    """Structured classes ``G`` belongs to that have a closed-form system."""
    if G.num_edges == 0:
        return ["empty"]
    found = []
    parts = multipartite_parts(G)
    if parts is not None:
        found.append("complete" if all(len(p) == 1 for p in parts) else "mpartite")
    if _is_connected(G):
        degs = [G.degree(v) for v in G.vertices]
        if G.n >= 3 and all(d == 2 for d in degs):
            found.append("cycle")
        elif G.num_edges == G.n - 1:
            found.append("path" if max(degs) <= 2 else "tree")
    return found


def detect_class(G: LabeledGraph) -> str | None:
    found = detect_classes(G)
    return found[0] if found else None


def _closed_form_sets(G: LabeledGraph, kind: str) -> list[set[int]]:
    if kind == "empty":
        return []
    if kind == "complete":
        return [set(G.vertices)]
    if kind == "mpartite":
        parts = multipartite_parts(G)
        return [set(G.vertices)] + [set(p) for p in parts if len(p) >= 2]
    if kind == "cycle":
        # fan of triangles: interior chords cancel in pairs
        order = _cycle_order(G)
        hub = order[0]
        return [{hub, order[i], order[i + 1]} for i in range(1, len(order) - 1)]
    if kind in ("path", "tree"):
        return [set(e) for e in sorted(G.edges)]
    raise UnsupportedClass(kind)


def closed_form_for_graph(G: LabeledGraph, kind: str | None = None) -> ScSystem:
    """Closed-form system for a recognised structured graph.

    With ``kind`` unset, the smallest closed form among the matching classes.
    """
    found = detect_classes(G)
    if kind is not None:
        if kind not in found:
            raise UnsupportedClass(f"graph is not in class {kind!r}")
        found = [kind]
    if not found:
        raise UnsupportedClass("graph is not in a class with a closed-form system")
    best = min((_closed_form_sets(G, k) for k in found), key=len)
    return _make(G, best, "closed_form")


_CLASS_ALIASES = {
    "complete": "complete",
    "complete_bipartite": "bipartite",
    "bipartite": "bipartite",
    "complete_mpartite": "mpartite",
    "mpartite": "mpartite",
    "path": "path",
    "cycle": "cycle",
    "star": "star",
}


def closed_form_system(kind: str | GraphSpec, *params) -> ScSystem:
    """Closed-form system for a named class, e.g. ``closed_form_system("bipartite", 3, 3)``.

    Also accepts a generator string (``"mpartite:2,2,2"``) or a parsed spec.
    """
    if isinstance(kind, GraphSpec):
        spec = kind
    elif ":" in kind and not params:
        spec = parse_generator(kind)
    else:
        alias = _CLASS_ALIASES.get(kind)
        if alias is None:
            raise UnsupportedClass(f"no closed form for class {kind!r}")
        spec = GraphSpec(alias, tuple(params))
    kind_of = {"bipartite": "mpartite", "star": "mpartite"}
    if spec.kind not in _CLASS_ALIASES.values():
        raise UnsupportedClass(f"no closed form for class {spec.kind!r}")
    G = spec.build()
    want = kind_of.get(spec.kind, spec.kind)
    if want == "mpartite" and detect_class(G) == "complete":
        want = "complete"
    return closed_form_for_graph(G, want)


# -- bounds and report -----------------------------------------------------------


@dataclass(frozen=True)
class C2Report:
    """Bounds on the minimum system size of a graph."""

    n: int
    lower: int
    upper: int
    exact: int | None
    avg_schmidt_rank: Fraction | None
    lower_is_min_rank: bool
    best: ScSystem

    @property
    def upper_bound_ok(self) -> bool:
        return self.upper <= max(self.n - 1, 0)

    @property
    def cut_rank_bound_ok(self) -> bool | None:
        if self.exact is None or self.avg_schmidt_rank is None:
            return None
        return self.exact > self.avg_schmidt_rank

    @property
    def dichotomy_ok(self) -> bool | None:
        if self.exact is None or not self.lower_is_min_rank:
            return None
        return self.exact in (self.lower, self.lower + 1)


def cut_rank_lower_bound(G: LabeledGraph) -> int:
    """Largest cut-rank over prefix sets of the sorted vertex order.

    No diagonal touches the off-diagonal block of a cut, so every cut-rank
    bounds the minimum rank from below.
    """
    vs = G.sorted_vertices()
    return max((cut_rank(G, vs[:i]) for i in range(1, len(vs))), default=0)


def candidate_systems(
    G: LabeledGraph, exact_limit: int = EXACT_LIMIT
) -> dict[str, ScSystem]:
    out = {"greedy": greedy_system(G), "elimination": elimination_system(G)}
    if detect_classes(G):
        out["closed_form"] = closed_form_for_graph(G)
    if G.n <= exact_limit:
        out["exact"] = exact_min_system(G, exact_limit)
    return out


def best_system(G: LabeledGraph, method: str = "auto", exact_limit: int = EXACT_LIMIT) -> ScSystem:
    """System by ``method``: exact, greedy, elimination, closed-form, trivial or auto.

    ``auto`` returns the smallest available system, preferring exact, then
    closed form, then elimination, then greedy on ties.
    """
    method = method.replace("-", "_")
    if method == "exact":
        return exact_min_system(G, exact_limit)
    if method == "greedy":
        return greedy_system(G)
    if method == "elimination":
        return elimination_system(G)
    if method == "closed_form":
        return closed_form_for_graph(G)
    if method == "trivial":
        return trivial_system(G)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    cands = candidate_systems(G, exact_limit)
    rank = {"exact": 0, "closed_form": 1, "elimination": 2, "greedy": 3}
    return min(cands.values(), key=lambda s: (s.d, rank[s.provenance]))


def c2_report(
    G: LabeledGraph,
    exact_limit: int = EXACT_LIMIT,
    min_rank_limit: int = MIN_RANK_LIMIT,
    cut_rank_limit: int = EXPECTED_CUT_RANK_LIMIT,
) -> C2Report:
    """Lower/upper/exact minimum system size plus the mean cut-rank."""
    _require_standard_labels(G)
    n = G.n
    if n <= min_rank_limit:
        lower, _ = min_rank_f2(G.adjacency_matrix(range(n)), limit=min_rank_limit)
        lower_is_mr = True
    else:
        lower, lower_is_mr = cut_rank_lower_bound(G), False
    cands = candidate_systems(G, exact_limit)
    best = min(cands.values(), key=lambda s: s.d)
    exact = cands["exact"].d if "exact" in cands else None
    avg = expected_cut_rank(G, cut_rank_limit) if n <= cut_rank_limit else None
    report = C2Report(n, lower, best.d, exact, avg, lower_is_mr, best)
    assert report.upper_bound_ok, "upper bound exceeds n - 1"
    if exact is not None:
        assert lower <= exact <= report.upper
        if lower_is_mr:
            assert report.dichotomy_ok
        if G.num_edges and avg is not None:
            assert report.cut_rank_bound_ok
    return report
