"""Graph states as labeled simple graphs, and the graph rules acting on them.

Vertex ids are integers that stay fixed for the lifetime of a graph; a
measured vertex disappears and its id is never handed out again.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Literal, Mapping

import numpy as np

from gsdist.errors import GraphSpecError, SelfLoop, UnknownVertex
from gsdist.gf2 import BitMatrix

Basis = Literal["Z", "Y"]


class LabeledGraph:
    """Simple undirected graph on integer vertex ids.

    Instances are treated as values: the public rule functions below never
    mutate their input. Methods with a trailing underscore mutate in place
    and exist for builders that own a private working copy.
    """

    __slots__ = ("_adj",)

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        self._adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise SelfLoop(f"self-loop on vertex {u}")
            if u not in self._adj:
                raise UnknownVertex(u)
            if v not in self._adj:
                raise UnknownVertex(v)
            self._adj[u].add(v)
            self._adj[v].add(u)

    @classmethod
    def empty(cls, n: int) -> LabeledGraph:
        return cls(range(n))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u, nb in self._adj.items() for v in nb if u < v)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return frozenset(self._adj[v])
        except KeyError:
            raise UnknownVertex(v) from None

    def degree(self, v: int) -> int:
        self._require(v)
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def sorted_vertices(self) -> list[int]:
        return sorted(self._adj)

    def copy(self) -> LabeledGraph:
        g = LabeledGraph.__new__(LabeledGraph)
        g._adj = {v: set(nb) for v, nb in self._adj.items()}
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, edges={sorted(self.edges)})"

    def adjacency_matrix(self, order: Iterable[int] | None = None) -> BitMatrix:
        """Adjacency matrix with rows/columns in ``order`` (sorted ids by default)."""
        order = list(order) if order is not None else self.sorted_vertices()
        pos = {v: i for i, v in enumerate(order)}
        rows = []
        for v in order:
            self._require(v)
            rows.append(sum(1 << pos[w] for w in self._adj[v] if w in pos))
        return BitMatrix(len(order), len(order), tuple(rows))

    @classmethod
    def from_adjacency(cls, A: BitMatrix, labels: Iterable[int] | None = None) -> LabeledGraph:
        if not A.is_adjacency():
            raise ValueError("not an adjacency matrix")
        labels = list(labels) if labels is not None else list(range(A.nrows))
        edges = [
            (labels[i], labels[j]) for i in range(A.nrows) for j in range(i + 1, A.nrows) if A[i, j]
        ]
        return cls(labels, edges)

    def relabel(self, mapping: Mapping[int, int]) -> LabeledGraph:
        return LabeledGraph((mapping[v] for v in self._adj), ((mapping[u], mapping[v]) for u, v in self.edges))

    def isolate(self, v: int) -> LabeledGraph:
        """Copy with every edge at ``v`` removed (``v`` itself kept)."""
        g = self.copy()
        for w in list(g._adj[v]):
            g._toggle_(v, w)
        return g

    def induced(self, keep: Iterable[int]) -> LabeledGraph:
        keep = set(keep)
        return LabeledGraph(keep, ((u, v) for u, v in self.edges if u in keep and v in keep))

    # -- in-place primitives -------------------------------------------------

    def _require(self, v: int) -> None:
        if v not in self._adj:
            raise UnknownVertex(v)

    def _toggle_(self, u: int, v: int) -> None:
        if v in self._adj[u]:
            self._adj[u].discard(v)
            self._adj[v].discard(u)
        else:
            self._adj[u].add(v)
            self._adj[v].add(u)

    def add_vertex_(self, v: int) -> None:
        if v in self._adj:
            raise ValueError(f"vertex {v} already present")
        self._adj[v] = set()

    def cz_(self, a: int, b: int) -> None:
        if a == b:
            raise SelfLoop(f"CZ on a single vertex {a}")
        self._require(a)
        self._require(b)
        self._toggle_(a, b)

    def complement_(self, S: Iterable[int]) -> None:
        S = sorted(set(S))
        for v in S:
            self._require(v)
        for u, v in combinations(S, 2):
            self._toggle_(u, v)

    def local_complement_(self, v: int) -> None:
        self._require(v)
        self.complement_(self._adj[v])

    def remove_vertex_(self, v: int) -> None:
        self._require(v)
        for w in self._adj.pop(v):
            self._adj[w].discard(v)


@dataclass(frozen=True)
class MeasurementRecord:
    vertex: int
    basis: Basis
    companion_lc: int | None = None


def apply_cz(G: LabeledGraph, a: int, b: int) -> LabeledGraph:
    """Toggle the edge ``(a, b)``."""
    g = G.copy()
    g.cz_(a, b)
    return g


def local_complement(G: LabeledGraph, v: int) -> LabeledGraph:
    """Complement the subgraph induced on the neighborhood of ``v``."""
    g = G.copy()
    g.local_complement_(v)
    return g


def subgraph_complement(G: LabeledGraph, S: Iterable[int]) -> LabeledGraph:
    """Toggle every edge with both endpoints in ``S``."""
    g = G.copy()
    g.complement_(S)
    return g


def measure(G: LabeledGraph, v: int, basis: Basis) -> tuple[LabeledGraph, MeasurementRecord]:
    """Graph rule for a Pauli measurement of vertex ``v``.

    Z deletes ``v``; Y locally complements at ``v`` first. Outcome-dependent
    local corrections are not represented here.
    """
    if basis not in ("Z", "Y"):
        raise ValueError(f"unsupported measurement basis {basis!r}")
    g = G.copy()
    g._require(v)
    lc = None
    if basis == "Y":
        g.local_complement_(v)
        lc = v
    g.remove_vertex_(v)
    return g, MeasurementRecord(v, basis, lc)


def random_graph(n: int, p: float, seed: int) -> LabeledGraph:
    """Erdos-Renyi ``G(n, p)``; pairs visited in lexicographic order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(n), 2))
    draws = rng.random(len(pairs))
    return LabeledGraph(range(n), (e for e, u in zip(pairs, draws) if u < p))


# -- named generators ------------------------------------------------------------


def complete_graph(n: int) -> LabeledGraph:
    return LabeledGraph(range(n), combinations(range(n), 2))


def complete_multipartite(sizes: Iterable[int]) -> LabeledGraph:
    parts = partition_ranges(sizes)
    edges = [
        (u, v) for i, j in combinations(range(len(parts)), 2) for u in parts[i] for v in parts[j]
    ]
    return LabeledGraph(range(sum(len(p) for p in parts)), edges)


def complete_bipartite(a: int, b: int) -> LabeledGraph:
    return complete_multipartite([a, b])


def partition_ranges(sizes: Iterable[int]) -> list[list[int]]:
    parts, start = [], 0
    for s in sizes:
        if s < 1:
            raise ValueError("partition sizes must be positive")
        parts.append(list(range(start, start + s)))
        start += s
    return parts


def path_graph(n: int) -> LabeledGraph:
    return LabeledGraph(range(n), ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> LabeledGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return LabeledGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def star_graph(n: int) -> LabeledGraph:
    """Star on ``n`` vertices with center 0."""
    return LabeledGraph(range(n), ((0, i) for i in range(1, n)))


def wheel_graph(n: int) -> LabeledGraph:
    """Wheel on ``n`` vertices: hub 0 joined to the cycle ``1..n-1``."""
    if n < 4:
        raise ValueError("a wheel needs at least 4 vertices")
    rim = list(range(1, n))
    edges = [(0, v) for v in rim] + [(rim[i], rim[(i + 1) % len(rim)]) for i in range(len(rim))]
    return LabeledGraph(range(n), edges)


@dataclass(frozen=True)
class GraphSpec:
    """A parsed generator string, kept so closed-form solvers can see the class."""

    kind: str
    params: tuple

    def build(self) -> LabeledGraph:
        k, p = self.kind, self.params
        if k == "complete":
            return complete_graph(*p)
        if k in ("bipartite", "mpartite"):
            return complete_multipartite(p)
        if k == "path":
            return path_graph(*p)
        if k == "cycle":
            return cycle_graph(*p)
        if k == "star":
            return star_graph(*p)
        if k == "wheel":
            return wheel_graph(*p)
        if k == "gnp":
            return random_graph(*p)
        raise GraphSpecError(f"unknown generator {k!r}")


def parse_generator(text: str) -> GraphSpec:
    """Parse ``kind:args`` generator strings such as ``bipartite:3,3``."""
    kind, sep, args = text.strip().partition(":")
    if not sep:
        raise GraphSpecError(f"generator string {text!r} has no ':'")
    parts = [a for a in args.split(",") if a.strip()]
    try:
        if kind in ("complete", "path", "cycle", "star", "wheel"):
            if len(parts) != 1:
                raise GraphSpecError(f"{kind} takes one argument")
            params: tuple = (int(parts[0]),)
        elif kind == "bipartite":
            if len(parts) != 2:
                raise GraphSpecError("bipartite takes two sizes")
            params = tuple(int(x) for x in parts)
        elif kind == "mpartite":
            if not parts:
                raise GraphSpecError("mpartite needs at least one size")
            params = tuple(int(x) for x in parts)
        elif kind == "gnp":
            if len(parts) != 3:
                raise GraphSpecError("gnp takes N,P,SEED")
            params = (int(parts[0]), float(parts[1]), int(parts[2]))
        else:
            raise GraphSpecError(f"unknown generator {kind!r}")
    except ValueError as exc:
        if isinstance(exc, GraphSpecError):
            raise
        raise GraphSpecError(f"bad arguments in {text!r}: {exc}") from None
    spec = GraphSpec(kind, params)
    try:
        spec.build()
    except ValueError as exc:
        if isinstance(exc, GraphSpecError):
            raise
        raise GraphSpecError(f"{text!r}: {exc}") from None
    return spec


def parse_graph_text(text: str) -> LabeledGraph:
    """Read the edge-list format: ``n`` on the first line, then ``u v`` per edge."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphSpecError("empty graph file")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
    except ValueError:
        raise GraphSpecError("malformed graph file") from None
    if n < 0:
        raise GraphSpecError("negative vertex count")
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphSpecError(f"edge ({u}, {v}) out of range for n={n}")
    try:
        return LabeledGraph(range(n), edges)
    except SelfLoop as exc:
        raise GraphSpecError(str(exc)) from None


def format_graph_text(G: LabeledGraph) -> str:
    if G.vertices != frozenset(range(G.n)):
        raise ValueError("graph text format needs vertices 0..n-1")
    lines = [str(G.n)] + [f"{u} {v}" for u, v in sorted(G.edges)]
    return "\n".join(lines) + "\n"


def load_graph(spec: str) -> tuple[LabeledGraph, GraphSpec | None]:
    """Resolve a CLI graph argument: an existing file path or a generator string."""
    path = Path(spec)
    if path.is_file():
        return parse_graph_text(path.read_text()), None
    gen = parse_generator(spec)
    return gen.build(), gen
