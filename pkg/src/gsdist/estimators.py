"""scikit-learn style front ends for solving, compiling and simulating.

Each estimator takes its target graph in ``fit``; graphs may be given as a
:class:`LabeledGraph`, a generator string such as ``"wheel:5"``, or a
symmetric 0/1 adjacency array.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from gsdist.gf2 import BitMatrix
from gsdist.graph import LabeledGraph, load_graph
from gsdist.noise import FidelityEstimate, NoiseModel, estimate_fidelity
from gsdist.parallel import ParallelConfig, parallel_distribute
from gsdist.protocol import baseline_factory, distribute
from gsdist.schedule import ResourceReport, Schedule
from gsdist.solver import C2Report, ScSystem, best_system, c2_report

PROTOCOLS = ("sc", "sc-parallel", "factory", "factory-parallel")


def check_graph(G) -> LabeledGraph:
    """Coerce ``G`` to a graph on vertices ``0..n-1``."""
    if isinstance(G, LabeledGraph):
        if G.vertices != frozenset(range(G.n)):
            raise ValueError("graph vertices must be 0..n-1")
        return G
    if isinstance(G, str):
        return load_graph(G)[0]
    A = check_array(G, dtype=np.int64, ensure_min_samples=1, ensure_min_features=1)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency must be square, got {A.shape}")
    if not np.array_equal(A, A.T) or np.any(np.diag(A)) or not np.isin(A, (0, 1)).all():
        raise ValueError("adjacency must be symmetric 0/1 with zero diagonal")
    return LabeledGraph.from_adjacency(BitMatrix.from_rows(A.tolist()))


def compile_protocol(
    G: LabeledGraph,
    protocol: str = "sc",
    *,
    system: ScSystem | None = None,
    method: str = "auto",
    aux: int | None = None,
    hub_vertex: int | None = 0,
) -> tuple[Schedule, ResourceReport]:
    """Schedule and resources for one of the four protocols."""
    if protocol == "sc":
        return distribute(G, system, hub_vertex=hub_vertex, method=method)
    if protocol == "sc-parallel":
        return parallel_distribute(G, system, ParallelConfig(aux), hub_vertex=hub_vertex, method=method)
    if protocol in ("factory", "factory-parallel"):
        return baseline_factory(G, parallel=protocol == "factory-parallel")
    raise ValueError(f"unknown protocol {protocol!r}; choose from {', '.join(PROTOCOLS)}")


class ScSystemSolver(BaseEstimator):
    """Find a small complementation system and the bounds around it.

    Parameters
    ----------
    method : str
        ``auto``, ``exact``, ``greedy``, ``elimination``, ``closed_form`` or
        ``trivial``.
    exact_limit : int
        Largest vertex count handed to the exact solver.
    """

    def __init__(self, method: str = "auto", exact_limit: int = 8):
        self.method = method
        self.exact_limit = exact_limit

    def fit(self, G, y=None) -> ScSystemSolver:
        G = check_graph(G)
        self.graph_ = G
        self.system_: ScSystem = best_system(G, self.method, self.exact_limit)
        self.report_: C2Report = c2_report(G, exact_limit=self.exact_limit)
        self.n_sets_ = self.system_.d
        return self

    def transform(self, G=None) -> np.ndarray:
        """Set-by-vertex 0/1 incidence matrix of the fitted system."""
        check_is_fitted(self, "system_")
        out = np.zeros((self.system_.d, self.system_.n), dtype=np.int8)
        for i, s in enumerate(self.system_.sets):
            out[i, sorted(s)] = 1
        return out

    def predict(self, graphs) -> np.ndarray:
        """System size for each graph in ``graphs``."""
        return np.array([best_system(check_graph(g), self.method, self.exact_limit).d for g in graphs])


class DistributionCompiler(BaseEstimator):
    """Compile a distribution schedule for a target graph."""

    def __init__(self, protocol: str = "sc", method: str = "auto", aux: int | None = None, hub_vertex: int | None = 0):
        self.protocol = protocol
        self.method = method
        self.aux = aux
        self.hub_vertex = hub_vertex

    def fit(self, G, y=None) -> DistributionCompiler:
        G = check_graph(G)
        self.schedule_, self.resources_ = compile_protocol(
            G, self.protocol, method=self.method, aux=self.aux, hub_vertex=self.hub_vertex
        )
        return self

    def transform(self, G=None) -> str:
        """Schedule as CSV text."""
        check_is_fitted(self, "schedule_")
        return self.schedule_.to_csv()


class FidelityEstimator(BaseEstimator):
    """Monte Carlo fidelity of a compiled protocol under gate noise."""

    def __init__(
        self,
        protocol: str = "sc",
        p_gate: float = 1e-3,
        p_mem: float = 0.0,
        trials: int = 10_000,
        seed: int = 0,
        noise_on_measure: bool = True,
        aux: int | None = None,
        method: str = "auto",
    ):
        self.protocol = protocol
        self.p_gate = p_gate
        self.p_mem = p_mem
        self.trials = trials
        self.seed = seed
        self.noise_on_measure = noise_on_measure
        self.aux = aux
        self.method = method

    def _model(self, p_gate: float | None = None) -> NoiseModel:
        p = self.p_gate if p_gate is None else p_gate
        return NoiseModel(p, self.p_mem, self.noise_on_measure)

    def fit(self, G, y=None) -> FidelityEstimator:
        G = check_graph(G)
        self.schedule_, self.resources_ = compile_protocol(G, self.protocol, method=self.method, aux=self.aux)
        self.estimate_: FidelityEstimate = estimate_fidelity(self.schedule_, self._model(), self.trials, self.seed)
        return self

    def predict(self, p_values) -> np.ndarray:
        """Fidelity at each gate error probability in ``p_values``."""
        check_is_fitted(self, "schedule_")
        return np.array(
            [estimate_fidelity(self.schedule_, self._model(float(p)), self.trials, self.seed).mean for p in p_values]
        )

    def score(self, G=None, y=None) -> float:
        check_is_fitted(self, "estimate_")
        return self.estimate_.mean
