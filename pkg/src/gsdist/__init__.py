"""Distribution of graph states over a star network by subgraph complementation."""

from __future__ import annotations

from gsdist.estimators import DistributionCompiler, FidelityEstimator, ScSystemSolver, check_graph, compile_protocol
from gsdist.graph import LabeledGraph, load_graph, parse_generator
from gsdist.noise import FidelityEstimate, NoiseModel, estimate_fidelity, simulate_trial
from gsdist.parallel import ParallelConfig, ghz_log_depth, parallel_distribute
from gsdist.protocol import baseline_factory, clique_protocol, distribute
from gsdist.schedule import GateOp, ResourceReport, Schedule, resources
from gsdist.solver import ScSystem, best_system, c2_report, exact_min_system, replay

__version__ = "0.1.0"

__all__ = [
    "DistributionCompiler",
    "FidelityEstimate",
    "FidelityEstimator",
    "GateOp",
    "LabeledGraph",
    "NoiseModel",
    "ParallelConfig",
    "ResourceReport",
    "ScSystem",
    "ScSystemSolver",
    "Schedule",
    "baseline_factory",
    "best_system",
    "c2_report",
    "check_graph",
    "clique_protocol",
    "compile_protocol",
    "distribute",
    "estimate_fidelity",
    "exact_min_system",
    "ghz_log_depth",
    "load_graph",
    "parallel_distribute",
    "parse_generator",
    "replay",
    "resources",
    "simulate_trial",
]
