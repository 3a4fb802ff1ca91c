"""Command-line interface: ``gsdist {solve,distribute,sweep,verify}``.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
3 internal assertion.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from gsdist.errors import GraphSpecError, SizeLimitExceeded, SystemMismatch, TargetMismatch
from gsdist.estimators import PROTOCOLS, compile_protocol
from gsdist.graph import LabeledGraph, load_graph
from gsdist.noise import RESULT_COLUMNS, NoiseModel, estimate_fidelity, result_row
from gsdist.plotting import line_plot_svg
from gsdist.solver import best_system, c2_report
from gsdist.verify import run_all, schedule_matches_oracle

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _graph(args) -> LabeledGraph:
    spec = args.graph or getattr(args, "graph_pos", None)
    if not spec:
        raise UsageError("a graph is required (generator string or file path)")
    return load_graph(spec)[0]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _mark(flag: bool | None) -> str:
    return "n/a" if flag is None else ("ok" if flag else "VIOLATED")


def cmd_solve(args) -> int:
    G = _graph(args)
    method = args.method.replace("-", "_")
    try:
        system = best_system(G, method)
    except SizeLimitExceeded as exc:
        print(f"warning: {exc}; falling back to greedy", file=sys.stderr)
        system = best_system(G, "greedy")
    rep = c2_report(G)
    _emit(system.to_text(), args.out)
    print(f"d = {system.d} ({system.provenance})")
    print(f"lower = {rep.lower} ({'min-rank' if rep.lower_is_min_rank else 'cut-rank'})")
    print(f"upper = {rep.upper}")
    print(f"exact = {rep.exact if rep.exact is not None else 'n/a'}")
    avg = rep.avg_schmidt_rank
    print(f"E_r = {avg if avg is not None else 'n/a'}" + (f" (~{float(avg):.4f})" if avg is not None else ""))
    print(f"bound d <= n-1: {_mark(rep.upper_bound_ok)}")
    print(f"bound d > E_r: {_mark(rep.cut_rank_bound_ok)}")
    print(f"d in {{mr, mr+1}}: {_mark(rep.dichotomy_ok)}")
    return EXIT_OK


def cmd_distribute(args) -> int:
    G = _graph(args)
    sched, rep = compile_protocol(G, args.protocol, method=args.method.replace("-", "_"), aux=args.aux)
    if G.n <= 10 and not schedule_matches_oracle(sched, np.random.default_rng(args.seed)):
        print("noiseless self-check failed: schedule does not produce the target", file=sys.stderr)
        return EXIT_VERIFY
    if sched.replay_graph() != G:
        print("noiseless replay does not produce the target", file=sys.stderr)
        return EXIT_VERIFY
    _emit(sched.to_csv(), args.out)
    for k, v in rep.as_dict().items():
        print(f"{k} = {v}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def parse_vary(text: str | None) -> tuple[str, list] | None:
    """``p:lo:hi:points`` (evenly spaced) or ``n:lo:hi:step`` (inclusive)."""
    if not text:
        return None
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in ("p", "n"):
        raise UsageError(f"--vary expects p:lo:hi:points or n:lo:hi:step, got {text!r}")
    try:
        if parts[0] == "p":
            lo, hi, k = float(parts[1]), float(parts[2]), int(parts[3])
            if k < 1 or hi < lo:
                raise ValueError
            return "p", [round(float(x), 12) for x in np.linspace(lo, hi, k)]
        lo, hi, step = int(parts[1]), int(parts[2]), int(parts[3])
        if step < 1 or hi < lo:
            raise ValueError
        return "n", list(range(lo, hi + 1, step))
    except ValueError:
        raise UsageError(f"bad range in --vary {text!r}") from None


def graph_for_n(template: str, n: int) -> LabeledGraph:
    """Instantiate a template such as ``complete:{n}`` or ``bipartite:{h},{h}``."""
    if "{" not in template:
        raise UsageError("an n sweep needs a graph template with {n} or {h}")
    return load_graph(template.format(n=n, h=n // 2))[0]


def cmd_sweep(args) -> int:
    vary = parse_vary(args.vary)
    protocols = [p.strip() for p in (args.protocols or args.protocol).split(",") if p.strip()]
    for p in protocols:
        if p not in PROTOCOLS:
            raise UsageError(f"unknown protocol {p!r}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    template = args.graph or args.graph_pos
    if not template:
        raise UsageError("a graph is required")
    axis, values = vary if vary else ("p", [args.p])
    rows = []
    series: dict[str, list[tuple[float, float]]] = {p: [] for p in protocols}
    fixed = None if axis == "n" else load_graph(template)[0]
    for proto in protocols:
        compiled = {}
        for x in values:
            G = graph_for_n(template, x) if axis == "n" else fixed
            if G.n not in compiled:
                compiled[G.n] = compile_protocol(G, proto, method=args.method.replace("-", "_"), aux=args.aux)
            sched, rep = compiled[G.n]
            model = NoiseModel(x if axis == "p" else args.p, args.pmem, args.noise_on_measure == "on")
            est = estimate_fidelity(sched, model, args.trials, args.seed)
            rows.append(result_row(proto, G.n, model, est, rep))
            series[proto].append((float(x), est.mean))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=RESULT_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _emit(buf.getvalue(), args.out)
    if args.svg:
        xlabel = "gate error probability p" if axis == "p" else "number of qubits n"
        Path(args.svg).write_text(line_plot_svg(series, xlabel))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.n_max > 10 or args.n_max < 2:
        raise UsageError("--n-max must be between 2 and 10")
    results = run_all(args.n_max, args.samples, args.seed)
    for r in results:
        print(r.line())
        for f in r.failures[:5]:
            print(f"  reproducer: {f} (seed {args.seed})")
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gsdist", description="Graph-state distribution over a star network.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("graph_pos", nargs="?", metavar="GRAPH", help="generator string or graph file")
        p.add_argument("--graph", help="generator string (e.g. wheel:5) or graph file")
        p.add_argument("--method", default="auto", help="auto|exact|greedy|elimination|closed-form|trivial")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="find a complementation system and report bounds")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("distribute", help="compile a schedule and report resources")
    common(p)
    p.add_argument("--protocol", default="sc", choices=PROTOCOLS)
    p.add_argument("--aux", type=int, default=None, help="auxiliary qubits for sc-parallel")
    p.set_defaults(func=cmd_distribute)

    p = sub.add_parser("sweep", help="fidelity sweep over p or n")
    common(p)
    p.add_argument("--protocol", default="sc")
    p.add_argument("--protocols", help="comma-separated protocols (overrides --protocol)")
    p.add_argument("--aux", type=int, default=None)
    p.add_argument("--p", type=float, default=1e-3, help="gate error probability when not varied")
    p.add_argument("--pmem", type=float, default=0.0, help="idle dephasing probability per round")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--vary", help="p:lo:hi:points or n:lo:hi:step")
    p.add_argument("--svg", help="write an SVG line plot here")
    p.add_argument("--noise-on-measure", choices=("on", "off"), default="on")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle cross-check suites")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TargetMismatch, SystemMismatch) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except AssertionError as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
