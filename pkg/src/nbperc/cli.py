"""Command-line interface.

Exit codes: 0 success, 2 bad input (parse, schema, parameters), 3 numerical
non-convergence (a report is still emitted), 4 structurally valid but
non-percolating pattern.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from ._kernels import active_backend
from .errors import EdgeListError, InvalidPatternError, PatternFormatError
from .graphs import (FamilySpec, Graph, format_edge_list, generate,
                     parse_edge_list, scu_truncation)
from .simulate import estimate_threshold, site_percolation_sweep, to_csv
from .spectral import adjacency_spectral_radius, parse_pattern, pattern_hashimoto
from .thresholds import bounds_report, pattern_threshold

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_PATTERN = 4


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph(path: str) -> Graph:
    return parse_edge_list(_read_text(path)).graph


def _bounds_text(rep) -> str:
    def fmt(x):
        return "n/a" if x is None else f"{x:.10g}"
    lines = [
        f"graph: n={rep.n} m={rep.m} d_max={rep.d_max} d_min={rep.d_min} "
        f"connected={rep.connected} forest={rep.forest}",
        f"{'quantity':<18}{'value':<16}note",
        f"{'estimate_random':<18}{fmt(rep.estimate_random):<16}"
        "heuristic (uncorrelated random-graph formula)",
        f"{'bound_maxdeg':<18}{fmt(rep.bound_maxdeg):<16}1/(d_max - 1)",
        f"{'bound_nb':<18}{fmt(rep.bound_nb):<16}1/rho(non-backtracking), rigorous lower bound",
        f"{'bound_adjacency':<18}{fmt(rep.bound_adjacency):<16}1/rho(adjacency), strictly smaller",
    ]
    if rep.forest:
        lines.append("strict check: skipped (forest, nb radius 0)")
    else:
        margin = rep.adjacency_rho - rep.nb_rho
        ok = "OK" if margin > 0 else "VIOLATED"
        lines.append(
            f"strict check: adjacency_rho {rep.adjacency_rho:.10g} > "
            f"nb_rho {rep.nb_rho:.10g}: {ok} (margin {margin:.4g})"
        )
    if not rep.converged:
        lines.append("warning: power iteration did not converge; values are best estimates")
    return "\n".join(lines) + "\n"


def _bounds_csv(rep) -> str:
    d = rep.to_json_dict()
    head = ",".join(d.keys())
    row = ",".join("" if v is None else str(v) for v in d.values())
    return f"{head}\n{row}\n"


def _run_analyze(args) -> int:
    try:
        g = _load_graph(args.input)
        rep = bounds_report(g, tol=args.tol, max_iter=args.max_iter)
    except (EdgeListError, ValueError, OSError) as exc:
        print(f"analyze: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        out = json.dumps(rep.to_json_dict(), indent=2) + "\n"
    elif args.format == "csv":
        out = _bounds_csv(rep)
    else:
        out = _bounds_text(rep)
    _write_text(args.output, out)
    return EXIT_OK if rep.converged else EXIT_NUMERIC


def _run_generate(args) -> int:
    spec = FamilySpec(family=args.family, d=args.d, r=args.r,
                      chain_len=args.chain_len, depth=args.depth,
                      n=args.n, p=args.p, seed=args.seed)
    try:
        g = generate(spec)
    except ValueError as exc:
        print(f"generate: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_text(args.output, format_edge_list(g))
    print(f"generated {args.family}: n={g.n} m={g.m}", file=sys.stderr)
    return EXIT_OK


def _run_pattern(args) -> int:
    try:
        pat = parse_pattern(_read_text(args.input))
        spec = pattern_hashimoto(pat)
        threshold = pattern_threshold(pat)
    except (PatternFormatError, OSError) as exc:
        print(f"pattern: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidPatternError as exc:
        print(f"pattern: {exc}", file=sys.stderr)
        return EXIT_PATTERN
    doc = {
        "classes": pat.classes,
        "states": [list(s) for s in spec.states],
        "rho": spec.rho,
        "threshold": threshold,
    }
    _write_text(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _run_simulate(args) -> int:
    try:
        g = _load_graph(args.input)
        result = site_percolation_sweep(g, trials=args.trials,
                                        master_seed=args.seed, grid=args.grid,
                                        threads=args.threads)
        est = estimate_threshold(result, criterion=args.criterion, level=args.level)
    except (EdgeListError, ValueError, OSError) as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_text(args.output, to_csv(result, curves=args.curves))
    print(f"threshold estimate: p_hat={est.p_hat!r} "
          f"uncertainty={est.uncertainty!r} criterion={est.criterion}",
          file=sys.stderr)
    return EXIT_OK


def _run_scu(args) -> int:
    try:
        g = _load_graph(args.input)
        rows = []
        for k in range(1, args.copies + 1):
            trunc = scu_truncation(g, (args.edge[0], args.edge[1]), k)
            rho = adjacency_spectral_radius(trunc, tol=args.tol)
            rows.append((k, trunc.n, trunc.m, rho))
        final = scu_truncation(g, (args.edge[0], args.edge[1]), args.copies)
        rho_orig = adjacency_spectral_radius(g, tol=args.tol)
    except (EdgeListError, ValueError, OSError) as exc:
        print(f"scu: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_text(args.output, format_edge_list(final))
    print(f"{'copies':<8}{'n':<8}{'m':<8}adjacency_rho", file=sys.stderr)
    for k, n, m, rho in rows:
        print(f"{k:<8}{n:<8}{m:<8}{rho:.10g}", file=sys.stderr)
    print(f"original graph adjacency_rho = {rho_orig:.10g}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nbperc",
        description="Percolation threshold bounds from non-backtracking spectra",
    )
    ap.add_argument("--version", action="version",
                    version=f"nbperc {__version__} (kernels: {active_backend()})")
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="bounds report for an edge-list graph")
    pa.add_argument("input", help="edge-list file, or - for stdin")
    pa.add_argument("--tol", type=float, default=1e-10)
    pa.add_argument("--max-iter", type=int, default=100_000)
    pa.add_argument("--format", choices=("json", "text", "csv"), default="json")
    pa.add_argument("--output", default=None)
    pa.set_defaults(func=_run_analyze)

    pg = sub.add_parser("generate", help="write a family graph as an edge list")
    pg.add_argument("--family", required=True,
                    choices=("regular_tree", "chain_tree", "cycle", "complete",
                             "path", "random_regular", "binomial_random"))
    pg.add_argument("--d", type=int, default=None)
    pg.add_argument("--r", type=int, default=None)
    pg.add_argument("--chain-len", dest="chain_len", type=int, default=None)
    pg.add_argument("--depth", type=int, default=None)
    pg.add_argument("--n", type=int, default=None)
    pg.add_argument("--p", type=float, default=None)
    pg.add_argument("--seed", type=int, default=None)
    pg.add_argument("--output", default=None)
    pg.set_defaults(func=_run_generate)

    pp = sub.add_parser("pattern", help="threshold of a quotient-pattern tree")
    pp.add_argument("input", help="pattern JSON file, or - for stdin")
    pp.add_argument("--output", default=None)
    pp.set_defaults(func=_run_pattern)

    ps = sub.add_parser("simulate", help="Monte Carlo sweep, CSV curves")
    ps.add_argument("input", help="edge-list file, or - for stdin")
    ps.add_argument("--trials", type=int, default=100)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--grid", type=int, default=201)
    ps.add_argument("--threads", type=int, default=None,
                    help="trial fan-out (default: NBPERC_SIM_THREADS or 1)")
    ps.add_argument("--criterion", choices=("susceptibility-peak", "fraction-crossing"),
                    default="susceptibility-peak")
    ps.add_argument("--level", type=float, default=0.1,
                    help="crossing level for fraction-crossing")
    ps.add_argument("--curves", choices=("canonical", "micro"), default="canonical")
    ps.add_argument("--output", default=None)
    ps.set_defaults(func=_run_simulate)

    pc = sub.add_parser("scu", help="unroll one non-bridge edge into k chained copies")
    pc.add_argument("input", help="edge-list file, or - for stdin")
    pc.add_argument("--edge", type=int, nargs=2, required=True, metavar=("U", "V"))
    pc.add_argument("--copies", type=int, default=4)
    pc.add_argument("--tol", type=float, default=1e-10)
    pc.add_argument("--output", default=None)
    pc.set_defaults(func=_run_scu)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
