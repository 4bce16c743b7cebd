"""Command-line front end.

Subcommands: solve (the tree-decomposition DP), oracle (exhaustive
reference), gen (instance files), gadget (build/verify relation gadgets),
bench (width-sweep scaling runs with CSV and figure output).

Reports are JSON on stdout; human-readable progress goes to stderr.  Exit
codes for solve/oracle: 0 feasible, 1 infeasible, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from .gadgets import (
    HwRelation,
    build_hw_gadget,
    realized_hw_relation,
    verify_realization,
)
from .graphs import (
    Graph,
    GraphWithPortals,
    decomposition_to_td,
    graph_to_gr,
    heuristic_decomposition,
    make_nice,
    parse_decomposition,
    parse_graph,
)
from .instances import (
    cnf_to_dimacs,
    gen_alloff,
    gen_comb,
    gen_grid,
    gen_random,
    gen_reflexive_alloff,
    parse_dimacs,
)
from .oracle import OracleCapError, brute_force_sizes
from .residues import ProblemSpec, parse_residue_class
from .solver import DPOptions, SolveReport, solve


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _load_spec(args) -> ProblemSpec:
    if args.sigma is None or args.rho is None:
        raise CliError("--sigma and --rho are required")
    try:
        return ProblemSpec(parse_residue_class(args.sigma), parse_residue_class(args.rho))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _load_graph(args) -> Graph:
    if not args.gr:
        raise CliError("--gr is required")
    return parse_graph(_read(args.gr))


def _load_shifts(path: str, g: Graph, m: int) -> list[int]:
    """Shift file: lines `<vertex> <shift>` with 1-based vertices; vertices
    not mentioned shift by 0."""
    shifts = [0] * g.n
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CliError(f"{path}:{lineno}: expected '<vertex> <shift>'")
        v, s = int(parts[0]), int(parts[1])
        if not 1 <= v <= g.n:
            raise CliError(f"{path}:{lineno}: vertex {v} out of range")
        if not 0 <= s < m:
            raise CliError(f"{path}:{lineno}: shift {s} outside [0, {m})")
        shifts[v - 1] = s
    return shifts


def _emit_report(report: SolveReport, args) -> int:
    payload = json.dumps(report.to_json(), indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(payload + "\n")
    else:
        print(payload)
    mode = getattr(args, "mode", "all-sizes")
    if mode == "min":
        print(f"min size: {report.min_size}", file=sys.stderr)
    elif mode == "max":
        print(f"max size: {report.max_size}", file=sys.stderr)
    elif mode == "decide":
        print(f"feasible: {report.decision}", file=sys.stderr)
    return 0 if report.decision else 1


def cmd_solve(args) -> int:
    g = _load_graph(args)
    spec = _load_spec(args)
    if args.td:
        td = parse_decomposition(_read(args.td), g)
    elif args.heuristic_td:
        td = heuristic_decomposition(g)
    else:
        raise CliError("supply --td or --heuristic-td")
    shifts = _load_shifts(args.shifts, g, spec.m) if args.shifts else None
    options = DPOptions(
        join="naive" if args.naive_join else "fast",
        force_convolution=args.force_convolution,
        threads=args.threads,
        debug=args.debug_checks,
    )
    report = solve(g, make_nice(td), spec, shifts=shifts, options=options)
    print(
        f"solved n={g.n} width={td.width} nodes={report.stats['nodes']} "
        f"max_states={report.stats['max_language_size']}",
        file=sys.stderr,
    )
    return _emit_report(report, args)


def cmd_oracle(args) -> int:
    g = _load_graph(args)
    spec = _load_spec(args)
    shifts = _load_shifts(args.shifts, g, spec.m) if args.shifts else None
    feasible = brute_force_sizes(g, spec, shifts=shifts, cap=args.cap)
    hits = [s for s, ok in enumerate(feasible) if ok]
    report = SolveReport(
        [bool(b) for b in feasible],
        hits[0] if hits else None,
        hits[-1] if hits else None,
        bool(hits),
        {"engine": "oracle", "n": g.n},
        spec,
        shifted=shifts is not None,
    )
    return _emit_report(report, args)


def _write_instance(prefix: str, graph, td, meta: dict) -> None:
    Path(prefix + ".gr").write_text(graph_to_gr(graph))
    Path(prefix + ".td").write_text(decomposition_to_td(td, graph.n))
    Path(prefix + ".json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"wrote {prefix}.gr, {prefix}.td, {prefix}.json", file=sys.stderr)


def cmd_gen(args) -> int:
    if args.family == "lightsout":
        graph, td = gen_grid(args.rows, args.cols)
        meta = {"family": "lightsout", "rows": args.rows, "cols": args.cols,
                "width": td.width}
        _write_instance(args.out_prefix, graph, td, meta)
    elif args.family == "sat":
        formula = parse_dimacs(_read(args.cnf))
        gen = gen_reflexive_alloff if args.variant == "reflexive" else gen_alloff
        red = gen(formula, k=args.k)
        meta = {
            "family": "sat",
            "variant": args.variant,
            "target_size": red.target_size,
            "k": red.k,
            "width": red.decomposition.width,
            "sigma": {"a": red.spec.sigma.a, "m": red.spec.sigma.m},
            "rho": {"a": red.spec.rho.a, "m": red.spec.rho.m},
            "roles": {str(v + 1): role for v, role in sorted(red.roles.items())},
        }
        _write_instance(args.out_prefix, red.graph, red.decomposition, meta)
    elif args.family == "random":
        graph = gen_random(args.n, args.p, args.seed)
        Path(args.out_prefix + ".gr").write_text(graph_to_gr(graph))
        print(f"wrote {args.out_prefix}.gr", file=sys.stderr)
    elif args.family == "comb":
        inst = gen_comb(args.width, m=args.m)
        meta = {
            "family": "comb",
            "width": inst.width,
            "m": inst.spec.m,
            "sigma": {"a": inst.spec.sigma.a, "m": inst.spec.sigma.m},
            "rho": {"a": inst.spec.rho.a, "m": inst.spec.rho.m},
        }
        _write_instance(args.out_prefix, inst.graph, inst.decomposition, meta)
        shift_lines = [
            f"{v + 1} {s}" for v, s in enumerate(inst.shifts) if s
        ]
        Path(args.out_prefix + ".shifts").write_text("\n".join(shift_lines) + "\n")
        print(f"wrote {args.out_prefix}.shifts", file=sys.stderr)
    else:
        raise CliError(f"unknown family {args.family!r}")
    return 0


def cmd_gadget(args) -> int:
    spec = _load_spec(args)
    if args.action == "build":
        gp = build_hw_gadget(spec, args.arity)
        Path(args.out_prefix + ".gr").write_text(graph_to_gr(gp.graph))
        Path(args.out_prefix + ".portals").write_text(
            "".join(f"{v + 1}\n" for v in gp.portals)
        )
        print(
            f"wrote {args.out_prefix}.gr and {args.out_prefix}.portals "
            f"({gp.graph.n} vertices)",
            file=sys.stderr,
        )
        return 0
    # verify
    g = _load_graph(args)
    portals = tuple(
        int(line) - 1
        for line in _read(args.portals).split()
        if line.strip()
    )
    gp = GraphWithPortals(g, portals)
    if args.relation == "hw1":
        rel = HwRelation.exactly_one(len(portals))
    else:
        rel = realized_hw_relation(spec, len(portals))
    ok = verify_realization(gp, rel, spec, cap=args.cap)
    print(json.dumps({"schema": 1, "realizes": bool(ok)}))
    return 0 if ok else 1


def cmd_bench(args) -> int:
    lo, _, hi = args.w.partition("..")
    widths = range(int(lo), int(hi or lo) + 1)
    engines = ("fast", "naive") if args.engine == "both" else (args.engine,)
    rows = bench_mod.run_bench(
        m=args.m,
        widths=widths,
        engines=engines,
        naive_max_w=args.naive_max_w,
        threads=args.threads,
        log=sys.stderr,
    )
    csv_text = bench_mod.rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(csv_text)
        print(f"wrote {args.csv}", file=sys.stderr)
    else:
        print(csv_text, end="")
    for engine in engines:
        slope = bench_mod.fit_slope(rows, engine)
        if slope is not None:
            print(f"{engine} slope of ln(total_ms) vs w: {slope:.4f}", file=sys.stderr)
    if args.plot:
        bench_mod.render_plot(rows, args.plot)
        print(f"wrote {args.plot}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srdomset",
        description="(sigma,rho)-domination solver for residue-class sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec(p):
        p.add_argument("--sigma", help="sigma residue class, e.g. 0/2")
        p.add_argument("--rho", help="rho residue class, e.g. 1/2")

    p_solve = sub.add_parser("solve", help="run the tree-decomposition DP")
    p_solve.add_argument("--gr", required=True, help="graph file (.gr)")
    p_solve.add_argument("--td", help="tree decomposition file (.td)")
    p_solve.add_argument(
        "--heuristic-td", action="store_true",
        help="derive a decomposition by min-fill when no .td is supplied",
    )
    add_spec(p_solve)
    p_solve.add_argument("--mode", choices=["all-sizes", "decide", "min", "max"],
                         default="all-sizes")
    p_solve.add_argument("--shifts", help="per-vertex shift file")
    p_solve.add_argument("--out", help="write the JSON report here")
    p_solve.add_argument("--threads", type=int, default=1)
    p_solve.add_argument("--naive-join", action="store_true",
                         help="pairwise join baseline instead of the fast join")
    p_solve.add_argument("--force-convolution", action="store_true",
                         help="disable the small-case pairwise shortcut")
    p_solve.add_argument("--debug-checks", action="store_true",
                         help="cross-check joins and convolutions")
    p_solve.set_defaults(func=cmd_solve)

    p_oracle = sub.add_parser("oracle", help="exhaustive reference solver")
    p_oracle.add_argument("--gr", required=True)
    add_spec(p_oracle)
    p_oracle.add_argument("--mode", choices=["all-sizes", "decide", "min", "max"],
                          default="all-sizes")
    p_oracle.add_argument("--shifts")
    p_oracle.add_argument("--out")
    p_oracle.add_argument("--cap", type=int, default=None,
                          help="vertex cap (default 22; env SRK_ORACLE_CAP)")
    p_oracle.set_defaults(func=cmd_oracle)

    p_gen = sub.add_parser("gen", help="generate instance files")
    gsub = p_gen.add_subparsers(dest="family", required=True)
    g_lo = gsub.add_parser("lightsout", help="grid graph + staircase path decomposition")
    g_lo.add_argument("rows", type=int)
    g_lo.add_argument("cols", type=int)
    g_lo.add_argument("--out-prefix", default="lightsout")
    g_sat = gsub.add_parser("sat", help="SAT reduction instance from a DIMACS file")
    g_sat.add_argument("cnf")
    g_sat.add_argument("--variant", choices=["reflexive", "alloff"], default="reflexive")
    g_sat.add_argument("-k", type=int, default=None, help="clause width override")
    g_sat.add_argument("--out-prefix", default="sat")
    g_rand = gsub.add_parser("random", help="seeded Erdos-Renyi graph")
    g_rand.add_argument("n", type=int)
    g_rand.add_argument("p", type=float)
    g_rand.add_argument("seed", type=int)
    g_rand.add_argument("--out-prefix", default="random")
    g_comb = gsub.add_parser("comb", help="comb scaling instance")
    g_comb.add_argument("width", type=int)
    g_comb.add_argument("--m", type=int, default=3)
    g_comb.add_argument("--out-prefix", default="comb")
    p_gen.set_defaults(func=cmd_gen)

    p_gadget = sub.add_parser("gadget", help="build or verify relation gadgets")
    p_gadget.add_argument("action", choices=["build", "verify"])
    add_spec(p_gadget)
    p_gadget.add_argument("--arity", "-k", type=int, default=3)
    p_gadget.add_argument("--out-prefix", default="gadget")
    p_gadget.add_argument("--gr", help="gadget graph (verify)")
    p_gadget.add_argument("--portals", help="portal list file (verify)")
    p_gadget.add_argument("--relation", choices=["hw1", "hw-mod"], default="hw-mod",
                          help="verify against HW=1 or the weight-mod-m relation")
    p_gadget.add_argument("--cap", type=int, default=None)
    p_gadget.set_defaults(func=cmd_gadget)

    p_bench = sub.add_parser("bench", help="width-sweep scaling benchmark")
    p_bench.add_argument("--m", type=int, default=3)
    p_bench.add_argument("--w", default="8..14", help="width range lo..hi")
    p_bench.add_argument("--engine", choices=["fast", "naive", "both"], default="both")
    p_bench.add_argument("--naive-max-w", type=int, default=bench_mod.DEFAULT_NAIVE_MAX_W)
    p_bench.add_argument("--threads", type=int, default=1)
    p_bench.add_argument("--csv", help="write rows to this CSV file")
    p_bench.add_argument("--plot", help="write the scaling figure (PNG) here")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, OracleCapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
