"""Command-line entry point: ``cmcuts {theory,gen,analyze,cut,bp,experiment}``.

Exit status: 0 on success, 1 on runtime errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from cmcuts import __version__, branching, cuts, experiments, generator, structure, theory
from cmcuts.graph import format_edgelist, read_edgelist
from cmcuts.rng import derive_seed


class UsageError(Exception):
    pass


def _dist(args) -> theory.DegreeDistribution:
    if args.dist_file and args.regular is not None:
        raise UsageError("give either --dist-file or --regular, not both")
    if args.dist_file:
        return theory.DegreeDistribution.read(args.dist_file)
    if args.regular is not None:
        return theory.DegreeDistribution.regular(args.regular)
    raise UsageError("a degree law is required: --dist-file PATH or --regular D")


def _need_seed(args) -> int:
    if args.seed is None:
        raise UsageError("--seed is required for this subcommand")
    return args.seed


def _emit(payload: dict, args) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=_jsonable))
        return
    width = max(len(k) for k in payload) if payload else 0
    for k, v in payload.items():
        if isinstance(v, float):
            v = f"{v:.6g}"
        elif isinstance(v, (list, dict)):
            v = json.dumps(v, default=_jsonable)
        print(f"{k:<{width}}  {v}")


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def cmd_theory(args) -> int:
    dist = _dist(args)
    _emit(theory.summary(dist, k=args.k), args)
    return 0


def cmd_gen(args) -> int:
    seed = _need_seed(args)
    if args.n is None:
        raise UsageError("--n is required")
    dist = _dist(args)
    seeds = [derive_seed(seed, i) for i in range(3)]
    if dist.is_regular():
        seq = generator.regular_sequence(dist.max_degree, args.n)
    else:
        seq = generator.sample_degree_sequence(dist, args.n, seeds[0])
    g = generator.generate(seq, seeds[1])
    if args.p is not None:
        g = generator.percolate(g, args.p, seeds[2])
    text = format_edgelist(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _emit({"n": g.n, "m": g.m, "seed": seed, "parity_fix": seq.parity_fix,
               "loops": g.n_loops, "out": args.out}, args)
    else:
        sys.stdout.write(text)
    return 0


def cmd_analyze(args) -> int:
    g = read_edgelist(args.graph)
    sizes = structure.components(g).sizes
    census = structure.count_cycles(g, args.cycles)
    out = {
        "n": g.n,
        "m": g.m,
        "components": len(sizes),
        "component_sizes": sizes.tolist(),
        "giant_fraction": float(sizes[0] / g.n) if len(sizes) else 0.0,
        "pair_count": structure.count_pairs(g),
        "cycle_census": list(census.counts),
        "degree_histogram": {int(d): int(c) for d, c in zip(*np.unique(g.degrees, return_counts=True))},
    }
    try:
        cd = structure.two_core_decomposition(g, structure.largest_component(g))
    except structure.NoCoreError:
        out.update(core_size=0, tree_size_histogram={}, tc_r=[])
    else:
        ts, tc = np.unique(cd.tree_sizes(), return_counts=True)
        out["core_size"] = len(cd.core_vertices)
        out["tree_size_histogram"] = {int(a): int(b) for a, b in zip(ts, tc)}
        out["tc_r"] = structure.tc_r_curve(g, args.r)
    _emit(out, args)
    return 0


def cmd_cut(args) -> int:
    seed = _need_seed(args)
    g = read_edgelist(args.graph)
    if args.method == "greedy":
        p, res = cuts.ksection_greedy(g, args.k)
    elif args.method == "local":
        p, res = cuts.bisection_local_search(g, args.k, seed, args.restarts)
    else:
        if args.k != 2:
            raise UsageError("--method exact supports --k 2 only")
        p, res = cuts.bisection_exact(g, args.exact_limit)
    db = cuts.distbip(g, args.exact_limit, seed, args.restarts)
    out = {"width": res.width, "balanced": res.balanced, "conditions_met": res.conditions_met,
           "distbip": db.value, "exact": db.exact, "block_sizes": res.block_sizes, "method": res.method}
    if args.eps is not None or args.delta is not None:
        if args.eps is None or args.delta is None:
            raise UsageError("--eps and --delta go together")
        giant = structure.largest_component(g)
        sub, _ = g.subgraph(giant)
        if sub.n < 2:
            raise ValueError("largest component has fewer than 2 vertices")
        sp, _ = cuts.bisection_local_search(sub, 2, seed, args.restarts)
        out["eps_delta_cut"] = cuts.verify_eps_delta_cut(sub, np.arange(sub.n), sp, args.eps, args.delta)
    _emit(out, args)
    return 0


def cmd_bp(args) -> int:
    seed = _need_seed(args)
    dist = _dist(args)
    if args.mode == "survival":
        est = branching.estimate_survival(dist, args.L, args.trials, seed)
    elif args.mode == "dsr":
        est = branching.estimate_ds_r(dist, args.r, args.L, args.trials, seed)
    else:
        if args.j is None:
            raise UsageError("--mode rho needs --j")
        est = branching.estimate_rho_j(dist, args.j, args.L, args.trials, seed)
    _emit({"estimate": est.estimate, "stderr": est.stderr, "trials": est.trials}, args)
    return 0


def cmd_experiment(args) -> int:
    spec = experiments.read_spec(args.spec)
    if args.seed is not None:
        spec = replace(spec, master_seed=args.seed)
    if args.vary:
        if not args.grid:
            raise UsageError("--vary needs --grid")
        grid = [float(x) for x in args.grid.split(",")]
        res = experiments.threshold_scan(spec, args.vary, grid, args.workers)
    else:
        res = experiments.run_spec(spec, args.workers)
    if args.out:
        experiments.write_csv(res, args.out)
        payload = {"rows": len(res.rows), "out": args.out, "summary": res.summary()}
        if args.json:
            _emit(payload, args)
        else:
            for s in res.summary():
                tag = f"{s['grid_param']}={s['grid_value']} " if s["grid_param"] else ""
                print(f"{tag}{s['metric']}: mean {s['mean']:.6g} (se {s['stderr']:.3g}, n={s['count']})")
    else:
        sys.stdout.write(experiments.csv_text(res))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, help="integer seed (required by stochastic subcommands)")

    law = argparse.ArgumentParser(add_help=False)
    law.add_argument("--dist-file", help="file of 'degree probability' lines")
    law.add_argument("--regular", type=int, metavar="D", help="d-regular degree law")

    ap = argparse.ArgumentParser(prog="cmcuts", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theory", parents=[common, law], help="limit constants of a degree law")
    p.add_argument("--k", type=int, default=2, help="block count for the percolation thresholds")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("gen", parents=[common, law], help="sample a configuration-model graph")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float, help="bond percolation retention probability")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", parents=[common], help="structural report for an edge list")
    p.add_argument("graph")
    p.add_argument("--r", type=int, default=2, help="largest r in the tc_r curve")
    p.add_argument("--cycles", type=int, default=3, metavar="K", help="longest cycle length to count")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("cut", parents=[common], help="k-section, Max-Cut and DistBip of an edge list")
    p.add_argument("graph")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--method", choices=("greedy", "local", "exact"), default="greedy")
    p.add_argument("--exact-limit", type=int, default=cuts.DEFAULT_EXACT_LIMIT)
    p.add_argument("--restarts", type=int, default=cuts.DEFAULT_RESTARTS)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("bp", parents=[common, law], help="branching-process Monte Carlo")
    p.add_argument("--mode", choices=("survival", "dsr", "rho"), default="survival")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--L", type=int, default=branching.DEFAULT_L)
    p.add_argument("--j", type=int)
    p.add_argument("--trials", type=int, default=10**5)
    p.set_defaults(func=cmd_bp)

    p = sub.add_parser("experiment", parents=[common], help="run an ensemble from a JSON spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out")
    p.add_argument("--vary", choices=experiments.SCAN_PARAMS)
    p.add_argument("--grid", help="comma-separated grid values")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cmcuts {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError, RuntimeError, TypeError) as exc:
        print(f"cmcuts {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
