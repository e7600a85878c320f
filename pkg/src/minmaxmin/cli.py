"""Command-line front end: single solves, benchmark sweeps, bound calculators.

Exit codes: 0 success, 2 invalid input, 3 time/node limit hit before
optimality (the incumbent is still printed).  Gaps are printed as percentages
with two decimals; the benchmark CSV keeps full precision for downstream
plotting.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bnb, guarantees, instances
from .bnb import BnbConfig, InfeasibleInstanceError

CSV_HEADER = [
    "problem", "n_or_V", "gamma", "k", "seed",
    "solved", "time_s", "nodes", "root_gap_pct", "opt_gap_pct",
]
OUT_DIR_ENV = "MINMAXMIN_OUT_DIR"


def _resolve_out(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _load_problem(args):
    if args.instance:
        inst = instances.load(args.instance)
        return inst.to_problem()
    if args.gen == "knapsack":
        return instances.gen_knapsack(args.n, args.seed).to_problem()
    if args.gen == "shortest_path":
        return instances.gen_shortest_path(args.nodes, args.gamma, args.seed).to_problem()
    raise SystemExit("either --instance or --gen is required")


def _config_from(args) -> BnbConfig:
    return BnbConfig(
        time_limit=args.time_limit,
        gap_tol=args.gap_tol,
        node_cap=args.node_cap,
        symmetry=not args.no_symmetry,
        log_interval=args.log_interval,
    )


def cmd_solve(args) -> int:
    try:
        problem = _load_problem(args)
    except (OSError, instances.InstanceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        result = bnb.solve(problem, args.k, _config_from(args))
    except InfeasibleInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    s = result.stats
    print(f"instance      {problem.name or args.instance}")
    print(f"k             {args.k}")
    print(f"value         {result.value:.6f}")
    print(f"lower bound   {result.lb:.6f}")
    print(f"root gap      {100 * s.root_gap:.2f}%")
    print(f"opt gap       {100 * s.final_gap:.2f}%")
    print(f"nodes         {s.nodes_processed}")
    print(f"time          {s.wall_time:.2f}s")
    print(f"status        {'optimal' if s.solved else s.stop_reason}")
    if args.out:
        doc = {
            "value": result.value,
            "lower_bound": result.lb,
            "solved": s.solved,
            "tuple": [x.bits.tolist() for x in result.best],
        }
        out = _resolve_out(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(doc, indent=1) + "\n")
    return 0 if s.solved else 3


def _bench_cell(job):
    problem, size, gamma, k, seed, time_limit = job
    if problem == "knapsack":
        inst = instances.gen_knapsack(size, seed)
    else:
        inst = instances.gen_shortest_path(size, gamma, seed)
    result = bnb.solve(inst.to_problem(), k, BnbConfig(time_limit=time_limit))
    s = result.stats
    return {
        "problem": problem,
        "n_or_V": size,
        "gamma": inst.gamma,
        "k": k,
        "seed": seed,
        "solved": int(s.solved),
        "time_s": s.wall_time,
        "nodes": s.nodes_processed,
        "root_gap_pct": 100.0 * s.root_gap,
        "opt_gap_pct": 100.0 * s.final_gap,
    }


def cmd_bench(args) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    ks = [int(x) for x in args.ks.split(",")]
    if args.gammas:
        gammas = [float(x) for x in args.gammas.split(",")]
    elif args.problem == "knapsack":
        gammas = [None]  # the recipe pins gamma to floor(n/20)
    else:
        gammas = [3.0, 6.0]

    jobs = []
    for size in sizes:
        for gamma in gammas:
            for k in ks:
                for i in range(args.per_cell):
                    jobs.append((args.problem, size, gamma, k, args.seed_base + i, args.time_limit))

    out = _resolve_out(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
        fh.flush()
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                for row in pool.map(_bench_cell, jobs):
                    writer.writerow(row)
                    fh.flush()  # interruption loses nothing
                    rows.append(row)
        else:
            for job in jobs:
                row = _bench_cell(job)
                writer.writerow(row)
                fh.flush()
                rows.append(row)
    print(f"wrote {len(rows)} rows to {out}")

    if args.aggregate:
        agg = _aggregate(rows)
        agg_path = out.with_name(out.stem + "_agg.csv")
        with open(agg_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(agg[0].keys()) if agg else CSV_HEADER)
            writer.writeheader()
            writer.writerows(agg)
        print(f"wrote aggregate to {agg_path}")
        _print_aggregate(agg)
    return 0


def _aggregate(rows):
    cells: dict = {}
    for row in rows:
        cells.setdefault((row["problem"], row["n_or_V"], row["gamma"], row["k"]), []).append(row)
    out = []
    for (problem, size, gamma, k), group in sorted(cells.items()):
        solved = [r for r in group if r["solved"]]
        out.append(
            {
                "problem": problem,
                "n_or_V": size,
                "gamma": gamma,
                "k": k,
                "solved": len(solved),
                "instances": len(group),
                # runtime averaged only over the instances that finished
                "time_s": round(sum(r["time_s"] for r in solved) / len(solved), 2) if solved else "",
                "nodes": round(sum(r["nodes"] for r in group) / len(group), 2),
                "root_gap_pct": round(sum(r["root_gap_pct"] for r in group) / len(group), 2),
                "opt_gap_pct": round(sum(r["opt_gap_pct"] for r in group) / len(group), 2),
            }
        )
    return out


def _print_aggregate(agg) -> None:
    cols = ["problem", "n_or_V", "gamma", "k", "solved", "instances", "time_s", "nodes", "root_gap_pct", "opt_gap_pct"]
    print("  ".join(f"{c:>12}" for c in cols))
    for row in agg:
        print("  ".join(f"{row[c]!s:>12}" for c in cols))


def cmd_bounds(args) -> int:
    if args.example == "recoverable":
        rows = guarantees.recoverable_table(n=args.n or 1000, M=args.M or 400.0, mt=args.mtilde or 2.0)
        print(f"{'a(n)':>10}  {'additive':>10}  {'multiplicative':>14}")
        for row in rows:
            add = f"{row['additive_fraction']}n"
            mult = f"{row['multiplicative_fraction']}n"
            print(f"{row['a']:>10}  {add:>10}  {mult:>14}")
        return 0
    if args.example == "facility":
        rows = guarantees.facility_fractions(n=args.n or 100000, mt=args.mtilde or 2.0)
        print(f"{'a(n)':>10}  {'q':>10}  {'k':>10}")
        for row in rows:
            print(f"{row['a']:>10}  {row['q']:>10.6f}  {row['k']:>10}")
        return 0
    if args.additive:
        if args.M is None or args.n is None or args.k is None:
            print("error: --additive needs --M, --n and --k", file=sys.stderr)
            return 2
        bound = args.M * (args.n - args.k) / (args.k + 1)
        print(f"additive guarantee for keeping k={args.k} of n={args.n}: {bound:.6g}")
        return 0
    if args.kadapt:
        if args.a is None:
            print("error: --kadapt needs --a", file=sys.stderr)
            return 2
        if args.mode == "mult":
            mt = args.mtilde
            if mt is None:
                print("error: multiplicative mode needs --mtilde", file=sys.stderr)
                return 2
            profile = guarantees.GuaranteeProfile.from_ratio(mt)
            q = guarantees.min_q_multiplicative(profile, args.n or 1000, args.a)
            print(f"q = {q:.6f}")
            if args.n:
                k = guarantees.kadapt_policies(profile, args.n, args.a, "multiplicative", True)
                print(f"k = {k}  ({k / args.n:.4f} n)")
        else:
            if args.M is None or args.n is None:
                print("error: additive mode needs --M and --n", file=sys.stderr)
                return 2
            profile = guarantees.GuaranteeProfile(args.M + 1.0, 1.0, guarantees.SupportFunc.const(1), guarantees.SupportFunc.const(1))
            k = guarantees.kadapt_policies(profile, args.n, args.a, "additive")
            print(f"k = {k}  ({k / args.n:.4f} n)")
        return 0
    if args.n_threshold:
        vals = [float(x) for x in args.n_threshold.split(",")]
        if len(vals) != 5:
            print("error: --n-threshold takes l,delta,C,Minf,eps", file=sys.stderr)
            return 2
        t = guarantees.n_threshold(int(vals[0]), vals[1], vals[2], vals[3], vals[4])
        print(f"n threshold: {t:.6g}")
        return 0
    print("error: choose one of --example/--additive/--kadapt/--n-threshold", file=sys.stderr)
    return 2


def cmd_gen(args) -> int:
    try:
        if args.problem == "knapsack":
            inst = instances.gen_knapsack(args.n, args.seed)
        else:
            inst = instances.gen_shortest_path(args.nodes, args.gamma, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = _resolve_out(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    instances.save(inst, out)
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minmaxmin", description=__doc__)
    parser.add_argument("--verbose", action="store_true", help="log solver progress")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve one instance")
    ps.add_argument("--instance", help="instance JSON file")
    ps.add_argument("--gen", choices=["knapsack", "shortest_path"], help="generate instead of loading")
    ps.add_argument("--n", type=int, default=50, help="knapsack dimension")
    ps.add_argument("--nodes", type=int, default=20, help="shortest-path node count")
    ps.add_argument("--gamma", type=float, default=3, help="uncertainty budget (shortest path)")
    ps.add_argument("--seed", type=int, default=1)
    ps.add_argument("--k", type=int, required=True, help="number of prepared solutions")
    ps.add_argument("--time-limit", type=float, default=60.0)
    ps.add_argument("--gap-tol", type=float, default=1e-6)
    ps.add_argument("--node-cap", type=int, default=None)
    ps.add_argument("--no-symmetry", action="store_true", help="disable symmetry pruning")
    ps.add_argument("--log-interval", type=int, default=0)
    ps.add_argument("--out", help="write the solution tuple as JSON")
    ps.set_defaults(func=cmd_solve)

    pb = sub.add_parser("bench", help="benchmark sweep writing a CSV")
    pb.add_argument("--problem", choices=["knapsack", "shortest_path"], required=True)
    pb.add_argument("--sizes", required=True, help="comma list: n for knapsack, |V| for shortest path")
    pb.add_argument("--ks", default="2,4,6,8,10,12,14,16,18,20")
    pb.add_argument("--gammas", default=None, help="comma list; defaults follow the recipe")
    pb.add_argument("--per-cell", type=int, default=10)
    pb.add_argument("--seed-base", type=int, default=1)
    pb.add_argument("--time-limit", type=float, default=60.0)
    pb.add_argument("--jobs", type=int, default=1, help="independent cells in parallel")
    pb.add_argument("--aggregate", action="store_true", help="also write and print per-cell means")
    pb.add_argument("--out", required=True, help="CSV output path")
    pb.set_defaults(func=cmd_bench)

    pg = sub.add_parser("bounds", help="analytic guarantee calculators")
    pg.add_argument("--example", choices=["recoverable", "facility"], help="print a worked table")
    pg.add_argument("--additive", action="store_true", help="additive bound M*(n-k)/(k+1)")
    pg.add_argument("--kadapt", action="store_true", help="policy count for a target guarantee")
    pg.add_argument("--mode", choices=["add", "mult"], default="add")
    pg.add_argument("--n-threshold", default=None, metavar="l,delta,C,Minf,eps")
    pg.add_argument("--M", type=float, default=None, help="additive constant M(n)")
    pg.add_argument("--mtilde", type=float, default=None, help="multiplicative constant")
    pg.add_argument("--a", type=float, default=None, help="target guarantee a(n)")
    pg.add_argument("--n", type=int, default=None)
    pg.add_argument("--k", type=int, default=None)
    pg.set_defaults(func=cmd_bounds)

    pn = sub.add_parser("gen", help="generate an instance file")
    pn.add_argument("--problem", choices=["knapsack", "shortest_path"], required=True)
    pn.add_argument("--n", type=int, default=50)
    pn.add_argument("--nodes", type=int, default=20)
    pn.add_argument("--gamma", type=float, default=3)
    pn.add_argument("--seed", type=int, default=1)
    pn.add_argument("--out", required=True)
    pn.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(message)s",
    )
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
