"""Command line interface.

Subcommands:
  gen          write a random instance (graph + two spanning trees) to a directory
  orient       orient a spanning tree by distributed peeling, dump directions
  reconfigure  run a one-step protocol, write schedule.json and trace.jsonl
  validate     check a schedule against an instance, print the report
  gadget       double a tree into the mirror instance whose budget-1 steps
               encode rootings
  bench        run both protocols over a grid of sizes and seeds, print CSV

Exit codes: 0 success / valid, 1 invalid result, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .algorithms import (
    orient,
    orient_distributed,
    root_tree_centralized,
    rooted_reconfigure,
    two_sim_reconfigure,
)
from .gadget import build_gadget
from .graph import (
    GraphError,
    random_spanning_tree_pair,
    random_tree,
    read_edge_subset,
    read_graph,
    write_edge_subset,
    write_graph,
)
from .reconfig import Schedule, read_schedule, validate_schedule, write_schedule
from .sim import CONGEST, LOCAL, SimError

EVAL_SEED_ENV = "TREERECONFIG_EVAL_SEED"

ROOTED = "rooted"
TWO_SIM = "two-sim"


def _eval_seed() -> "int | None":
    raw = os.environ.get(EVAL_SEED_ENV)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{EVAL_SEED_ENV} must be an integer, got {raw!r}") from None


def _load_instance(args) -> tuple:
    g = read_graph(args.in_graph)
    t1 = read_edge_subset(g, args.in_t1)
    t2 = read_edge_subset(g, args.in_t2)
    return g, t1, t2


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    g, t1, t2 = random_spanning_tree_pair(args.n, seed=args.seed)
    write_graph(g, out / "graph.txt")
    write_edge_subset(t1, out / "t1.txt")
    write_edge_subset(t2, out / "t2.txt")
    print(f"wrote n={g.n} m={len(g.edges)} instance to {out}")
    return 0


def cmd_orient(args) -> int:
    g = read_graph(args.in_graph)
    t = read_edge_subset(g, args.in_t1)
    result, trace = orient_distributed(g, t, mode=args.mode, eval_seed=_eval_seed())
    if result != orient(t):
        print("distributed orientation disagrees with centralized peeling", file=sys.stderr)
        return 1
    text = result.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(
        f"iterations={result.iterations} rounds={trace.rounds} max_bits={trace.max_bits()}",
        file=sys.stderr,
    )
    return 0


def cmd_reconfigure(args) -> int:
    g, t1, t2 = _load_instance(args)
    eval_seed = _eval_seed()
    if args.algo == ROOTED:
        rt1 = root_tree_centralized(t1, 0)
        rt2 = root_tree_centralized(t2, 0)
        sched, trace = rooted_reconfigure(g, rt1, rt2, mode=args.mode, eval_seed=eval_seed)
    else:
        sched, trace = two_sim_reconfigure(g, t1, t2, mode=args.mode, eval_seed=eval_seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_schedule(sched, out / "schedule.json")
    trace.write_jsonl(out / "trace.jsonl")
    report = validate_schedule(g, t1, t2, sched)
    print(
        f"algo={args.algo} k={sched.k} rounds={trace.rounds} "
        f"max_bits={trace.max_bits()} valid={1 if report.valid else 0}"
    )
    if not report.valid:
        print(report.message(), file=sys.stderr)
        return 1
    return 0


def cmd_validate(args) -> int:
    g, t1, t2 = _load_instance(args)
    sched = read_schedule(args.in_schedule)
    if args.k is not None:
        sched = Schedule(args.k, sched.steps)
    report = validate_schedule(g, t1, t2, sched)
    print(report.to_json())
    return 0 if report.valid else 1


def cmd_gadget(args) -> int:
    if args.in_graph:
        base = read_graph(args.in_graph)
    else:
        if args.n is None:
            raise ValueError("gadget needs --in-graph or --n")
        base = random_tree(args.n, args.seed)
    inst = build_gadget(base)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    note = f"doubled instance of a {inst.n}-node tree: node v's copy is v+{inst.n}, matching edges {{v, v+{inst.n}}}"
    write_graph(inst.graph, out / "graph.txt", header=[note])
    write_edge_subset(inst.t1, out / "t1.txt", header=[note, "t1 = base tree + matching"])
    write_edge_subset(inst.t2, out / "t2.txt", header=[note, "t2 = mirrored tree + matching"])
    print(f"wrote doubled instance ({inst.graph.n} nodes, {len(inst.graph.edges)} edges) to {out}")
    return 0


def cmd_bench(args) -> int:
    eval_seed = _eval_seed()
    sizes = []
    n = args.n_min
    while n <= args.n_max:
        sizes.append(n)
        n *= 2
    rows = []
    for n in sizes:
        for seed in range(args.seeds):
            g, t1, t2 = random_spanning_tree_pair(n, seed=seed)
            rt1 = root_tree_centralized(t1, 0)
            rt2 = root_tree_centralized(t2, 0)
            sched, trace = rooted_reconfigure(g, rt1, rt2, eval_seed=eval_seed)
            valid = validate_schedule(g, t1, t2, sched).valid
            rows.append((n, seed, ROOTED, trace.rounds, 0, trace.max_bits(), int(valid)))
            sched, trace = two_sim_reconfigure(g, t1, t2, eval_seed=eval_seed)
            valid = validate_schedule(g, t1, t2, sched).valid
            iters = max(orient(t1).iterations, orient(t2).iterations)
            rows.append((n, seed, TWO_SIM, trace.rounds, iters, trace.max_bits(), int(valid)))
    rows.sort()
    lines = ["n,seed,algorithm,rounds,iterations,max_bits,valid"]
    lines.extend(",".join(str(x) for x in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treereconfig",
        description="spanning tree reconfiguration in one simultaneous step",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("orient", help="orient a spanning tree by distributed peeling")
    p.add_argument("--in-graph", required=True)
    p.add_argument("--in-t1", required=True, help="the tree to orient")
    p.add_argument("--mode", choices=[LOCAL, CONGEST], default=CONGEST)
    p.add_argument("--out", help="orientation JSON file (default stdout)")
    p.set_defaults(fn=cmd_orient)

    p = sub.add_parser("reconfigure", help="run a one-step protocol")
    p.add_argument("--in-graph", required=True)
    p.add_argument("--in-t1", required=True)
    p.add_argument("--in-t2", required=True)
    p.add_argument("--algo", choices=[ROOTED, TWO_SIM], default=TWO_SIM)
    p.add_argument("--mode", choices=[LOCAL, CONGEST], default=CONGEST)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_reconfigure)

    p = sub.add_parser("validate", help="validate a schedule against an instance")
    p.add_argument("--in-graph", required=True)
    p.add_argument("--in-t1", required=True)
    p.add_argument("--in-t2", required=True)
    p.add_argument("--in-schedule", required=True)
    p.add_argument("--k", type=int, help="override the schedule's budget")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("gadget", help="double a tree into the mirror instance")
    p.add_argument("--in-graph", help="base tree as a graph file")
    p.add_argument("--n", type=int, help="random base tree size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=cmd_gadget)

    p = sub.add_parser("bench", help="run both protocols over doubling sizes")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GraphError, SimError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
