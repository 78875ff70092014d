"""Command-line front end.

Subcommands: ``solve`` (run a solver mode), ``oracle`` (exhaustive
ground truth), ``compare`` (solver vs oracle, nonzero exit on key
mismatch), ``generate`` (builtin graph families), ``bench`` (repeat a
solve and report wall times).  Reports are single-line JSON with a
``schema`` field; all randomness comes from ``--seed``.

Exit codes: 0 success, 1 compare mismatch, 2 parse error (with a
line/column diagnostic on stderr), 3 precondition violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .graph import (
    Multigraph,
    degrees_of_order,
    degrees_of_orientation,
    orientation_of_order,
)
from .objectives import PhiSum, LiftedCost, evaluate, needs_weighted_degrees
from .flow import solve_cyclic
from .ordering import (
    combine_st_orders,
    derandomized_order,
    greedy_min_degree,
    linear_slope_order,
    random_order_trials,
    solve_acyclic_exact,
    weighted_smallest_last,
)
from .exhaustive import brute_optimal
from .formats import (
    FormatError,
    graph_to_text,
    key_to_json,
    objective_to_json,
    parse_graph,
    parse_objective,
    rational_to_json,
)
from .instances import (
    fig4_graph,
    gen_gk,
    named_instance,
    random_multigraph,
    random_scheduling_instance,
    scheduling_to_orientation,
)

MODES = (
    "cyclic-flow",
    "acyclic-exact",
    "acyclic-greedy",
    "smallest-last",
    "slope",
    "combine-st",
    "random",
    "derandomized",
)


def _load_graph(spec: str) -> Multigraph:
    try:
        return named_instance(spec)
    except ValueError:
        pass
    path = Path(spec)
    if path.exists():
        return parse_graph(path.read_text())
    raise ValueError(
        f"input {spec!r} is neither a builtin instance name nor a readable file"
    )


def _load_objective(spec: str):
    try:
        return parse_objective(spec)
    except FormatError:
        path = Path(spec)
        if path.exists():
            return parse_objective(path.read_text())
        raise


def _slopes_from_objective(graph, objective):
    if not isinstance(objective, PhiSum):
        raise ValueError("slope mode needs a phi_sum objective with linear costs")
    slopes = []
    for phi in objective.resolve(graph):
        if phi.spec.kind != "linear" or phi.f is not None or phi.g is not None:
            raise ValueError("slope mode needs unbounded linear per-vertex costs")
        slopes.append(phi.spec.params[0])
    return slopes


def _run_mode(graph, objective, mode, seed, trials):
    """Dispatch one solver mode; returns (order | None, orientation | None,
    key, extra report fields)."""
    extra: dict = {}
    if mode == "cyclic-flow":
        sol = solve_cyclic(graph, objective)
        return None, sol.orientation, sol.key, extra
    if mode == "acyclic-exact":
        order, _ = solve_acyclic_exact(graph, objective)
    elif mode == "acyclic-greedy":
        if seed is None:
            order = greedy_min_degree(graph)
        else:
            order = greedy_min_degree(graph, "seeded-random", seed=seed)
    elif mode == "smallest-last":
        order = weighted_smallest_last(graph)
    elif mode == "slope":
        order = linear_slope_order(graph, _slopes_from_objective(graph, objective))
    elif mode == "combine-st":
        order = combine_st_orders(graph)
    elif mode == "random":
        res = random_order_trials(graph, 0 if seed is None else seed, trials)
        order = res.order
        extra["trials"] = {"count": trials, "mean": rational_to_json(res.mean)}
    elif mode == "derandomized":
        order = derandomized_order(graph)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    dv = degrees_of_order(graph, order, weighted=needs_weighted_degrees(objective))
    key = evaluate(objective, graph, dv)
    orientation = None if graph.has_loops else orientation_of_order(graph, order)
    return order, orientation, key, extra


def _solve_report(graph, objective, mode, seed, trials):
    start = time.perf_counter()
    order, orientation, key, extra = _run_mode(graph, objective, mode, seed, trials)
    elapsed = time.perf_counter() - start
    # round-trip: the reported key must re-evaluate from the reported
    # orientation (or order, when loops keep orientations undefined)
    weighted = needs_weighted_degrees(objective)
    if orientation is not None:
        dv = degrees_of_orientation(graph, orientation, weighted=weighted)
    else:
        dv = degrees_of_order(graph, order, weighted=weighted)
    if evaluate(objective, graph, dv) != key:
        raise RuntimeError("internal error: reported key does not re-evaluate")
    if order is not None:
        plain = degrees_of_order(graph, order)
    else:
        plain = degrees_of_orientation(graph, orientation)
    report = {
        "schema": 1,
        "subcommand": "solve",
        "mode": mode,
        "objective": objective_to_json(objective),
        "n": graph.n,
        "m": graph.m,
        "order": list(order) if order is not None else None,
        "orientation": list(orientation.heads) if orientation is not None else None,
        "indeg": list(plain.indeg),
        "outdeg": list(plain.outdeg),
        "key": key_to_json(key),
    }
    if isinstance(key, LiftedCost):
        report["feasible"] = key.penalty == 0
    report.update(extra)
    report["wall_time"] = round(elapsed, 6)
    return report, key


def _cmd_solve(args) -> int:
    graph = _load_graph(args.input)
    objective = _load_objective(args.objective)
    report, _ = _solve_report(graph, objective, args.mode, args.seed, args.trials)
    print(json.dumps(report))
    return 0


def _cmd_oracle(args) -> int:
    graph = _load_graph(args.input)
    objective = _load_objective(args.objective)
    start = time.perf_counter()
    res = brute_optimal(graph, objective, args.mode, count_optima=args.count)
    elapsed = time.perf_counter() - start
    witness = res.witness
    report = {
        "schema": 1,
        "subcommand": "oracle",
        "mode": args.mode,
        "objective": objective_to_json(objective),
        "n": graph.n,
        "m": graph.m,
        "key": key_to_json(res.key),
    }
    if args.mode == "acyclic":
        report["order"] = list(witness)
    else:
        report["orientation"] = list(witness.heads)
    if res.count is not None:
        report["optima"] = res.count
    report["wall_time"] = round(elapsed, 6)
    print(json.dumps(report))
    return 0


def _cmd_compare(args) -> int:
    graph = _load_graph(args.input)
    objective = _load_objective(args.objective)
    _, solver_key = _solve_report(graph, objective, args.mode, args.seed, args.trials)
    oracle_mode = "cyclic" if args.mode == "cyclic-flow" else "acyclic"
    oracle = brute_optimal(graph, objective, oracle_mode)
    match = solver_key == oracle.key
    report = {
        "schema": 1,
        "subcommand": "compare",
        "mode": args.mode,
        "objective": objective_to_json(objective),
        "solver_key": key_to_json(solver_key),
        "oracle_key": key_to_json(oracle.key),
        "match": match,
    }
    print(json.dumps(report))
    return 0 if match else 1


def _cmd_bench(args) -> int:
    if args.repeat < 1:
        raise ValueError("need at least one repetition")
    graph = _load_graph(args.input)
    objective = _load_objective(args.objective)
    times = []
    key = None
    for _ in range(args.repeat):
        start = time.perf_counter()
        _, _, key, _ = _run_mode(graph, objective, args.mode, args.seed, args.trials)
        times.append(round(time.perf_counter() - start, 6))
    report = {
        "schema": 1,
        "subcommand": "bench",
        "mode": args.mode,
        "repeat": args.repeat,
        "key": key_to_json(key),
        "wall_times": times,
    }
    print(json.dumps(report))
    return 0


def _cmd_generate(args) -> int:
    if args.family == "fig4":
        graph = fig4_graph()
    elif args.family == "gk":
        graph = gen_gk(args.k)
    elif args.family == "random":
        graph = random_multigraph(
            args.n,
            args.m,
            0 if args.seed is None else args.seed,
            simple=args.simple,
            max_degree=args.max_degree,
            connected=args.connected,
            allow_loops=args.loops,
            weighted=args.weighted,
        )
    else:
        inst = random_scheduling_instance(
            0 if args.seed is None else args.seed,
            max_jobs=args.max_jobs,
            max_slots=args.max_slots,
        )
        graph, objective = scheduling_to_orientation(inst)
        if args.objective_out:
            Path(args.objective_out).write_text(
                json.dumps(objective_to_json(objective)) + "\n"
            )
    text = graph_to_text(graph)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orientopt",
        description="Orient multigraph edges to optimize indegree objectives.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_solver_args(p, with_mode=MODES):
        p.add_argument("--input", required=True, help="graph file or builtin name")
        p.add_argument("--objective", required=True,
                       help="objective spec, kind name, or spec file")
        p.add_argument("--mode", required=True, choices=with_mode)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("solve", help="run one solver mode")
    add_solver_args(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive optimum on a small instance")
    p.add_argument("--input", required=True)
    p.add_argument("--objective", required=True)
    p.add_argument("--mode", required=True, choices=("cyclic", "acyclic"))
    p.add_argument("--count", action="store_true", help="also count the optima")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("compare", help="solver vs oracle; exit 1 on mismatch")
    add_solver_args(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("bench", help="repeat a solve, report wall times")
    add_solver_args(p)
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("generate", help="write a builtin graph family")
    p.add_argument("--family", required=True, choices=("fig4", "gk", "random", "scheduling"))
    p.add_argument("--k", type=int, default=2, help="triangles for the gk family")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--simple", action="store_true")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--loops", action="store_true")
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--max-jobs", type=int, default=4)
    p.add_argument("--max-slots", type=int, default=3)
    p.add_argument("--out", default=None, help="write here instead of stdout")
    p.add_argument("--objective-out", default=None,
                   help="save the scheduling objective spec JSON here")
    p.set_defaults(func=_cmd_generate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
