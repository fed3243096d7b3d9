"""Command-line entry points: solve an instance file, run a benchmark, or
generate an instance.  Exit codes: 0 success, 1 invalid input, 2 I/O failure."""

import argparse
import sys

import numpy as np

from . import bench, heuristic, io as instance_io, svgplot
from .model import SolverError
from .tsp import EXACT, HEURISTIC


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are invalid input, so exit 1 rather than argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="minmaxtsp",
                     description="Min-max routing for heterogeneous multi-depot fleets")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance file")
    p_solve.add_argument("--instance", required=True, help="instance JSON file")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--tour-mode", choices=(HEURISTIC, EXACT), default=HEURISTIC)
    p_solve.add_argument("--trace", metavar="OUT.csv", help="write per-stage trace CSV")
    p_solve.add_argument("--svg", metavar="OUT_PREFIX",
                         help="write per-stage tour drawings OUT_PREFIX_<stage>.svg")

    for name in ("bench", "gen"):
        p = sub.add_parser(name, help=("run a benchmark and write a report CSV"
                                       if name == "bench" else
                                       "generate one benchmark instance file"))
        p.add_argument("--scenario", type=int, choices=(1, 2), required=True)
        p.add_argument("--n-targets", type=int, default=30)
        p.add_argument("--assign-frac", type=float, default=0.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", type=float, default=200.0)
        p.add_argument("--out", required=True)
        if name == "bench":
            p.add_argument("--instances", type=int, default=20)
            p.add_argument("--oracle", action="store_true")
            p.add_argument("--tour-mode", choices=(HEURISTIC, EXACT), default=HEURISTIC)
        else:
            p.add_argument("--index", type=int, default=0,
                           help="instance index within the seeded run")
    return parser


def _experiment_config(args, n_instances: int = 1) -> bench.ExperimentConfig:
    preset = bench.scenario1 if args.scenario == 1 else bench.scenario2
    return preset(n_targets=args.n_targets, assign_fraction=args.assign_frac,
                  seed=args.seed, grid=args.grid, n_instances=n_instances,
                  oracle=getattr(args, "oracle", False),
                  tour_mode=getattr(args, "tour_mode", HEURISTIC))


def _cmd_solve(args) -> int:
    inst = instance_io.load_instance(args.instance)
    cfg = heuristic.SolverConfig(tour_mode=args.tour_mode)
    sol, trace = heuristic.solve(inst, cfg, rng=np.random.default_rng(args.seed),
                                 keep_stage_solutions=True)
    print(f"objective: {sol.objective:.9f}")
    print(f"after_init: {trace.after_init:.9f}")
    print(f"after_local_search: {trace.after_local_search:.9f}")
    print(f"after_perturbation: {trace.after_perturbation:.9f}")
    print(f"perturbation_iterations: {trace.iterations}")
    for vid in range(1, inst.k + 1):
        tour = sol.tour_for(vid)
        inner = " ".join(str(t) for t in tour.targets())
        print(f"vehicle {vid}: duration={tour.duration:.9f} tour=[depot {inner} depot]")
    if args.trace:
        _write_trace(args.trace, trace)
    if args.svg:
        labeled = [(stage, trace.stage_solutions[stage])
                   for stage in (heuristic.STAGE_INIT, heuristic.STAGE_LOCAL_SEARCH,
                                 heuristic.STAGE_PERTURBATION)]
        for path in svgplot.render_tours(inst, labeled, args.svg):
            print(f"wrote {path}")
    return 0


def _write_trace(path, trace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("stage,objective,wall_time_s,iterations\n")
        rows = ((heuristic.STAGE_INIT, trace.after_init, 0),
                (heuristic.STAGE_LOCAL_SEARCH, trace.after_local_search, 0),
                (heuristic.STAGE_PERTURBATION, trace.after_perturbation, trace.iterations))
        for stage, obj, iters in rows:
            fh.write(f"{stage},{obj:.9f},{trace.wall_times[stage]:.3f},{iters}\n")


def _cmd_bench(args) -> int:
    cfg = _experiment_config(args, n_instances=args.instances)
    report = bench.run_experiment(cfg)
    bench.write_report(report, args.out)
    mean_final = report.mean_gap("final")
    print(f"wrote {args.out} ({len(report.rows)} instances)")
    if mean_final is not None:
        print(f"mean final gap: {mean_final:.3f}%  "
              f"(max {report.max_gap_final():.3f}%, "
              f"{report.rows_without_oracle()} rows without oracle)")
    print(f"mean heuristic time: {report.mean_time_heuristic():.3f}s")
    return 0


def _cmd_gen(args) -> int:
    cfg = _experiment_config(args)
    inst = bench.generate_instance(cfg, args.index)
    instance_io.save_instance(inst, args.out)
    print(f"wrote {args.out} ({inst.n_targets} targets, {inst.k} vehicles)")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_gen(args)
    except (SolverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
