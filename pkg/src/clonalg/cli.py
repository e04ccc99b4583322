"""
Command-line interface.

Usage:
  python -m src.clonalg run --function sphere --algorithm clonalg --clone-set 2 --mutation-group 1 --seed 7
  python -m src.clonalg sweep --function rastrigin --algorithm both --seed 7 --out results/rastrigin.json
  python -m src.clonalg table2 --seed 7 --format csv
  python -m src.clonalg list-functions

Exit codes: 0 success, 2 invalid arguments, 3 I/O failure.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .benchmarks import BENCHMARKS, BenchmarkNotFoundError
from .harness import close_experiment_service, compare_algorithms, emit_table2, run_experiment, sweep
from .models import ExperimentConfig
from .storage_service import get_results_store, summary_to_json, table2_to_csv, table2_to_json, write_results
from . import config

import logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_ARGS = 2
EXIT_IO_FAILURE = 3


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _resolve_out(out: Optional[str]) -> Optional[str]:
    """Bare file names go under OUTPUT_DIR; paths with a directory are used as given."""
    if out is None:
        return None
    path = Path(out)
    if path.parent == Path("."):
        path = Path(config.OUTPUT_DIR) / path
    return str(path)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        get_results_store().write_text(out, text)
        logger.info(f"Wrote {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clonalg",
        description="Clonal selection vs. genetic algorithm on binary-encoded benchmark functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one parameter cell several times and summarize.")
    run.add_argument("--function", required=True, help="Benchmark identifier (see list-functions).")
    run.add_argument("--algorithm", required=True, choices=["clonalg", "ga"])
    run.add_argument("--clone-set", required=True, type=int, choices=[1, 2, 3])
    mutation = run.add_mutually_exclusive_group()
    mutation.add_argument("--mutation-group", type=int, choices=[1, 2, 3], help="clonalg only")
    mutation.add_argument("--ga-mutation-rate", type=float, help="ga only")
    run.add_argument("--epsilon", type=float, help="Termination proximity (default: per function).")
    run.add_argument("--max-generations", type=int, default=config.MAX_GENERATIONS)
    run.add_argument("--seed", required=True, type=_u64)
    run.add_argument("--runs", type=int, default=config.RUNS_PER_CELL)
    run.add_argument("--out", help="Summary document path (default: stdout).")
    run.add_argument("--trace-dir", help="Directory for per-run convergence trace CSVs.")
    run.set_defaults(handler=_cmd_run)

    sw = sub.add_parser("sweep", help="Run the 3x3 parameter grid, ten runs per cell.")
    sw.add_argument("--function", required=True)
    sw.add_argument("--algorithm", required=True, choices=["clonalg", "ga", "both"])
    sw.add_argument("--seed", required=True, type=_u64)
    sw.add_argument("--out", help="Summary document path (default: stdout).")
    sw.set_defaults(handler=_cmd_sweep)

    t2 = sub.add_parser("table2", help="Run every function and algorithm at its best published parameters.")
    t2.add_argument("--seed", required=True, type=_u64)
    t2.add_argument("--out", help="Output path (default: stdout).")
    t2.add_argument("--format", choices=["csv", "json"], default="csv")
    t2.set_defaults(handler=_cmd_table2)

    lf = sub.add_parser("list-functions", help="List benchmark identifiers.")
    lf.set_defaults(handler=_cmd_list_functions)
    return parser


def _cmd_run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.algorithm == "clonalg" and args.mutation_group is None:
        parser.error("--algorithm clonalg requires --mutation-group")
    if args.algorithm == "ga" and args.ga_mutation_rate is None:
        parser.error("--algorithm ga requires --ga-mutation-rate")
    out = _resolve_out(args.out)

    grid = (
        dict(mutation_groups=[args.mutation_group]) if args.algorithm == "clonalg"
        else dict(ga_mutation_rates=[args.ga_mutation_rate])
    )
    cfg = ExperimentConfig(
        function=args.function,
        algorithm=args.algorithm,
        clone_sets=[args.clone_set],
        runs_per_cell=args.runs,
        epsilon=args.epsilon,
        max_generations=args.max_generations,
        seed=args.seed,
        keep_traces=args.trace_dir is not None,
        out_path=out,
        trace_dir=args.trace_dir,
        **grid,
    )
    result = run_experiment(cfg)
    if out is None:
        sys.stdout.write(summary_to_json(result))
    write_results(result, out_path=out, trace_dir=args.trace_dir)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    out = _resolve_out(args.out)
    result = sweep(args.function, args.algorithm, args.seed, out_path=out)
    _emit(summary_to_json(result), out)
    if args.algorithm == "both":
        verdict = compare_algorithms(result)
        faster = verdict.faster.value if verdict.faster else "undecided"
        logger.info(
            f"{args.function}: clonalg best cell {verdict.clonalg_best_cell} "
            f"({verdict.clonalg_mean_iterations} it.), ga best cell {verdict.ga_best_cell} "
            f"({verdict.ga_mean_iterations} it.) -> faster: {faster}"
        )
    return EXIT_OK


def _cmd_table2(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    rows = emit_table2(args.seed)
    text = table2_to_csv(rows) if args.format == "csv" else table2_to_json(rows)
    _emit(text, _resolve_out(args.out))
    return EXIT_OK


def _cmd_list_functions(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    for name, spec in BENCHMARKS.items():
        epsilon = config.DEFAULT_EPSILONS[name]
        sys.stdout.write(
            f"{name:<20} {spec.modality.label:<18} [{spec.bounds.lo:g}, {spec.bounds.hi:g}]  "
            f"n={spec.dimension}  epsilon={epsilon:g}  {spec.description}\n"
        )
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except (ValidationError, BenchmarkNotFoundError, ValueError) as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_INVALID_ARGS
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO_FAILURE
    finally:
        close_experiment_service()


if __name__ == "__main__":
    sys.exit(main())
