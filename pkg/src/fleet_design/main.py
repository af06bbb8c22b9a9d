"""Command-line entry point.

``fleet-design <subcommand> ...``: scenario generation, the fleet LNS, the
greedy and random baselines, the brute-force oracle, MILP export,
experiment sweeps, summaries and solution checks.

Exit codes: 0 on success, 1 on a usage error, 2 on a data error (bad input
file, infeasible solution, oracle size limits).  Logs go to stderr; stdout
carries command results such as the seed that was used.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any, NoReturn

import structlog
from pydantic import ValidationError

from fleet_design.config import Settings
from fleet_design.errors import FleetDesignError
from fleet_design.evaluation import build_base_fleet
from fleet_design.harness.report import summarize, write_summary
from fleet_design.harness.runner import load_results, parse_fleet
from fleet_design.harness.runner import run as run_sweep
from fleet_design.harness.spec import ExperimentSpec, bundled_experiment
from fleet_design.milp import export_milp
from fleet_design.models.enums import DiscountDenominator, Method
from fleet_design.models.params import LnsParams
from fleet_design.models.problem import Problem
from fleet_design.models.quantities import to_rational
from fleet_design.models.solution import Solution
from fleet_design.pathing import build_travel_set
from fleet_design.scenarios.files import (
    check_solution,
    load_model,
    load_scenario,
    load_solution,
    load_spec,
    make_solution_file,
    save_scenario,
    save_solution,
    save_spec,
    write_rows,
)
from fleet_design.scenarios.generator import generate
from fleet_design.scenarios.presets import get_preset, preset_names
from fleet_design.seeding import seed_from_bytes
from fleet_design.solvers import get_solver
from fleet_design.solvers.baselines import GREEDY_TRACE_COLUMNS, fixed_fleet_mrta, fleet_from_counts
from fleet_design.solvers.exact import OracleLimits
from fleet_design.solvers.lns import ITERATION_LOG_COLUMNS

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

LOG_FORMATS = ("console", "json")

# CLI dest -> LnsParams field
_PARAM_FLAGS: dict[str, str] = {
    "k": "iterations",
    "n_r": "robot_removal_max_pct",
    "n_t": "task_removal_max_pct",
    "p_removal": "removal_mode_bias",
    "p_discount": "discount_prob",
    "noise_max": "noise_max",
    "sa_t0": "sa_initial_temp",
    "sa_cooling": "sa_cooling",
    "discount_denominator": "discount_denominator",
}


class UsageError(Exception):
    """Bad command-line input detected after argparse accepted it."""


class FleetArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1.

    Abbreviated long options are rejected so that only documented flags parse.
    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# Logging
# ---------------------------------------------------------------------------


def configure_logging(level: str = "INFO", fmt: str = "console") -> None:
    """Configure structlog once for this process, rendering to stderr.

    Raises:
        UsageError: On an unknown level name or format.
    """
    number = logging.getLevelNamesMapping().get(level.upper())
    if number is None:
        raise UsageError(f"unknown log level {level!r}")
    if fmt not in LOG_FORMATS:
        raise UsageError(f"unknown log format {fmt!r}; expected one of {', '.join(LOG_FORMATS)}")

    processors: list[structlog.typing.Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
    ]
    if fmt == "json":
        processors += [structlog.processors.dict_tracebacks, structlog.processors.JSONRenderer()]
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))
    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(number),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a number such as 70, 2.5 or 5/2, got {text!r}"
        ) from None


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(_non_negative_int(part) for part in text.split(",") if part)


def _rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_rational(part) for part in text.split(",") if part)


def _method_list(text: str) -> tuple[Method, ...]:
    try:
        return tuple(Method(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma list of {','.join(m.value for m in Method)}, got {text!r}"
        ) from None


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_lns_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("search parameters")
    group.add_argument("--k", type=int, metavar="K", help="LNS iterations (default 1000).")
    group.add_argument(
        "--n-r",
        type=float,
        metavar="PCT",
        help="Max percent of active robots removed (default 25).",
    )
    group.add_argument(
        "--n-t", type=float, metavar="PCT", help="Max percent of each tour removed (default 50)."
    )
    group.add_argument(
        "--p-removal", type=float, metavar="P", help="Probability of robot removal (default 1/3)."
    )
    group.add_argument(
        "--p-discount",
        type=float,
        metavar="P",
        help="Probability of discounting an idle robot's gain (default 0.1).",
    )
    group.add_argument(
        "--noise-max",
        type=float,
        metavar="X",
        help="Upper bound of the repair noise (default 0.1).",
    )
    group.add_argument(
        "--sa-t0",
        type=float,
        metavar="T",
        help="Annealing temperature at iteration 0 (default 1.0).",
    )
    group.add_argument(
        "--sa-cooling", type=float, metavar="C", help="Geometric cooling factor (default 0.995)."
    )
    group.add_argument(
        "--discount-denominator",
        choices=[d.value for d in DiscountDenominator],
        help="Divide an idle robot's gain by its cost or its battery (default cost).",
    )


def _add_seed_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed",
        type=_non_negative_int,
        help="Run seed; derived from the scenario file content when omitted.",
    )


def _add_solution_io(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scenario", type=Path, help="Scenario file (JSON).")
    parser.add_argument(
        "-o", "--output", type=Path, required=True, help="Solution file to write (JSON)."
    )


def build_parser() -> FleetArgumentParser:
    parser = FleetArgumentParser(
        prog="fleet-design",
        description="Budgeted heterogeneous robot fleet design.",
    )
    parser.add_argument("--log-level", help="Log level (default from FLEET_LOG_LEVEL or INFO).")
    parser.add_argument(
        "--log-format",
        choices=LOG_FORMATS,
        help="Log renderer (default from FLEET_LOG_FORMAT or console).",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = sub.add_parser("gen", help="Generate a scenario file from a scenario spec.")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", type=Path, help="Scenario spec file (JSON).")
    source.add_argument("--preset", choices=preset_names(), help="Bundled scenario spec.")
    gen.add_argument("-o", "--output", type=Path, required=True, help="Scenario file to write.")
    gen.add_argument("--task-count", type=_non_negative_int, help="Override the number of tasks.")
    gen.add_argument("--budget", type=_rational, help="Override the budget.")
    gen.add_argument("--seed", type=_non_negative_int, help="Override the generator seed.")
    gen.add_argument("--save-spec", type=Path, help="Also write the effective spec to this file.")
    gen.set_defaults(handler=_cmd_gen)

    solve = sub.add_parser("solve", help="Design a fleet with the LNS.")
    _add_solution_io(solve)
    _add_seed_flag(solve)
    _add_lns_flags(solve)
    solve.add_argument(
        "--log-iterations", type=Path, metavar="PATH", help="Write the iteration log CSV here."
    )
    solve.add_argument(
        "--fleet",
        metavar="TYPE:COUNT[+...]",
        help="Optimise tours for this fixed fleet instead of designing one.",
    )
    solve.set_defaults(handler=_cmd_solve)

    greedy = sub.add_parser("greedy", help="Greedy cost-effectiveness baseline.")
    _add_solution_io(greedy)
    _add_seed_flag(greedy)
    _add_lns_flags(greedy)
    greedy.add_argument(
        "--trace", type=Path, metavar="PATH", help="Write the greedy step CSV here."
    )
    greedy.set_defaults(handler=_cmd_greedy)

    random = sub.add_parser("random", help="Random affordable fleet baseline.")
    _add_solution_io(random)
    _add_seed_flag(random)
    _add_lns_flags(random)
    random.set_defaults(handler=_cmd_random)

    oracle = sub.add_parser("oracle", help="Exact optimum by enumeration (tiny instances).")
    _add_solution_io(oracle)
    oracle.add_argument(
        "--max-tasks", type=_non_negative_int, help="Largest task count to enumerate."
    )
    oracle.add_argument(
        "--max-base-fleet", type=_non_negative_int, help="Largest base fleet to enumerate."
    )
    oracle.add_argument(
        "--max-states", type=_non_negative_int, help="Bound on robots times 2^tasks."
    )
    oracle.set_defaults(handler=_cmd_oracle)

    milp = sub.add_parser("export-milp", help="Write the MILP model as an LP file.")
    milp.add_argument("scenario", type=Path, help="Scenario file (JSON).")
    milp.add_argument("-o", "--output", type=Path, required=True, help="LP file to write.")
    milp.set_defaults(handler=_cmd_export_milp)

    exp = sub.add_parser("experiment", help="Run a sweep and write results.csv.")
    exp_source = exp.add_mutually_exclusive_group(required=True)
    exp_source.add_argument("--spec", type=Path, help="Experiment spec file (JSON).")
    exp_source.add_argument("--bundled", metavar="NAME", help="Bundled sweep: exp1, exp2 or exp3.")
    exp.add_argument("-o", "--output", type=Path, required=True, help="Output directory.")
    exp.add_argument("--trials", type=_non_negative_int, help="Override trials per cell.")
    exp.add_argument(
        "--task-counts", type=_int_list, metavar="N[,N...]", help="Override task counts."
    )
    exp.add_argument("--budgets", type=_rational_list, metavar="B[,B...]", help="Override budgets.")
    exp.add_argument(
        "--methods", type=_method_list, metavar="M[,M...]", help="Override the method list."
    )
    exp.add_argument("--workers", type=_non_negative_int, help="Worker processes (1 runs inline).")
    exp.add_argument(
        "--no-timing", action="store_true", help="Write wall_ms=0 so reruns are byte-identical."
    )
    exp.add_argument(
        "--persist-solutions", action="store_true", help="Write every cell's solution file."
    )
    _add_lns_flags(exp)
    exp.set_defaults(handler=_cmd_experiment)

    report = sub.add_parser("report", help="Summarise a results.csv.")
    report.add_argument("results", type=Path, help="results.csv written by 'experiment'.")
    report.add_argument("-o", "--output", type=Path, help="Directory for summary.csv/summary.txt.")
    report.set_defaults(handler=_cmd_report)

    check = sub.add_parser("check", help="Re-validate a solution file against its scenario.")
    check.add_argument("scenario", type=Path, help="Scenario file (JSON).")
    check.add_argument("solution", type=Path, help="Solution file (JSON).")
    check.set_defaults(handler=_cmd_check)

    return parser


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _param_overrides(args: argparse.Namespace) -> dict[str, object]:
    return {
        field: getattr(args, dest)
        for dest, field in _PARAM_FLAGS.items()
        if getattr(args, dest, None) is not None
    }


def _validated_params(base: dict[str, object]) -> LnsParams:
    try:
        return LnsParams.model_validate(base)
    except ValidationError as exc:
        error = exc.errors()[0]
        flag = next(
            (f"--{d.replace('_', '-')}" for d, f in _PARAM_FLAGS.items() if (f,) == error["loc"]),
            ".".join(str(p) for p in error["loc"]),
        )
        raise UsageError(f"{flag}: {error['msg']}") from None


def _run_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return int(args.seed)
    return seed_from_bytes(Path(args.scenario).read_bytes())


def _write_solution(
    problem: Problem, solution: Solution, method: Method, seed: int | None, path: Path
) -> int:
    travel = build_travel_set(problem)
    record = make_solution_file(problem, solution, method, seed=seed, travel_set=travel)
    save_solution(record, path)
    print(f"reward: {record.reward}")
    return record.reward


def _one_line(exc: ValidationError) -> str:
    error = exc.errors()[0]
    where = ".".join(str(p) for p in error["loc"]) or exc.title
    more = f" (+{exc.error_count() - 1} more)" if exc.error_count() > 1 else ""
    return f"invalid {exc.title} at {where}: {error['msg']}{more}"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    spec = load_spec(args.spec) if args.spec is not None else get_preset(args.preset)()
    spec = spec.with_overrides(task_count=args.task_count, budget=args.budget, seed=args.seed)
    problem = generate(spec)
    save_scenario(problem, args.output)
    if args.save_spec is not None:
        save_spec(spec, args.save_spec)
    print(f"seed: {spec.seed}")
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace, settings: Settings) -> int:
    seed = _run_seed(args)
    print(f"seed: {seed}")
    params = _validated_params({**_param_overrides(args), "seed": seed})
    problem = load_scenario(args.scenario)
    travel = build_travel_set(problem)

    if args.fleet is not None:
        if args.log_iterations is not None:
            raise UsageError("--log-iterations cannot be combined with --fleet")
        try:
            fleet = fleet_from_counts(build_base_fleet(problem), parse_fleet(args.fleet))
        except ValueError as exc:
            raise UsageError(
                f"--fleet: {exc}; expected the form TYPE:COUNT[+TYPE:COUNT...]"
            ) from None
        solution = fixed_fleet_mrta(problem, fleet, params, travel_set=travel)
        _write_solution(problem, solution, Method.LNS, seed, args.output)
        return EXIT_OK

    output = get_solver(Method.LNS).solve(problem, params, travel_set=travel)
    _write_solution(problem, output.solution, Method.LNS, seed, args.output)
    if args.log_iterations is not None:
        write_rows((r.as_row() for r in output.log), ITERATION_LOG_COLUMNS, args.log_iterations)
    return EXIT_OK


def _cmd_greedy(args: argparse.Namespace, settings: Settings) -> int:
    seed = _run_seed(args)
    print(f"seed: {seed}")
    params = _validated_params({**_param_overrides(args), "seed": seed})
    problem = load_scenario(args.scenario)
    output = get_solver(Method.GREEDY).solve(problem, params)
    _write_solution(problem, output.solution, Method.GREEDY, seed, args.output)
    if args.trace is not None and output.trace is not None:
        write_rows((s.as_row() for s in output.trace.steps), GREEDY_TRACE_COLUMNS, args.trace)
    return EXIT_OK


def _cmd_random(args: argparse.Namespace, settings: Settings) -> int:
    seed = _run_seed(args)
    print(f"seed: {seed}")
    params = _validated_params({**_param_overrides(args), "seed": seed})
    problem = load_scenario(args.scenario)
    output = get_solver(Method.RANDOM).solve(problem, params)
    _write_solution(problem, output.solution, Method.RANDOM, seed, args.output)
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace, settings: Settings) -> int:
    defaults = OracleLimits.from_settings(settings)
    limits = OracleLimits(
        max_tasks=defaults.max_tasks if args.max_tasks is None else args.max_tasks,
        max_base_fleet=(
            defaults.max_base_fleet if args.max_base_fleet is None else args.max_base_fleet
        ),
        max_states=defaults.max_states if args.max_states is None else args.max_states,
    )
    problem = load_scenario(args.scenario)
    output = get_solver(Method.ORACLE, limits=limits).solve(problem, LnsParams())
    _write_solution(problem, output.solution, Method.ORACLE, None, args.output)
    return EXIT_OK


def _cmd_export_milp(args: argparse.Namespace, settings: Settings) -> int:
    problem = load_scenario(args.scenario)
    model, text = export_milp(problem)
    args.output.parent.mkdir(parents=True, exist_ok=True)
    args.output.write_text(text, encoding="utf-8")
    counts = model.variable_counts()
    logger.info("milp_exported", path=str(args.output), rows=len(model.constraints), **counts)
    print(f"variables: {len(model.variables)}")
    print(f"constraints: {len(model.constraints)}")
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace, settings: Settings) -> int:
    if args.spec is not None:
        spec = load_model(args.spec, ExperimentSpec)
    else:
        try:
            spec = bundled_experiment(args.bundled)
        except ValueError as exc:
            raise UsageError(f"--bundled: {exc}") from None

    overrides = _param_overrides(args)
    update: dict[str, object] = {}
    if overrides:
        update["params"] = _validated_params({**spec.params.model_dump(), **overrides})
        update["method_params"] = {
            method: _validated_params({**params.model_dump(), **overrides})
            for method, params in spec.method_params.items()
        }
    for name in ("trials", "task_counts", "budgets", "methods"):
        value = getattr(args, name)
        if value is not None:
            update[name] = value
    if args.persist_solutions:
        update["persist_solutions"] = True
    if update:
        spec = ExperimentSpec.model_validate({**spec.model_dump(), **update})

    if args.workers is not None:
        if args.workers < 1:
            raise UsageError("--workers: expected a positive integer")
        settings = settings.model_copy(update={"max_workers": args.workers})
    result = run_sweep(
        spec, args.output, settings=settings, record_wall_time=False if args.no_timing else None
    )
    print(f"experiment: {spec.experiment}")
    print(f"records: {len(result.records)}")
    print(f"failures: {len(result.failures)}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace, settings: Settings) -> int:
    try:
        frame = load_results(args.results)
    except OSError as exc:
        raise UsageError(f"cannot read {args.results}: {exc.strerror}") from None
    if frame.empty:
        raise UsageError(f"{args.results} has no records")
    summary = summarize(frame)
    if args.output is not None:
        write_summary(summary, args.output)
    sys.stdout.write(summary.to_text())
    return EXIT_OK


def _cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    problem = load_scenario(args.scenario)
    record = load_solution(args.solution)
    report, reward = check_solution(problem, record)
    if reward is None:
        for violation in report.violations:
            print(f"violation: {violation}", file=sys.stderr)
        return EXIT_DATA
    if reward != record.reward:
        print(f"stored reward {record.reward} differs from recomputed {reward}", file=sys.stderr)
        return EXIT_DATA
    print(f"feasible: reward {reward}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    handler: Callable[[argparse.Namespace, Settings], int] = args.handler
    try:
        settings = Settings()
        configure_logging(
            args.log_level or settings.log_level, args.log_format or settings.log_format
        )
        return handler(args, settings)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FleetDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValidationError as exc:
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run() -> None:
    sys.exit(main())
