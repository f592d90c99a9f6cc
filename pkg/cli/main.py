"""Command-line entry point: `python -m cli <subcommand> ...`

Exit codes: 0 success, 1 infeasible or invalid input, 2 internal error,
64 usage error.
"""

import argparse
import asyncio
import json
import re
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from bench.gantt import gantt_svg
from bench.harness import load_suite, parse_config, run_matrix
from common.config import settings
from common.errors import (
    CapExceeded,
    CapacityExceeded,
    InfeasibleInstance,
    InvalidInstance,
    InvalidSchedule,
    LpParseError,
    MissingVariable,
    SBatchError,
)
from common.logging_config import setup_logging
from common.metrics import start_metrics_server
from common.models import (
    Availability,
    Initiation,
    ModelVariant,
    Preemption,
    SolverConfig,
    SolveStatus,
    VariationConfig,
)
from core.io import instance_to_json, load_instance, load_schedule, save_instance
from genins import (
    GenSpec,
    InstanceClass,
    derive_min_batch_sizes,
    gen_instance,
    gen_suite,
    make_rng,
)
from genins.suite import SETUP_SCALES
from milp import (
    check_assignment,
    default_big_k,
    encode_pa,
    encode_rp,
    read_lp,
    schedule_to_pa_assignment,
    schedule_to_rp_assignment,
    write_lp,
)
from milp.lp_format import sanitize
from oracle import enumerate_optimal
from solver import solve

logger = setup_logging("cli", settings.log_level)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INTERNAL = 2
EXIT_USAGE = 64

_DURATION = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*(ms|s|m|h)?\s*$")
_UNITS = {"ms": 0.001, "s": 1.0, "m": 60.0, "h": 3600.0, None: 1.0}


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors print the synopsis on stderr and end with exit code 64"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_duration(text: str) -> float:
    """Seconds from `10s`, `5m`, `250ms`, `1h` or a bare number of seconds"""
    match = _DURATION.match(text)
    if not match:
        raise argparse.ArgumentTypeError(f"invalid duration {text!r}")
    seconds = float(match.group(1)) * _UNITS[match.group(2)]
    if seconds <= 0:
        raise argparse.ArgumentTypeError("duration must be positive")
    return seconds


def parse_variation(text: str) -> VariationConfig:
    """A preset name or `availability/preemption/initiation`"""
    try:
        return VariationConfig.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid variation {text!r}: {e}")


def _add_variation(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--variation",
        type=parse_variation,
        default="ipf",
        help="preset ipf|bc or availability/preemption/initiation",
    )
    parser.add_argument("--availability", choices=["item", "batch"])
    parser.add_argument("--preemption", choices=["on", "off"], help="on allows idle time in batches")
    parser.add_argument("--initiation", choices=["flexible", "complete"])
    parser.add_argument("--no-sizing", action="store_true", help="ignore batch size bounds")


def _variation(args) -> VariationConfig:
    base = args.variation
    changes = {}
    if args.availability:
        changes["availability"] = Availability(args.availability)
    if args.preemption:
        changes["preemption"] = Preemption.ALLOWED if args.preemption == "on" else Preemption.FORBIDDEN
    if args.initiation:
        changes["initiation"] = Initiation(args.initiation)
    return base.model_copy(update=changes)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.suite:
        grid = None
        if args.jobs:
            grid = [InstanceClass(args.jobs, args.families, args.machines)]
        paths = gen_suite(
            grid,
            args.per_class,
            args.seed,
            args.suite,
            scales=args.scales or SETUP_SCALES,
            derive_sizes=not args.no_derive,
            core_budget=args.core_budget,
        )
        print(json.dumps({"instances": len(paths), "directory": args.suite}))
        return EXIT_OK

    if not args.jobs:
        raise UsageError("gen: --jobs is required unless --suite is given")
    spec = GenSpec(
        num_jobs=args.jobs,
        num_families=args.families,
        num_machines=args.machines,
        setup_scale=(args.scales or [20])[0],
        seed=args.seed,
    )
    rng = make_rng(args.seed)
    inst = gen_instance(spec, rng)
    if not args.no_derive:
        inst = inst.with_bounds(derive_min_batch_sizes(inst, rng, args.core_budget))
    if args.out:
        save_instance(inst, args.out)
    else:
        sys.stdout.write(instance_to_json(inst))
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    cfg = SolverConfig(
        model_variant=ModelVariant(args.model),
        variation=_variation(args),
        sizing_enabled=not args.no_sizing,
        sb=args.sb,
        sbt=args.sbt,
        dominance=not args.no_dominance,
        time_limit=args.time_limit,
        node_limit=args.node_limit,
        seed=args.seed,
        workers=args.workers,
    )
    result = solve(inst, cfg)
    _emit(json.dumps(result.to_document(), indent=2) + "\n", args.output)
    if args.gantt and result.schedule is not None:
        Path(args.gantt).write_text(gantt_svg(inst, result.schedule))
    return EXIT_INVALID if result.status is SolveStatus.INFEASIBLE else EXIT_OK


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    objective, schedule = enumerate_optimal(
        inst, _variation(args), not args.no_sizing, args.job_cap
    )
    _emit(
        json.dumps({"objective": objective, "schedule": schedule.to_document()}, indent=2) + "\n",
        args.output,
    )
    return EXIT_OK


def cmd_encode(args) -> int:
    inst = load_instance(args.instance)
    big_k = args.big_k if args.big_k is not None else default_big_k(inst)
    encoder = encode_rp if args.formulation == "rp" else encode_pa
    model = encoder(inst, big_k)
    logger.info(
        "Model encoded",
        extra={
            "formulation": args.formulation,
            "variables": len(model.variables),
            "constraints": len(model.constraints),
            "big_k": big_k,
        },
    )
    _emit(write_lp(model), args.output)
    if args.schedule:
        translate = (
            schedule_to_rp_assignment if args.formulation == "rp" else schedule_to_pa_assignment
        )
        values = translate(inst, load_schedule(args.schedule, inst))
        document = {sanitize(name): value for name, value in values.items()}
        target = args.assignment or str(Path(args.schedule).with_suffix(".assignment.json"))
        Path(target).write_text(json.dumps(document, indent=2) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    model = read_lp(Path(args.model).read_text())
    raw = json.loads(Path(args.assignment).read_text())
    assignment = {sanitize(name): value for name, value in raw.items()}
    report = check_assignment(model, assignment)
    objective = report.objective
    verdict = {
        "feasible": report.feasible,
        "objective": objective.numerator if objective.denominator == 1 else float(objective),
        "violated": list(report.violated),
    }
    print(json.dumps(verdict, indent=2))
    return EXIT_OK if report.feasible else EXIT_INVALID


def cmd_bench(args) -> int:
    configs = [parse_config(text, args.time_limit) for text in args.config]
    suite = load_suite(args.suite)
    report = asyncio.run(
        run_matrix(
            suite,
            configs,
            budget=args.time_limit,
            out_dir=args.out,
            workers=args.workers,
            reference=args.reference,
            curve_step=args.curve_step,
        )
    )
    failed = sum(1 for row in report.rows if row.error)
    print(json.dumps({"rows": len(report.rows), "failed": failed, "files": list(report.files)}))
    return EXIT_OK


def cmd_gantt(args) -> int:
    inst = load_instance(args.instance)
    _emit(gantt_svg(inst, load_schedule(args.schedule, inst)), args.output)
    return EXIT_OK


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="sbatch", description="Serial batch scheduling toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    gen = sub.add_parser("gen", help="generate instances")
    gen.add_argument("--jobs", type=int)
    gen.add_argument("--families", type=int, default=2)
    gen.add_argument("--machines", type=int, default=2)
    gen.add_argument("--scales", type=int, nargs="+", help="setup scales (default 20, suites 20 50 100)")
    gen.add_argument("--seed", type=int, default=settings.seed)
    gen.add_argument("--out", help="instance file (single instance)")
    gen.add_argument("--suite", help="directory for a class grid with manifest")
    gen.add_argument("--per-class", type=int, default=3)
    gen.add_argument("--no-derive", action="store_true", help="keep minimum batch size 1")
    gen.add_argument("--core-budget", type=parse_duration)
    gen.set_defaults(handler=cmd_gen)

    solve = sub.add_parser("solve", help="branch and bound")
    solve.add_argument("instance")
    solve.add_argument("--model", choices=[v.value for v in ModelVariant], default="ia")
    _add_variation(solve)
    solve.add_argument("--sb", action="store_true")
    solve.add_argument("--sbt", action="store_true")
    solve.add_argument("--no-dominance", action="store_true")
    solve.add_argument("--time-limit", type=parse_duration, default=settings.time_limit_seconds)
    solve.add_argument("--node-limit", type=int, default=settings.node_limit)
    solve.add_argument("--seed", type=int, default=settings.seed)
    solve.add_argument("--workers", type=int, default=settings.workers)
    solve.add_argument("--output", "-o")
    solve.add_argument("--gantt", help="also write an SVG chart of the schedule")
    solve.set_defaults(handler=cmd_solve)

    oracle = sub.add_parser("oracle", help="exhaustive optimum of a tiny instance")
    oracle.add_argument("instance")
    _add_variation(oracle)
    oracle.add_argument("--job-cap", type=int, default=settings.oracle_job_cap)
    oracle.add_argument("--output", "-o")
    oracle.set_defaults(handler=cmd_oracle)

    encode = sub.add_parser("encode", help="write a MILP formulation as LP text")
    encode.add_argument("instance")
    encode.add_argument("--formulation", choices=["rp", "pa"], default="rp")
    encode.add_argument("--big-k", type=int)
    encode.add_argument("--output", "-o")
    encode.add_argument("--schedule", help="also translate this schedule to an assignment")
    encode.add_argument("--assignment", help="where to write the translated assignment")
    encode.set_defaults(handler=cmd_encode)

    check = sub.add_parser("check", help="evaluate an assignment against an LP model")
    check.add_argument("model")
    check.add_argument("assignment")
    check.set_defaults(handler=cmd_check)

    bench = sub.add_parser("bench", help="run configurations over an instance suite")
    bench.add_argument("suite")
    bench.add_argument("--config", action="append", required=True, help="e.g. ia:ipf, h+sbt:bc")
    bench.add_argument("--time-limit", type=parse_duration, default=settings.time_limit_seconds)
    bench.add_argument("--out", required=True)
    bench.add_argument("--workers", type=int, default=settings.bench_workers)
    bench.add_argument("--reference")
    bench.add_argument("--curve-step", type=parse_duration, default=60.0)
    bench.set_defaults(handler=cmd_bench)

    gantt = sub.add_parser("gantt", help="render a schedule as SVG")
    gantt.add_argument("instance")
    gantt.add_argument("schedule")
    gantt.add_argument("--output", "-o")
    gantt.set_defaults(handler=cmd_gantt)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if settings.metrics_port > 0:
            start_metrics_server(settings.metrics_port)
        return args.handler(args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (
        InfeasibleInstance,
        InvalidInstance,
        InvalidSchedule,
        CapExceeded,
        CapacityExceeded,
        LpParseError,
        MissingVariable,
        ValidationError,
        FileNotFoundError,
        json.JSONDecodeError,
        ValueError,
    ) as e:
        logger.error(f"Invalid input: {str(e)}", extra={"error": type(e).__name__})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except SBatchError as e:
        logger.error(f"Run failed: {str(e)}", extra={"error": type(e).__name__})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:
        logger.error(f"Internal error: {str(e)}", exc_info=True)
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
