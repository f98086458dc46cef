"""Command-line front end.

Subcommands cover the whole pipeline: generate the built-in reference log,
split a log temporally, discover a model, perturb it with a scenario,
simulate, and run either evaluation. Outputs are written atomically (temp
file + rename), so failures never leave partial files. Exit codes: 0 on
success, 1 on validation/usage errors, 2 on IO errors. Diagnostics go to
stderr as one ``code=... msg=...`` line.
"""

from __future__ import annotations

import os

# deterministic linear algebra: keep BLAS reductions single-threaded; must be
# set before numpy loads
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import argparse
import json
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from .errors import EvalKitError
from .eventlog import parse_event_log_csv, temporal_split, write_event_log_csv
from .framework import (
    EvaluationConfig,
    ReportFormat,
    render_report,
    run_standard_practice_evaluation,
    run_utility_evaluation,
)
from .logdistances import Mode, ReferenceKind
from .simulator import (
    discover_model,
    generate_reference_log,
    load_model,
    model_to_dict,
    parse_scenario,
    perturb_model,
    simulate_detailed,
)

OUT_DIR_ENV = "BPS_EVALKIT_OUT"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; this toolkit reserves 2
    # for IO problems, so route usage failures through the validation path
    def error(self, message):
        raise _UsageError(message)


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_csv(path: Path, log) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    os.close(fd)
    try:
        write_event_log_csv(log, tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_start(text: str) -> datetime:
    ts = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def _out_dir(value: str | None) -> Path:
    if value:
        return Path(value)
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _build_parser() -> _Parser:
    parser = _Parser(prog="bps-evalkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-ref", help="generate the built-in reference log")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cases", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("split", help="split a log temporally, trace-wise")
    p.add_argument("--log", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)

    p = sub.add_parser("discover", help="fit a simulation model to a log")
    p.add_argument("--log", required=True)
    p.add_argument("--role-threshold", type=float, default=0.7)
    p.add_argument("--out-model", required=True)

    p = sub.add_parser("perturb", help="apply a scenario to a stored model")
    p.add_argument("--model", required=True)
    p.add_argument("--scenario", required=True,
                   help="GT | DUR:<mult> | ARR:<mult> | CAL:<+hours> | RC | "
                        "EXT:<minutes> | MEAN_ARRIVAL")
    p.add_argument("--out-model", required=True)

    p = sub.add_parser("simulate", help="simulate a stored model")
    p.add_argument("--model", required=True)
    p.add_argument("--cases", type=int, required=True)
    p.add_argument("--start", required=True,
                   help="ISO-8601 first arrival, e.g. 2024-03-04T09:00:00Z")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval-standard",
                       help="distance-suite evaluation of simulated logs")
    p.add_argument("--log", required=True)
    p.add_argument("--reference", choices=["test", "train"], default="test")
    p.add_argument("--mode",
                   choices=["timestamp_samples", "hourly_counts"],
                   default="timestamp_samples")
    p.add_argument("--scenario")
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--replications", type=int, default=10)
    p.add_argument("--base-seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help=f"output directory (default ${OUT_DIR_ENV} or .)")

    p = sub.add_parser("eval-utility",
                       help="utility-based evaluation via downstream tasks")
    p.add_argument("--log", required=True)
    p.add_argument("--scenario")
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--replications", type=int, default=10)
    p.add_argument("--seeds", type=int, default=10,
                   help="real-data seeds")
    p.add_argument("--base-seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help=f"output directory (default ${OUT_DIR_ENV} or .)")

    return parser


def _cmd_gen_ref(args) -> int:
    if args.cases < 1:
        raise _UsageError("--cases must be at least 1")
    log = generate_reference_log(args.seed, args.cases)
    _atomic_write_csv(Path(args.out), log)
    return EXIT_OK


def _cmd_split(args) -> int:
    log = parse_event_log_csv(args.log)
    split = temporal_split(log, args.ratio)
    _atomic_write_csv(Path(args.out_train), split.train)
    _atomic_write_csv(Path(args.out_test), split.test)
    return EXIT_OK


def _cmd_discover(args) -> int:
    log = parse_event_log_csv(args.log)
    model = discover_model(log, args.role_threshold)
    _atomic_write_text(
        Path(args.out_model),
        json.dumps(model_to_dict(model), indent=2) + "\n",
    )
    return EXIT_OK


def _cmd_perturb(args) -> int:
    model = load_model(args.model)
    scenario = parse_scenario(args.scenario)
    perturbed = perturb_model(model, scenario)
    _atomic_write_text(
        Path(args.out_model),
        json.dumps(model_to_dict(perturbed), indent=2) + "\n",
    )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    if args.cases < 1:
        raise _UsageError("--cases must be at least 1")
    model = load_model(args.model)
    result = simulate_detailed(
        model, args.cases, _parse_start(args.start), args.seed
    )
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _atomic_write_csv(Path(args.out), result.log)
    return EXIT_OK


def _cmd_eval_standard(args) -> int:
    config = EvaluationConfig(
        log_path=args.log,
        split_ratio=args.ratio,
        replications=args.replications,
        base_seed=args.base_seed,
        scenario=parse_scenario(args.scenario) if args.scenario else None,
        mode=Mode(args.mode.upper()),
        jobs=args.jobs,
    )
    reference = ReferenceKind(args.reference.upper())
    result = run_standard_practice_evaluation(config, reference)
    out = _out_dir(args.out)
    _atomic_write_text(
        out / "standard_report.json",
        render_report(result, ReportFormat.JSON),
    )
    return EXIT_OK


def _cmd_eval_utility(args) -> int:
    config = EvaluationConfig(
        log_path=args.log,
        split_ratio=args.ratio,
        replications=args.replications,
        real_seeds=args.seeds,
        base_seed=args.base_seed,
        scenario=parse_scenario(args.scenario) if args.scenario else None,
        jobs=args.jobs,
    )
    report = run_utility_evaluation(config)
    out = _out_dir(args.out)
    _atomic_write_text(
        out / "utility_report.json",
        render_report(report, ReportFormat.JSON),
    )
    _atomic_write_text(
        out / "utility_report.md",
        render_report(report, ReportFormat.MARKDOWN),
    )
    return EXIT_OK


_COMMANDS = {
    "gen-ref": _cmd_gen_ref,
    "split": _cmd_split,
    "discover": _cmd_discover,
    "perturb": _cmd_perturb,
    "simulate": _cmd_simulate,
    "eval-standard": _cmd_eval_standard,
    "eval-utility": _cmd_eval_utility,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"code=usage msg={exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except EvalKitError as exc:
        print(f"code={exc.code} msg={exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"code=invalid_value msg={exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"code=io_error msg={exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
