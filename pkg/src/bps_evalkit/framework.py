"""End-to-end evaluation pipelines and report rendering.

Utility pipeline: split the log temporally, discover a model from the train
side (optionally perturbed by a scenario), simulate R replication logs
aligned with the train side (same case count, same first arrival), train
the predictive tasks on real and on simulated data, evaluate everything on
the real test side, and report per-task UtilityLoss: the absolute
difference between each simulated run's metric and the real-data mean
metric, summarized as mean and standard deviation over replications.

Distance pipeline: same split and discovery, but the simulated logs are
compared to a reference log (test side, or train side to expose the
objective mismatch between the two choices) with the six-distance suite.

Reports render to stable-keyed JSON and to a markdown table with per-task
units (accuracy, minutes, hours, days).
"""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .eventlog import (
    EventLog,
    RoleMap,
    derive_roles,
    parse_event_log_csv,
    temporal_split,
)
from .logdistances import (
    DistanceReport,
    Mode,
    ReferenceKind,
    mean_report,
    standard_practice_report,
)
from .ppm import (
    ARCHITECTURES,
    MLP_HYPERPARAMETERS,
    TASKS,
    TaskMetricVector,
    metric_vector,
    metric_vector_detailed,
)
from .simulator import (
    BpsModel,
    Scenario,
    ScenarioKind,
    perturb_model,
    discover_model,
    simulate_detailed,
)

TASK_UNITS = {
    "NAP": "accuracy",
    "NRP": "accuracy",
    "NPP": "min",
    "NWP": "hour",
    "RTP": "day",
}

# display conversion from internal minutes
_UNIT_DIVISOR = {"accuracy": 1.0, "min": 1.0, "hour": 60.0, "day": 1440.0}

# seed derivation tags
_TAG_REAL_FIT = 0
_TAG_SIM_GEN = 1
_TAG_SIM_FIT = 2
_TAG_STD_SIM = 3


class ReportFormat(Enum):
    JSON = "JSON"
    MARKDOWN = "MARKDOWN"


@dataclass(frozen=True)
class EvaluationConfig:
    log_path: str
    split_ratio: float = 0.8
    replications: int = 10
    real_seeds: int = 10
    base_seed: int = 7
    scenario: Scenario | None = None
    mode: Mode = Mode.TIMESTAMP_SAMPLES
    role_threshold: float = 0.7
    ngram_n: int = 3
    jobs: int = 1

    def __post_init__(self):
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError("split_ratio must lie in (0, 1)")
        if self.replications < 1 or self.real_seeds < 1:
            raise ValueError("replications and real_seeds must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass(frozen=True)
class TaskUtility:
    task: str
    unit: str
    real_mean: float
    real_std: float       # over all seed x architecture values
    real_seed_std: float  # over architecture-averaged per-seed values
    sim_mean: float
    sim_std: float
    loss_mean: float
    loss_std: float
    losses: tuple[float, ...]


@dataclass(frozen=True)
class UtilityReport:
    scenario: str
    config: dict
    tasks: tuple[TaskUtility, ...]
    real_vectors: tuple[tuple[float, ...], ...]
    real_arch_vectors: dict[str, tuple[tuple[float, ...], ...]]
    sim_vectors: tuple[tuple[float, ...], ...]
    warnings: tuple[str, ...] = ()

    def task_utility(self, task: str) -> TaskUtility:
        for t in self.tasks:
            if t.task == task:
                return t
        raise KeyError(task)


@dataclass(frozen=True)
class StandardPracticeResult:
    mean: DistanceReport
    replications: tuple[DistanceReport, ...]
    config: dict
    warnings: tuple[str, ...] = ()


def _derive_seed(base: int, tag: int, index: int) -> int:
    return int(np.random.SeedSequence([base, tag, index]).generate_state(1)[0])


def _std(values: Sequence[float]) -> float:
    return statistics.stdev(values) if len(values) > 1 else 0.0


def assemble_utility_report(
    scenario_label: str,
    config_echo: dict,
    real_arch_vectors: Mapping[str, Sequence[TaskMetricVector]],
    sim_vectors: Sequence[TaskMetricVector],
    warnings: Sequence[str] = (),
) -> UtilityReport:
    """Aggregate raw metric vectors into the per-task utility summary.

    ``real_arch_vectors`` maps each architecture to its per-seed vectors;
    the real mean is taken over architecture-averaged per-seed vectors,
    matching how the simulated vectors are architecture-averaged already.
    Losses are |sim_r - real_mean| per replication.
    """
    n_seeds = {len(v) for v in real_arch_vectors.values()}
    if len(n_seeds) != 1:
        raise ValueError("architectures disagree on seed count")
    s_count = n_seeds.pop()
    if s_count == 0 or not sim_vectors:
        raise ValueError("need at least one real seed and one replication")

    averaged_real = [
        tuple(
            sum(real_arch_vectors[a][s].as_tuple()[ti] for a in ARCHITECTURES)
            / len(ARCHITECTURES)
            for ti in range(len(TASKS))
        )
        for s in range(s_count)
    ]
    tasks = []
    for ti, task in enumerate(TASKS):
        real_vals = [v[ti] for v in averaged_real]
        pooled = [
            real_arch_vectors[a][s].as_tuple()[ti]
            for a in ARCHITECTURES
            for s in range(s_count)
        ]
        real_mean = sum(real_vals) / len(real_vals)
        sim_vals = [v.as_tuple()[ti] for v in sim_vectors]
        losses = tuple(abs(v - real_mean) for v in sim_vals)
        tasks.append(TaskUtility(
            task=task,
            unit=TASK_UNITS[task],
            real_mean=real_mean,
            real_std=_std(pooled),
            real_seed_std=_std(real_vals),
            sim_mean=sum(sim_vals) / len(sim_vals),
            sim_std=_std(sim_vals),
            loss_mean=sum(losses) / len(losses),
            loss_std=_std(losses),
            losses=losses,
        ))
    return UtilityReport(
        scenario=scenario_label,
        config=config_echo,
        tasks=tuple(tasks),
        real_vectors=tuple(tuple(v) for v in averaged_real),
        real_arch_vectors={
            a: tuple(v.as_tuple() for v in vecs)
            for a, vecs in sorted(real_arch_vectors.items())
        },
        sim_vectors=tuple(v.as_tuple() for v in sim_vectors),
        warnings=tuple(warnings),
    )


# module-level so process pools can pickle them
def _real_fit_job(args):
    train, test, roles, seed = args
    return metric_vector_detailed(train, test, roles, seed)


def _sim_replication_job(args):
    model, n_cases, start, gen_seed, test, roles, fit_seed = args
    result = simulate_detailed(model, n_cases, start, gen_seed)
    vec = metric_vector(result.log, test, roles, fit_seed)
    return vec, result.warnings


def _map_jobs(fn, args_list, jobs: int):
    if jobs <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, args_list))


@dataclass(frozen=True)
class _PipelineState:
    """Everything scenario-independent: split, roles, base model, real side."""

    config: EvaluationConfig
    train: EventLog
    test: EventLog
    roles: RoleMap
    base_model: BpsModel
    real_arch_vectors: dict[str, tuple[TaskMetricVector, ...]]


def _prepare_pipeline(config: EvaluationConfig) -> _PipelineState:
    log = parse_event_log_csv(config.log_path)
    split = temporal_split(log, config.split_ratio)
    roles = derive_roles(split.train, config.role_threshold)
    base_model = discover_model(split.train, config.role_threshold)
    args = [
        (split.train, split.test, roles,
         _derive_seed(config.base_seed, _TAG_REAL_FIT, s))
        for s in range(config.real_seeds)
    ]
    detailed = _map_jobs(_real_fit_job, args, config.jobs)
    real_arch_vectors = {
        arch: tuple(det[arch] for _, det in detailed)
        for arch in ARCHITECTURES
    }
    return _PipelineState(
        config=config,
        train=split.train,
        test=split.test,
        roles=roles,
        base_model=base_model,
        real_arch_vectors=real_arch_vectors,
    )


def _config_echo(state: _PipelineState, scenario_label: str) -> dict:
    c = state.config
    return {
        "log_path": str(c.log_path),
        "split_ratio": c.split_ratio,
        "replications": c.replications,
        "real_seeds": c.real_seeds,
        "base_seed": c.base_seed,
        "scenario": scenario_label,
        "mode": c.mode.value,
        "role_threshold": c.role_threshold,
        "ngram_n": c.ngram_n,
        "train_cases": len(state.train),
        "test_cases": len(state.test),
        "simulation_alignment": {
            "cases": len(state.train),
            "start": state.train.earliest.isoformat(),
        },
        "ppm_evaluation_reference": "test",
        "mlp_hyperparameters": dict(MLP_HYPERPARAMETERS),
        "task_units": dict(TASK_UNITS),
    }


def _scenario_report(
    state: _PipelineState, scenario: Scenario | None
) -> UtilityReport:
    config = state.config
    label = scenario.label if scenario is not None else ScenarioKind.GT.value
    model = state.base_model
    if scenario is not None:
        model = perturb_model(model, scenario)
    args = [
        (model, len(state.train), state.train.earliest,
         _derive_seed(config.base_seed, _TAG_SIM_GEN, r),
         state.test, state.roles,
         _derive_seed(config.base_seed, _TAG_SIM_FIT, r))
        for r in range(config.replications)
    ]
    outcomes = _map_jobs(_sim_replication_job, args, config.jobs)
    sim_vectors = [vec for vec, _ in outcomes]
    warnings = tuple(
        f"replication {r}: {w}"
        for r, (_, ws) in enumerate(outcomes)
        for w in ws
    )
    return assemble_utility_report(
        label, _config_echo(state, label), state.real_arch_vectors,
        sim_vectors, warnings,
    )


def run_utility_evaluation(config: EvaluationConfig) -> UtilityReport:
    """The full train-on-simulated, test-on-real evaluation for one scenario
    (config.scenario; no scenario means the unperturbed model)."""
    state = _prepare_pipeline(config)
    return _scenario_report(state, config.scenario)


def run_scenario_suite(
    config: EvaluationConfig, scenarios: Iterable[Scenario]
) -> dict[str, UtilityReport]:
    """Evaluate several scenarios against one shared real-side baseline.

    The real-side metric vectors depend only on the split and seeds, so
    they are computed once; each scenario then pays only for its simulated
    replications. Returns reports keyed by scenario label.
    """
    state = _prepare_pipeline(config)
    out: dict[str, UtilityReport] = {}
    for sc in scenarios:
        report = _scenario_report(state, sc)
        out[report.scenario] = report
    return out


def run_standard_practice_evaluation(
    config: EvaluationConfig, reference: ReferenceKind
) -> StandardPracticeResult:
    """Distance-suite evaluation of simulated logs against a reference.

    TEST reference aligns the simulation with the test window (its case
    count and start); TRAIN aligns with the train window. The discovered
    model always comes from the train side.
    """
    log = parse_event_log_csv(config.log_path)
    split = temporal_split(log, config.split_ratio)
    model = discover_model(split.train, config.role_threshold)
    if config.scenario is not None:
        model = perturb_model(model, config.scenario)
    if reference is ReferenceKind.TEST:
        ref_log, n_cases, start = split.test, len(split.test), split.test.earliest
    else:
        ref_log, n_cases, start = split.train, len(split.train), split.train.earliest
    reports = []
    warnings: list[str] = []
    for r in range(config.replications):
        result = simulate_detailed(
            model, n_cases, start,
            _derive_seed(config.base_seed, _TAG_STD_SIM, r),
        )
        warnings.extend(f"replication {r}: {w}" for w in result.warnings)
        reports.append(standard_practice_report(
            result.log, ref_log, config.mode, reference, config.ngram_n
        ))
    scenario_label = (
        config.scenario.label if config.scenario is not None
        else ScenarioKind.GT.value
    )
    echo = {
        "log_path": str(config.log_path),
        "split_ratio": config.split_ratio,
        "replications": config.replications,
        "base_seed": config.base_seed,
        "scenario": scenario_label,
        "mode": config.mode.value,
        "reference_kind": reference.value,
        "simulation_alignment": {
            "cases": n_cases,
            "start": start.isoformat(),
        },
        "train_cases": len(split.train),
        "test_cases": len(split.test),
    }
    return StandardPracticeResult(
        mean=mean_report(reports),
        replications=tuple(reports),
        config=echo,
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# rendering


def _task_to_dict(t: TaskUtility) -> dict:
    return {
        "unit": t.unit,
        "real_mean": t.real_mean,
        "real_std": t.real_std,
        "real_seed_std": t.real_seed_std,
        "sim_mean": t.sim_mean,
        "sim_std": t.sim_std,
        "utility_loss_mean": t.loss_mean,
        "utility_loss_std": t.loss_std,
        "utility_losses": list(t.losses),
    }


def utility_report_to_dict(report: UtilityReport) -> dict:
    return {
        "scenario": report.scenario,
        "config": report.config,
        "tasks": {t.task: _task_to_dict(t) for t in report.tasks},
        "real_vectors": [list(v) for v in report.real_vectors],
        "real_arch_vectors": {
            a: [list(v) for v in vecs]
            for a, vecs in report.real_arch_vectors.items()
        },
        "sim_vectors": [list(v) for v in report.sim_vectors],
        "warnings": list(report.warnings),
    }


def standard_result_to_dict(result: StandardPracticeResult) -> dict:
    return {
        "config": result.config,
        "mean": result.mean.to_dict(),
        "replications": [r.to_dict() for r in result.replications],
        "warnings": list(result.warnings),
    }


def _display_value(task: str, minutes: float) -> float:
    return minutes / _UNIT_DIVISOR[TASK_UNITS[task]]

def _fmt(task: str, value: float) -> str:
    if TASK_UNITS[task] == "accuracy":
        return f"{value:.3f}"
    return f"{_display_value(task, value):.2f}"


def utility_report_to_markdown(report: UtilityReport) -> str:
    lines = [
        f"# Utility evaluation: scenario {report.scenario}",
        "",
        f"Replications: {report.config.get('replications')}, "
        f"real-data seeds: {report.config.get('real_seeds')}, "
        f"base seed: {report.config.get('base_seed')}.",
        "",
        "| Task | Unit | Real (mean +/- std) | Simulated (mean +/- std)"
        " | UtilityLoss (mean +/- std) |",
        "|------|------|---------------------|--------------------------"
        "|-----------------------------|",
    ]
    for t in report.tasks:
        lines.append(
            f"| {t.task} | {t.unit} "
            f"| {_fmt(t.task, t.real_mean)} +/- {_fmt(t.task, t.real_std)} "
            f"| {_fmt(t.task, t.sim_mean)} +/- {_fmt(t.task, t.sim_std)} "
            f"| {_fmt(t.task, t.loss_mean)} +/- {_fmt(t.task, t.loss_std)} |"
        )
    if report.warnings:
        lines += ["", "Warnings:", ""]
        lines += [f"- {w}" for w in report.warnings]
    lines.append("")
    return "\n".join(lines)


def render_report(report, format: ReportFormat = ReportFormat.JSON) -> str:
    """Serialize a report; JSON is key-stable and byte-deterministic."""
    if format is ReportFormat.JSON:
        if isinstance(report, UtilityReport):
            doc = utility_report_to_dict(report)
        elif isinstance(report, StandardPracticeResult):
            doc = standard_result_to_dict(report)
        elif isinstance(report, DistanceReport):
            doc = report.to_dict()
        else:
            raise TypeError(f"cannot render {type(report).__name__}")
        return json.dumps(doc, indent=2) + "\n"
    if isinstance(report, UtilityReport):
        return utility_report_to_markdown(report)
    raise TypeError(
        f"markdown rendering supports utility reports only, "
        f"got {type(report).__name__}"
    )
