"""Evaluation toolkit for business process simulation models.

Two complementary evaluation routes over event logs:

1. A distance suite that compares simulated logs to a reference log via
   one-dimensional Wasserstein-1 kernels over binned or raw time proxies
   (plus an n-gram control-flow distance).
2. A utility-based route that trains predictive process monitoring models
   on real and on simulated data, evaluates both on held-out real data,
   and reports the per-task absolute metric gap (UtilityLoss).

The package also ships a small data-driven simulator (frequentist model
discovery, calendar-aware discrete-event generation, what-if scenario
perturbations) and a built-in synthetic reference process so everything is
runnable end to end without external data.
"""

from .errors import EvalKitError
from .eventlog import (
    Event,
    EventLog,
    RoleMap,
    TemporalSplit,
    Trace,
    cycle_times,
    derive_roles,
    merge_logs,
    parse_event_log_csv,
    relabel_cases,
    temporal_split,
    write_event_log_csv,
)
from .framework import (
    EvaluationConfig,
    ReportFormat,
    StandardPracticeResult,
    TaskUtility,
    UtilityReport,
    assemble_utility_report,
    render_report,
    run_scenario_suite,
    run_standard_practice_evaluation,
    run_utility_evaluation,
    standard_result_to_dict,
    utility_report_to_dict,
    utility_report_to_markdown,
)
from .logdistances import (
    CountSequence,
    DistanceKind,
    DistanceReport,
    HourSeries,
    Mode,
    ProxyKind,
    ReferenceKind,
    cedd,
    distribution_distance,
    extract_proxy,
    mean_report,
    ngd,
    standard_practice_report,
    to_count_sequence,
)
from .ppm import (
    ARCHITECTURES,
    TASKS,
    PredictorSpec,
    PrefixSample,
    TaskMetricVector,
    evaluate_predictor,
    extract_prefix_samples,
    metric_vector,
    metric_vector_detailed,
    train_predictor,
)
from .simulator import (
    ArrivalKind,
    ArrivalModel,
    BpsModel,
    DurationKind,
    DurationModel,
    Scenario,
    ScenarioKind,
    SimulationResult,
    build_reference_model,
    discover_model,
    generate_reference_log,
    load_model,
    model_from_dict,
    model_to_dict,
    parse_scenario,
    perturb_model,
    save_model,
    simulate,
    simulate_detailed,
)
from .wasserstein import (
    Sample1D,
    w1_assignment_oracle,
    w1_quantile,
    w1_sorted,
)

__version__ = "0.1.0"
