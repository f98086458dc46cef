"""Predictive process monitoring on event-log prefixes.

Five downstream tasks over ongoing cases:

* NAP - next activity (classification; END is a real class)
* NRP - next role (classification; undefined at the last event)
* NPP - next processing time, minutes (regression; undefined at last event)
* NWP - next waiting time, minutes (regression; undefined at last event)
* RTP - remaining time to case completion, minutes (regression; 0 at last)

Two architectures are trained per task and their metrics averaged: a
frequency baseline (backoff n-gram table for classification, conditional
means for regression) and a small MLP over one-hot windows plus numeric
features. Both are deterministic given the seed. Internally every time
quantity is minutes; report-time unit conversion happens elsewhere.

Window labels never seen in training encode as all-zero one-hots, so logs
with extra activities or resources evaluate without error; predictions can
simply never match those labels, which scores them as misses.
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyTestSet, NoDefinedTargets
from .eventlog import EventLog, RoleMap
from .simulator import END

PAD = "[PAD]"
WINDOW = 10
UNKNOWN_ROLE = "role_unknown"

TASKS = ("NAP", "NRP", "NPP", "NWP", "RTP")
CLASSIFICATION_TASKS = ("NAP", "NRP")

FREQ_BASELINE = "FREQ_BASELINE"
MLP = "MLP"
ARCHITECTURES = (FREQ_BASELINE, MLP)

MLP_HYPERPARAMETERS = {
    "hidden_units": 50,
    "epochs": 30,
    "batch_size": 32,
    "learning_rate": 1e-3,
}


@dataclass(frozen=True)
class PrefixSample:
    """State of one ongoing case after its i-th event, plus targets."""

    case_id: str
    activity_window: tuple[str, ...]
    role_window: tuple[str, ...]
    elapsed_minutes: float
    hour_of_day: float
    weekday: int
    next_activity: str
    next_role: str | None
    npp_minutes: float | None
    nwp_minutes: float | None
    rtp_minutes: float


@dataclass(frozen=True)
class PredictorSpec:
    architecture: str
    task: str
    seed: int

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")

    @property
    def hyperparameters(self) -> dict:
        return dict(MLP_HYPERPARAMETERS) if self.architecture == MLP else {}


@dataclass(frozen=True)
class TaskMetricVector:
    """Per-task metrics: accuracy for NAP/NRP, MAE minutes for the rest."""

    nap: float
    nrp: float
    npp: float
    nwp: float
    rtp: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.nap, self.nrp, self.npp, self.nwp, self.rtp)

    def value_for(self, task: str) -> float:
        return self.as_tuple()[TASKS.index(task)]


def _window(labels: Sequence[str]) -> tuple[str, ...]:
    tail = tuple(labels[-WINDOW:])
    return (PAD,) * (WINDOW - len(tail)) + tail


def extract_prefix_samples(
    log: EventLog, roles: RoleMap
) -> tuple[PrefixSample, ...]:
    """One sample per (trace, prefix length), in trace order then length."""
    samples: list[PrefixSample] = []
    for trace in log.traces:
        events = trace.events
        n = len(events)
        arrival = trace.arrival
        case_end = max(e.end for e in events)
        acts: list[str] = []
        role_labels: list[str] = []
        for i, e in enumerate(events):
            acts.append(e.activity)
            role_labels.append(roles.role_of(e.resource, default=UNKNOWN_ROLE))
            last = i == n - 1
            nxt = None if last else events[i + 1]
            samples.append(PrefixSample(
                case_id=trace.case_id,
                activity_window=_window(acts),
                role_window=_window(role_labels),
                elapsed_minutes=(e.end - arrival).total_seconds() / 60.0,
                hour_of_day=(
                    e.end.hour + e.end.minute / 60.0 + e.end.second / 3600.0
                ),
                weekday=e.end.weekday(),
                next_activity=END if last else nxt.activity,
                next_role=None if last else roles.role_of(
                    nxt.resource, default=UNKNOWN_ROLE
                ),
                npp_minutes=None if last else
                (nxt.end - nxt.start).total_seconds() / 60.0,
                nwp_minutes=None if last else max(
                    0.0, (nxt.start - e.end).total_seconds() / 60.0
                ),
                rtp_minutes=(case_end - e.end).total_seconds() / 60.0,
            ))
    return tuple(samples)


# target accessors; None = undefined at this prefix
_TARGETS: dict[str, Callable[[PrefixSample], object]] = {
    "NAP": lambda s: s.next_activity,
    "NRP": lambda s: s.next_role,
    "NPP": lambda s: s.npp_minutes,
    "NWP": lambda s: s.nwp_minutes,
    "RTP": lambda s: s.rtp_minutes,
}


def _defined(task: str, samples: Sequence[PrefixSample]) -> list[PrefixSample]:
    get = _TARGETS[task]
    return [s for s in samples if get(s) is not None]


# ---------------------------------------------------------------------------
# frequency baseline

_BACKOFF_ORDERS = (3, 2, 1)


class _FreqClassifier:
    """Backoff table over the activity-window tail.

    Picks the most frequent target for the longest matching context
    (orders 3, 2, 1, then the global majority); equivalent to the argmax
    of the add-1 smoothed conditional distribution at each order. Ties go
    to the lexicographically smallest label.
    """

    def __init__(self, task: str):
        self.task = task
        self.tables: dict[int, dict[tuple[str, ...], dict[str, int]]] = {
            k: {} for k in _BACKOFF_ORDERS
        }
        self.global_counts: dict[str, int] = {}

    def fit(self, samples: Sequence[PrefixSample]) -> "_FreqClassifier":
        get = _TARGETS[self.task]
        for s in samples:
            y = get(s)
            for k in _BACKOFF_ORDERS:
                ctx = s.activity_window[-k:]
                bucket = self.tables[k].setdefault(ctx, {})
                bucket[y] = bucket.get(y, 0) + 1
            self.global_counts[y] = self.global_counts.get(y, 0) + 1
        return self

    @staticmethod
    def _argmax(counts: dict[str, int]) -> str:
        return min(counts, key=lambda label: (-counts[label], label))

    def predict(self, samples: Sequence[PrefixSample]) -> list[str]:
        out = []
        for s in samples:
            label = None
            for k in _BACKOFF_ORDERS:
                bucket = self.tables[k].get(s.activity_window[-k:])
                if bucket:
                    label = self._argmax(bucket)
                    break
            if label is None:
                label = self._argmax(self.global_counts)
            out.append(label)
        return out


class _FreqRegressor:
    """Conditional mean of the target given the current activity."""

    def __init__(self, task: str):
        self.task = task
        self.by_activity: dict[str, float] = {}
        self.global_mean = 0.0

    def fit(self, samples: Sequence[PrefixSample]) -> "_FreqRegressor":
        get = _TARGETS[self.task]
        sums: dict[str, list[float]] = {}
        all_values = []
        for s in samples:
            y = float(get(s))
            sums.setdefault(s.activity_window[-1], []).append(y)
            all_values.append(y)
        self.by_activity = {
            a: sum(vs) / len(vs) for a, vs in sorted(sums.items())
        }
        self.global_mean = sum(all_values) / len(all_values)
        return self

    def predict(self, samples: Sequence[PrefixSample]) -> list[float]:
        return [
            self.by_activity.get(s.activity_window[-1], self.global_mean)
            for s in samples
        ]


# ---------------------------------------------------------------------------
# MLP over one-hot windows + numeric features


class _Featurizer:
    """One-hot window slots plus scaled numerics; fit on training samples."""

    def __init__(self, samples: Sequence[PrefixSample]):
        acts = sorted({a for s in samples for a in s.activity_window})
        roles = sorted({r for s in samples for r in s.role_window})
        self.act_index = {a: i for i, a in enumerate(acts)}
        self.role_index = {r: i for i, r in enumerate(roles)}

    def encode(self, samples: Sequence[PrefixSample]) -> np.ndarray:
        na, nr = len(self.act_index), len(self.role_index)
        width = WINDOW * (na + nr) + 5
        x = np.zeros((len(samples), width), dtype=np.float64)
        for row, s in enumerate(samples):
            for slot, a in enumerate(s.activity_window):
                i = self.act_index.get(a)
                if i is not None:
                    x[row, slot * na + i] = 1.0
            base = WINDOW * na
            for slot, r in enumerate(s.role_window):
                i = self.role_index.get(r)
                if i is not None:
                    x[row, base + slot * nr + i] = 1.0
            tail = WINDOW * (na + nr)
            hours = 2.0 * np.pi * s.hour_of_day / 24.0
            days = 2.0 * np.pi * s.weekday / 7.0
            x[row, tail] = np.log1p(s.elapsed_minutes)
            x[row, tail + 1] = np.sin(hours)
            x[row, tail + 2] = np.cos(hours)
            x[row, tail + 3] = np.sin(days)
            x[row, tail + 4] = np.cos(days)
        return x


def _fit_mlp(task: str, seed: int, samples: Sequence[PrefixSample]):
    from sklearn.exceptions import ConvergenceWarning
    from sklearn.neural_network import MLPClassifier, MLPRegressor

    featurizer = _Featurizer(samples)
    x = featurizer.encode(samples)
    get = _TARGETS[task]
    common = dict(
        hidden_layer_sizes=(MLP_HYPERPARAMETERS["hidden_units"],),
        solver="adam",
        batch_size=min(MLP_HYPERPARAMETERS["batch_size"], len(samples)),
        learning_rate_init=MLP_HYPERPARAMETERS["learning_rate"],
        max_iter=MLP_HYPERPARAMETERS["epochs"],
        n_iter_no_change=MLP_HYPERPARAMETERS["epochs"],
        tol=0.0,
        shuffle=True,
        random_state=seed,
    )
    with _warnings.catch_warnings():
        # the fixed epoch budget is intentional; adam rarely converges in 30
        _warnings.simplefilter("ignore", category=ConvergenceWarning)
        if task in CLASSIFICATION_TASKS:
            y = np.array([get(s) for s in samples], dtype=object)
            net = MLPClassifier(**common).fit(x, y)
        else:
            y = np.log1p(np.array([float(get(s)) for s in samples]))
            net = MLPRegressor(**common).fit(x, y)
    return featurizer, net


class _MlpPredictor:
    def __init__(self, task: str, seed: int, samples: Sequence[PrefixSample]):
        self.task = task
        self.featurizer, self.net = _fit_mlp(task, seed, samples)

    def predict(self, samples: Sequence[PrefixSample]) -> list:
        x = self.featurizer.encode(samples)
        raw = self.net.predict(x)
        if self.task in CLASSIFICATION_TASKS:
            return [str(v) for v in raw]
        return [float(v) for v in np.clip(np.expm1(raw), 0.0, None)]


# ---------------------------------------------------------------------------
# public training / evaluation API


def train_predictor(spec: PredictorSpec, samples: Sequence[PrefixSample]):
    """Train one architecture for one task; raises when no sample has a
    defined target for the task."""
    defined = _defined(spec.task, samples)
    if not defined:
        raise NoDefinedTargets(f"no defined targets for task {spec.task}")
    if spec.architecture == FREQ_BASELINE:
        if spec.task in CLASSIFICATION_TASKS:
            return _FreqClassifier(spec.task).fit(defined)
        return _FreqRegressor(spec.task).fit(defined)
    return _MlpPredictor(spec.task, spec.seed, defined)


def evaluate_predictor(predictor, test_samples: Sequence[PrefixSample]) -> float:
    """Accuracy (classification) or MAE in minutes (regression)."""
    task = predictor.task
    defined = _defined(task, test_samples)
    if not defined:
        raise EmptyTestSet(f"no defined targets for task {task} in test data")
    get = _TARGETS[task]
    predictions = predictor.predict(defined)
    if task in CLASSIFICATION_TASKS:
        hits = sum(1 for p, s in zip(predictions, defined) if p == get(s))
        return hits / len(defined)
    return float(
        sum(abs(p - float(get(s))) for p, s in zip(predictions, defined))
        / len(defined)
    )


def _subseed(seed: int, task_index: int, arch_index: int) -> int:
    return int(
        np.random.SeedSequence([seed, task_index, arch_index])
        .generate_state(1)[0]
    )


def metric_vector_detailed(
    training_log: EventLog,
    test_log: EventLog,
    roles: RoleMap,
    seed: int,
) -> tuple[TaskMetricVector, dict[str, TaskMetricVector]]:
    """Train both architectures per task on the training log, evaluate on
    the test log; returns the architecture-averaged vector plus each
    architecture's own vector."""
    train_samples = extract_prefix_samples(training_log, roles)
    test_samples = extract_prefix_samples(test_log, roles)
    per_arch: dict[str, list[float]] = {a: [] for a in ARCHITECTURES}
    for ti, task in enumerate(TASKS):
        for ai, arch in enumerate(ARCHITECTURES):
            spec = PredictorSpec(
                architecture=arch, task=task, seed=_subseed(seed, ti, ai)
            )
            predictor = train_predictor(spec, train_samples)
            per_arch[arch].append(evaluate_predictor(predictor, test_samples))
    averaged = TaskMetricVector(*[
        sum(per_arch[a][ti] for a in ARCHITECTURES) / len(ARCHITECTURES)
        for ti in range(len(TASKS))
    ])
    detail = {a: TaskMetricVector(*per_arch[a]) for a in ARCHITECTURES}
    return averaged, detail


def metric_vector(
    training_log: EventLog,
    test_log: EventLog,
    roles: RoleMap,
    seed: int,
) -> TaskMetricVector:
    return metric_vector_detailed(training_log, test_log, roles, seed)[0]
