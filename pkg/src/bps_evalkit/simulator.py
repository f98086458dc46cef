"""Data-driven business process simulation.

A :class:`BpsModel` bundles everything needed to generate synthetic logs:
an order-1 activity transition matrix with START/END sentinels, a case
arrival model, per-activity duration models, an extraneous delay, role
assignments, and per-resource weekly working calendars.

Models come from three places: :func:`discover_model` fits one to a train
log with plain observed frequencies, :func:`perturb_model` derives
what-if variants (the scenario catalogue), and :func:`build_reference_model`
is the hand-authored ground-truth process used by the test suite and demo
scripts.

Simulation is deterministic given (model, n_cases, start, seed): every case
owns three dedicated RNG substreams (arrival gap, path choice, durations),
so perturbing one model dimension leaves the other draws untouched. All
sampling is inverse-transform over a single uniform per decision.
"""

from __future__ import annotations

import heapq
import json
import math
import statistics
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .errors import InsufficientData, InvalidOverride
from .eventlog import Event, EventLog, RoleMap, Trace, derive_roles

START = "START"
END = "END"

EVENT_CAP_PER_CASE = 1000

# substream tags: one RNG stream per (seed, case, tag)
_TAG_ARRIVAL = 0
_TAG_PATH = 1
_TAG_DURATION = 2

_NORMAL = statistics.NormalDist()


def _stream(seed: int, case_index: int, tag: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, case_index, tag]))
    )


def _clamp_unit(u: float) -> float:
    return min(max(u, 1e-12), 1.0 - 1e-12)


class ArrivalKind(Enum):
    EXPONENTIAL = "EXPONENTIAL"
    EMPIRICAL = "EMPIRICAL"
    MEAN_DEGENERATE = "MEAN_DEGENERATE"


@dataclass(frozen=True)
class ArrivalModel:
    kind: ArrivalKind
    mean_minutes: float | None = None
    sample_minutes: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind is ArrivalKind.EMPIRICAL:
            if not self.sample_minutes:
                raise InsufficientData("empirical arrival model needs samples")
            object.__setattr__(
                self, "sample_minutes", tuple(sorted(self.sample_minutes))
            )
        elif self.mean_minutes is None or self.mean_minutes < 0:
            raise InsufficientData("arrival model needs a nonnegative mean")

    def draw_minutes(self, u: float) -> float:
        if self.kind is ArrivalKind.EXPONENTIAL:
            return -self.mean_minutes * math.log(1.0 - u)
        if self.kind is ArrivalKind.EMPIRICAL:
            n = len(self.sample_minutes)
            return self.sample_minutes[min(int(u * n), n - 1)]
        return self.mean_minutes

    def mean(self) -> float:
        if self.kind is ArrivalKind.EMPIRICAL:
            return statistics.fmean(self.sample_minutes)
        return self.mean_minutes


class DurationKind(Enum):
    LOGNORMAL = "LOGNORMAL"
    EMPIRICAL = "EMPIRICAL"


@dataclass(frozen=True)
class DurationModel:
    kind: DurationKind
    mu: float | None = None
    sigma: float | None = None
    sample_minutes: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind is DurationKind.EMPIRICAL:
            if not self.sample_minutes:
                raise InsufficientData("empirical duration model needs samples")
            object.__setattr__(
                self, "sample_minutes", tuple(sorted(self.sample_minutes))
            )
        elif self.mu is None or self.sigma is None or self.sigma < 0:
            raise InsufficientData("lognormal duration model needs mu and sigma")

    def draw_minutes(self, u: float) -> float:
        if self.kind is DurationKind.LOGNORMAL:
            return math.exp(self.mu + self.sigma * _NORMAL.inv_cdf(_clamp_unit(u)))
        n = len(self.sample_minutes)
        return self.sample_minutes[min(int(u * n), n - 1)]

    def scaled(self, multiplier: float) -> "DurationModel":
        if self.kind is DurationKind.EMPIRICAL:
            return DurationModel(
                DurationKind.EMPIRICAL,
                sample_minutes=tuple(v * multiplier for v in self.sample_minutes),
            )
        return DurationModel(
            DurationKind.LOGNORMAL, mu=self.mu + math.log(multiplier),
            sigma=self.sigma,
        )


CalendarWindow = tuple[int, int, int]  # (weekday 0..6, start hour, end hour)

TransitionRow = tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class BpsModel:
    """Complete simulation model; immutable, compares by value."""

    activities: tuple[str, ...]
    transitions: dict[str, TransitionRow]
    arrival: ArrivalModel
    durations: dict[str, DurationModel]
    extraneous_delay_minutes: float
    role_resources: dict[str, tuple[str, ...]]
    activity_roles: dict[str, tuple[str, ...]]
    calendars: dict[str, tuple[CalendarWindow, ...]]
    first_arrival: datetime

    def __post_init__(self):
        self.validate()

    @property
    def role_map(self) -> dict[str, str]:
        return {
            r: role
            for role in sorted(self.role_resources)
            for r in self.role_resources[role]
        }

    def resources(self) -> tuple[str, ...]:
        return tuple(sorted(
            r for members in self.role_resources.values() for r in members
        ))

    def eligible_resources(self, activity: str) -> tuple[str, ...]:
        out: set[str] = set()
        for role in self.activity_roles[activity]:
            out.update(self.role_resources.get(role, ()))
        return tuple(sorted(out))

    def validate(self) -> None:
        for src, row in self.transitions.items():
            if src == END:
                raise ValueError("END must be absorbing (no outgoing row)")
            total = math.fsum(p for _, p in row)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"transition row {src!r} sums to {total}")
            for dst, p in row:
                if p < 0:
                    raise ValueError(f"negative probability on {src!r}->{dst!r}")
                if dst != END and dst not in self.activities:
                    raise ValueError(f"unknown transition target {dst!r}")
        if START not in self.transitions:
            raise ValueError("model has no START row")
        if any(dst == END and p > 0 for dst, p in self.transitions[START]):
            raise ValueError("START must not transition directly to END")
        for act in self._reachable():
            roles = self.activity_roles.get(act, ())
            if not any(self.role_resources.get(role) for role in roles):
                raise ValueError(f"activity {act!r} has no eligible resource")
            if act not in self.durations:
                raise ValueError(f"activity {act!r} has no duration model")
        for res, windows in self.calendars.items():
            for wd, sh, eh in windows:
                if not (0 <= wd <= 6 and 0 <= sh < eh <= 24):
                    raise ValueError(
                        f"bad calendar window {(wd, sh, eh)} for {res!r}"
                    )

    def _reachable(self) -> tuple[str, ...]:
        seen: set[str] = set()
        frontier = [START]
        while frontier:
            src = frontier.pop()
            for dst, p in self.transitions.get(src, ()):
                if p > 0 and dst != END and dst not in seen:
                    seen.add(dst)
                    frontier.append(dst)
        return tuple(sorted(seen))


@dataclass(frozen=True)
class SimulationResult:
    log: EventLog
    warnings: tuple[str, ...]


class ScenarioKind(Enum):
    GT = "GT"
    SEQ_EDIT = "SEQ_EDIT"
    GATEWAY_EDIT = "GATEWAY_EDIT"
    RC = "RC"
    EXT = "EXT"
    DUR = "DUR"
    CAL = "CAL"
    ARR = "ARR"
    MEAN_ARRIVAL = "MEAN_ARRIVAL"


@dataclass(frozen=True)
class Scenario:
    """A what-if modification of a model, identified by kind + parameters."""

    kind: ScenarioKind
    duration_multiplier: float | None = None
    arrival_multiplier: float | None = None
    calendar_shift_hours: int | None = None
    delay_minutes: float | None = None
    row_overrides: tuple[tuple[str, tuple[tuple[str, float], ...]], ...] = ()

    def __post_init__(self):
        k = self.kind
        if k is ScenarioKind.DUR and not (
            self.duration_multiplier and self.duration_multiplier > 0
        ):
            raise ValueError("DUR needs a positive duration multiplier")
        if k is ScenarioKind.ARR and not (
            self.arrival_multiplier and self.arrival_multiplier > 0
        ):
            raise ValueError("ARR needs a positive arrival multiplier")
        if k is ScenarioKind.CAL:
            s = self.calendar_shift_hours
            if s is None or not (-24 < s < 24):
                raise ValueError("CAL shift must lie in (-24, 24) hours")
        if k is ScenarioKind.EXT:
            if self.delay_minutes is None or self.delay_minutes < 0:
                raise ValueError("EXT needs a nonnegative delay in minutes")
        if k in (ScenarioKind.SEQ_EDIT, ScenarioKind.GATEWAY_EDIT):
            if not self.row_overrides:
                raise ValueError(f"{k.value} needs transition row overrides")

    @property
    def label(self) -> str:
        k = self.kind
        if k is ScenarioKind.DUR:
            return f"DUR:{self.duration_multiplier}"
        if k is ScenarioKind.ARR:
            return f"ARR:{self.arrival_multiplier}"
        if k is ScenarioKind.CAL:
            return f"CAL:{self.calendar_shift_hours:+d}"
        if k is ScenarioKind.EXT:
            return f"EXT:{self.delay_minutes:g}"
        return k.value

    @classmethod
    def row_edit(cls, kind: ScenarioKind,
                 overrides: Mapping[str, Mapping[str, float]]) -> "Scenario":
        frozen = tuple(
            (src, tuple(sorted(row.items())))
            for src, row in sorted(overrides.items())
        )
        return cls(kind=kind, row_overrides=frozen)


GT_SCENARIO = Scenario(kind=ScenarioKind.GT)


def parse_scenario(text: str) -> Scenario:
    """Parse the `KIND[:param]` scenario grammar used by the CLI."""
    head, sep, param = text.strip().partition(":")
    kind = head.strip().upper()
    try:
        if kind == "GT":
            return Scenario(kind=ScenarioKind.GT)
        if kind == "RC":
            return Scenario(kind=ScenarioKind.RC)
        if kind == "MEAN_ARRIVAL":
            return Scenario(kind=ScenarioKind.MEAN_ARRIVAL)
        if kind == "DUR":
            return Scenario(kind=ScenarioKind.DUR,
                            duration_multiplier=float(param))
        if kind == "ARR":
            return Scenario(kind=ScenarioKind.ARR,
                            arrival_multiplier=float(param))
        if kind == "CAL":
            return Scenario(kind=ScenarioKind.CAL,
                            calendar_shift_hours=int(param))
        if kind == "EXT":
            return Scenario(kind=ScenarioKind.EXT, delay_minutes=float(param))
    except ValueError as exc:
        raise ValueError(f"bad scenario parameter in {text!r}: {exc}") from exc
    raise ValueError(
        f"unknown scenario {text!r}; expected one of "
        "GT, DUR:<mult>, ARR:<mult>, CAL:<+hours>, RC, EXT:<minutes>, "
        "MEAN_ARRIVAL"
    )


# ---------------------------------------------------------------------------
# model discovery


def _normalized_row(counts: Mapping[str, float]) -> TransitionRow:
    total = float(sum(counts.values()))
    return tuple((dst, counts[dst] / total) for dst in sorted(counts))


def _observed_windows(events: Iterable[Event]) -> tuple[CalendarWindow, ...]:
    # expand the observed start hours into one contiguous weekly range shared
    # by every weekday the resource appeared on.  Rarely chosen resources are
    # observed too sparsely for per-day ranges: the gaps are sampling
    # artifacts, and taking them literally starves the simulation of capacity.
    # Start hours are the right marks because windows gate event starts only;
    # work in progress past the window end says nothing about availability.
    weekdays: set[int] = set()
    hours: set[int] = set()
    for e in events:
        weekdays.add(e.start.weekday())
        hours.add(e.start.hour)
    lo, hi = min(hours), max(hours) + 1
    return tuple((wd, lo, hi) for wd in sorted(weekdays))


def discover_model(train: EventLog, role_threshold: float = 0.7) -> BpsModel:
    """Fit a simulation model to a train log with observed frequencies.

    Transitions are bigram frequencies over activity sequences (START/END
    padded), arrivals and durations are empirical samples, roles come from
    activity-profile clustering, and calendars are the observed active
    (weekday, hour) ranges per resource.
    """
    if len(train) < 2:
        raise InsufficientData("model discovery needs at least 2 traces")

    counts: dict[str, dict[str, float]] = {}
    for trace in train.traces:
        seq = (START,) + trace.activity_sequence() + (END,)
        for src, dst in zip(seq, seq[1:]):
            counts.setdefault(src, {})
            counts[src][dst] = counts[src].get(dst, 0.0) + 1.0
    transitions = {src: _normalized_row(counts[src]) for src in sorted(counts)}

    arrivals = [t.arrival for t in train.traces]
    gaps = [
        (b - a).total_seconds() / 60.0 for a, b in zip(arrivals, arrivals[1:])
    ]
    arrival = ArrivalModel(ArrivalKind.EMPIRICAL, sample_minutes=tuple(gaps))

    durations: dict[str, DurationModel] = {}
    samples: dict[str, list[float]] = {a: [] for a in train.activity_alphabet}
    for e in train.events():
        samples[e.activity].append(e.duration_minutes)
    for act in sorted(samples):
        if not samples[act]:
            raise InsufficientData(f"no duration observations for {act!r}")
        durations[act] = DurationModel(
            DurationKind.EMPIRICAL, sample_minutes=tuple(samples[act])
        )

    roles: RoleMap = derive_roles(train, role_threshold)
    role_resources: dict[str, tuple[str, ...]] = {
        role: tuple(sorted(r for r, ro in roles.mapping.items() if ro == role))
        for role in roles.roles
    }
    acts_by_role: dict[str, set[str]] = {}
    for e in train.events():
        acts_by_role.setdefault(e.activity, set()).add(
            roles.mapping[e.resource]
        )
    activity_roles = {
        act: tuple(sorted(acts_by_role[act])) for act in sorted(acts_by_role)
    }

    events_by_resource: dict[str, list[Event]] = {}
    for e in train.events():
        events_by_resource.setdefault(e.resource, []).append(e)
    calendars = {
        res: _observed_windows(evs)
        for res, evs in sorted(events_by_resource.items())
    }

    return BpsModel(
        activities=train.activity_alphabet,
        transitions=transitions,
        arrival=arrival,
        durations=durations,
        extraneous_delay_minutes=0.0,
        role_resources=role_resources,
        activity_roles=activity_roles,
        calendars=calendars,
        first_arrival=train.earliest,
    )


# ---------------------------------------------------------------------------
# simulation


def _sample_next(row: TransitionRow, u: float) -> str:
    acc = 0.0
    for label, p in row:
        acc += p
        if u < acc:
            return label
    return row[-1][0]


def _window_lookup(
    windows: tuple[CalendarWindow, ...]
) -> dict[int, list[tuple[int, int]]]:
    by_day: dict[int, list[tuple[int, int]]] = {}
    for wd, sh, eh in windows:
        by_day.setdefault(wd, []).append((sh, eh))
    for wd in by_day:
        by_day[wd].sort()
    return by_day

def _next_window_start(
    by_day: dict[int, list[tuple[int, int]]], t: datetime
) -> datetime:
    # weekly calendars repeat, so 8 days always reach the next window
    midnight = t.replace(hour=0, minute=0, second=0)
    for offset in range(8):
        day = midnight + timedelta(days=offset)
        for sh, eh in by_day.get(day.weekday(), ()):
            ws = day + timedelta(hours=sh)
            we = day + timedelta(hours=eh)
            if t < we:
                return ws if ws > t else t
    raise RuntimeError("no calendar window within 8 days")


def simulate_detailed(
    model: BpsModel, n_cases: int, start: datetime, seed: int
) -> SimulationResult:
    """Generate a log of ``n_cases`` cases; fully deterministic per seed.

    Case 0 arrives exactly at ``start``; later arrivals add sampled gaps.
    Tasks become enabled at the previous event's end (or the case arrival)
    plus the extraneous delay, wait for the chosen resource's next calendar
    window, then run to completion. Resources are picked by earliest
    feasible start, ties by lexicographic resource id. Pending tasks are
    dispatched globally in (enabled time, case index) order.
    """
    if n_cases < 1:
        raise ValueError("n_cases must be at least 1")
    if n_cases > 99999:
        raise ValueError("case id scheme supports at most 99999 cases")

    warnings: list[str] = []

    arrival_times: list[datetime] = []
    t = start
    for i in range(n_cases):
        if i > 0:
            u = _stream(seed, i, _TAG_ARRIVAL).random()
            gap_minutes = model.arrival.draw_minutes(u)
            t = t + timedelta(seconds=round(gap_minutes * 60.0))
        arrival_times.append(t)

    paths: list[list[str]] = []
    for i in range(n_cases):
        gen = _stream(seed, i, _TAG_PATH)
        path: list[str] = []
        current = START
        while True:
            nxt = _sample_next(model.transitions[current], gen.random())
            if nxt == END:
                break
            path.append(nxt)
            if len(path) >= EVENT_CAP_PER_CASE:
                warnings.append(
                    f"case_{i:05d} hit the {EVENT_CAP_PER_CASE}-event cap; "
                    f"truncated"
                )
                break
            current = nxt
        paths.append(path)

    durations_s: list[list[int]] = []
    for i, path in enumerate(paths):
        gen = _stream(seed, i, _TAG_DURATION)
        durations_s.append(
            [round(model.durations[a].draw_minutes(gen.random()) * 60.0)
             for a in path]
        )

    delay = timedelta(seconds=round(model.extraneous_delay_minutes * 60.0))
    needed = sorted({a for p in paths for a in p})
    eligible = {a: model.eligible_resources(a) for a in needed}
    lookups = {r: _window_lookup(w) for r, w in model.calendars.items()}
    free: dict[str, datetime] = {}

    events_by_case: list[list[Event]] = [[] for _ in range(n_cases)]
    heap: list[tuple[datetime, int, int]] = []
    for i in range(n_cases):
        if paths[i]:
            heapq.heappush(heap, (arrival_times[i] + delay, i, 0))

    while heap:
        enabled, i, j = heapq.heappop(heap)
        activity = paths[i][j]
        best_start: datetime | None = None
        best_resource: str | None = None
        for res in eligible[activity]:
            t0 = enabled if res not in free else max(enabled, free[res])
            s = _next_window_start(lookups[res], t0)
            if best_start is None or s < best_start:
                best_start, best_resource = s, res
        end = best_start + timedelta(seconds=durations_s[i][j])
        free[best_resource] = end
        events_by_case[i].append(
            Event(f"case_{i:05d}", activity, best_resource, best_start, end)
        )
        if j + 1 < len(paths[i]):
            heapq.heappush(heap, (end + delay, i, j + 1))

    log = EventLog.from_traces(
        Trace.of(f"case_{i:05d}", evs)
        for i, evs in enumerate(events_by_case)
    )
    return SimulationResult(log=log, warnings=tuple(warnings))


def simulate(model: BpsModel, n_cases: int, start: datetime, seed: int) -> EventLog:
    return simulate_detailed(model, n_cases, start, seed).log


# ---------------------------------------------------------------------------
# perturbations


def _shift_window(window: CalendarWindow, k: int) -> list[CalendarWindow]:
    wd, sh, eh = window
    length = eh - sh
    ns = (sh + k) % 24
    ne = ns + length
    if ne <= 24:
        return [(wd, ns, ne)]
    return [(wd, ns, 24), (wd, 0, ne - 24)]


def perturb_model(model: BpsModel, scenario: Scenario) -> BpsModel:
    """Return a modified copy of the model for the given scenario."""
    k = scenario.kind
    if k is ScenarioKind.GT:
        return model
    if k is ScenarioKind.RC:
        kept = {
            role: members[: (len(members) + 1) // 2]
            for role, members in model.role_resources.items()
        }
        surviving = {r for members in kept.values() for r in members}
        return replace(
            model,
            role_resources=kept,
            calendars={
                r: w for r, w in model.calendars.items() if r in surviving
            },
        )
    if k is ScenarioKind.EXT:
        return replace(model, extraneous_delay_minutes=scenario.delay_minutes)
    if k is ScenarioKind.DUR:
        m = scenario.duration_multiplier
        return replace(
            model,
            durations={a: d.scaled(m) for a, d in model.durations.items()},
        )
    if k is ScenarioKind.CAL:
        shift = scenario.calendar_shift_hours
        calendars = {
            res: tuple(sorted({
                piece for w in windows for piece in _shift_window(w, shift)
            }))
            for res, windows in model.calendars.items()
        }
        return replace(model, calendars=calendars)
    if k is ScenarioKind.ARR:
        m = scenario.arrival_multiplier
        a = model.arrival
        if a.kind is ArrivalKind.EMPIRICAL:
            arrival = ArrivalModel(
                ArrivalKind.EMPIRICAL,
                sample_minutes=tuple(v / m for v in a.sample_minutes),
            )
        else:
            arrival = ArrivalModel(a.kind, mean_minutes=a.mean_minutes / m)
        return replace(model, arrival=arrival)
    if k is ScenarioKind.MEAN_ARRIVAL:
        return replace(
            model,
            arrival=ArrivalModel(
                ArrivalKind.MEAN_DEGENERATE, mean_minutes=model.arrival.mean()
            ),
        )
    # SEQ_EDIT / GATEWAY_EDIT: explicit transition row overrides
    transitions = dict(model.transitions)
    known = set(model.activities) | {START}
    for src, row in scenario.row_overrides:
        if src not in known:
            raise InvalidOverride(f"override row for unknown activity {src!r}")
        for dst, weight in row:
            if dst != END and dst not in model.activities:
                raise InvalidOverride(
                    f"override {src!r}->{dst!r} targets an unknown activity"
                )
            if weight < 0:
                raise InvalidOverride(f"negative weight on {src!r}->{dst!r}")
        if not row or sum(w for _, w in row) <= 0:
            raise InvalidOverride(f"override row {src!r} has no positive weight")
        transitions[src] = _normalized_row(dict(row))
    return replace(model, transitions=transitions)


# ---------------------------------------------------------------------------
# built-in reference process

REFERENCE_START = datetime(2024, 3, 4, 9, 0, 0, tzinfo=timezone.utc)

_WEEKDAY_9_TO_17: tuple[CalendarWindow, ...] = tuple(
    (wd, 9, 17) for wd in range(5)
)

_REFERENCE_DURATIONS = {
    # activity: (mean minutes, sigma of log-minutes).  Means are sized so no
    # role runs hot: resampled arrival streams swing the offered load by a
    # few percent either way, and the baseline must absorb that without
    # drifting into queue growth.
    "register_order": (4.0, 0.40),
    "review_details": (6.0, 0.50),
    "check_inventory": (8.0, 0.50),
    "verify_payment": (14.0, 0.50),
    "assess_risk": (17.0, 0.60),
    "request_revision": (5.0, 0.40),
    "prepare_shipment": (10.0, 0.50),
    "quality_audit": (20.0, 0.40),
    "notify_customer": (3.0, 0.30),
    "complete_order": (4.0, 0.30),
    "cancel_order": (4.0, 0.30),
    "escalate_order": (8.0, 0.50),
}

_REFERENCE_TRANSITIONS = {
    START: {"register_order": 1.0},
    "register_order": {"review_details": 1.0},
    "review_details": {
        "check_inventory": 0.40, "verify_payment": 0.35, "assess_risk": 0.25,
    },
    "check_inventory": {"prepare_shipment": 0.90, "request_revision": 0.10},
    "verify_payment": {"prepare_shipment": 0.85, "request_revision": 0.15},
    "assess_risk": {"prepare_shipment": 0.70, "escalate_order": 0.30},
    "request_revision": {"review_details": 1.0},
    "prepare_shipment": {"quality_audit": 0.50, "notify_customer": 0.50},
    "quality_audit": {"notify_customer": 1.0},
    "notify_customer": {"complete_order": 0.80, "cancel_order": 0.20},
    "complete_order": {END: 1.0},
    "cancel_order": {END: 1.0},
    "escalate_order": {END: 1.0},
}

_REFERENCE_ROLES = {
    "intake": tuple(f"clerk_{i:02d}" for i in range(1, 6)),
    "ops": tuple(f"handler_{i:02d}" for i in range(1, 7)),
    "finance": tuple(f"analyst_{i:02d}" for i in range(1, 5)),
    "quality": tuple(f"auditor_{i:02d}" for i in range(1, 5)),
}

_REFERENCE_ACTIVITY_ROLES = {
    "register_order": ("intake",),
    "review_details": ("intake",),
    "request_revision": ("intake",),
    "cancel_order": ("intake",),
    "check_inventory": ("ops",),
    "prepare_shipment": ("ops",),
    "notify_customer": ("ops",),
    "complete_order": ("ops",),
    "verify_payment": ("finance",),
    "assess_risk": ("finance",),
    "escalate_order": ("finance",),
    "quality_audit": ("quality",),
}

REFERENCE_ARRIVAL_MEAN_MINUTES = 30.0


def build_reference_model() -> BpsModel:
    """Ground-truth order-fulfillment process: 12 activities (one rework
    loop, a three-way exclusive choice, three distinct end activities),
    19 resources in 4 roles, exponential arrivals, lognormal durations,
    weekday 9-17 UTC calendars."""
    durations = {}
    for act, (mean, sigma) in sorted(_REFERENCE_DURATIONS.items()):
        mu = math.log(mean) - sigma * sigma / 2.0
        durations[act] = DurationModel(DurationKind.LOGNORMAL, mu=mu, sigma=sigma)
    transitions = {
        src: _normalized_row(row)
        for src, row in sorted(_REFERENCE_TRANSITIONS.items())
    }
    calendars = {
        res: _WEEKDAY_9_TO_17
        for members in _REFERENCE_ROLES.values()
        for res in members
    }
    return BpsModel(
        activities=tuple(sorted(_REFERENCE_DURATIONS)),
        transitions=transitions,
        arrival=ArrivalModel(
            ArrivalKind.EXPONENTIAL,
            mean_minutes=REFERENCE_ARRIVAL_MEAN_MINUTES,
        ),
        durations=durations,
        extraneous_delay_minutes=0.0,
        role_resources={k: v for k, v in sorted(_REFERENCE_ROLES.items())},
        activity_roles={
            k: v for k, v in sorted(_REFERENCE_ACTIVITY_ROLES.items())
        },
        calendars={k: calendars[k] for k in sorted(calendars)},
        first_arrival=REFERENCE_START,
    )


def generate_reference_log(seed: int, n_cases: int) -> EventLog:
    """Simulate the built-in reference process; deterministic per seed."""
    return simulate(build_reference_model(), n_cases, REFERENCE_START, seed)


# ---------------------------------------------------------------------------
# model (de)serialization


def model_to_dict(model: BpsModel) -> dict:
    return {
        "activities": list(model.activities),
        "transitions": {
            src: [[dst, p] for dst, p in row]
            for src, row in sorted(model.transitions.items())
        },
        "arrival": {
            "kind": model.arrival.kind.value,
            "mean_minutes": model.arrival.mean_minutes,
            "sample_minutes": (
                list(model.arrival.sample_minutes)
                if model.arrival.sample_minutes is not None else None
            ),
        },
        "durations": {
            act: {
                "kind": d.kind.value,
                "mu": d.mu,
                "sigma": d.sigma,
                "sample_minutes": (
                    list(d.sample_minutes)
                    if d.sample_minutes is not None else None
                ),
            }
            for act, d in sorted(model.durations.items())
        },
        "extraneous_delay_minutes": model.extraneous_delay_minutes,
        "role_resources": {
            role: list(members)
            for role, members in sorted(model.role_resources.items())
        },
        "activity_roles": {
            act: list(roles)
            for act, roles in sorted(model.activity_roles.items())
        },
        "calendars": {
            res: [list(w) for w in windows]
            for res, windows in sorted(model.calendars.items())
        },
        "first_arrival": model.first_arrival.isoformat(),
    }


def model_from_dict(doc: dict) -> BpsModel:
    arrival_doc = doc["arrival"]
    arrival = ArrivalModel(
        ArrivalKind(arrival_doc["kind"]),
        mean_minutes=arrival_doc.get("mean_minutes"),
        sample_minutes=(
            tuple(arrival_doc["sample_minutes"])
            if arrival_doc.get("sample_minutes") is not None else None
        ),
    )
    durations = {}
    for act, d in doc["durations"].items():
        durations[act] = DurationModel(
            DurationKind(d["kind"]),
            mu=d.get("mu"),
            sigma=d.get("sigma"),
            sample_minutes=(
                tuple(d["sample_minutes"])
                if d.get("sample_minutes") is not None else None
            ),
        )
    first_arrival = datetime.fromisoformat(
        doc["first_arrival"].replace("Z", "+00:00")
    )
    if first_arrival.tzinfo is None:
        first_arrival = first_arrival.replace(tzinfo=timezone.utc)
    return BpsModel(
        activities=tuple(doc["activities"]),
        transitions={
            src: tuple((dst, float(p)) for dst, p in row)
            for src, row in doc["transitions"].items()
        },
        arrival=arrival,
        durations=durations,
        extraneous_delay_minutes=float(doc["extraneous_delay_minutes"]),
        role_resources={
            role: tuple(members)
            for role, members in doc["role_resources"].items()
        },
        activity_roles={
            act: tuple(roles) for act, roles in doc["activity_roles"].items()
        },
        calendars={
            res: tuple(tuple(w) for w in windows)
            for res, windows in doc["calendars"].items()
        },
        first_arrival=first_arrival,
    )


def save_model(model: BpsModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path) -> BpsModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
