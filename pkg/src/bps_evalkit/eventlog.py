"""Event log data model, CSV ingestion, temporal splitting, role discovery.

An event log is a multiset of traces; a trace is the ordered event sequence
of one case. Timestamps are timezone-aware UTC at second precision
throughout; the parser normalizes offsets and truncates sub-second parts.

Logs are canonicalized at construction: traces ordered by (arrival time,
case id), events within a trace by (start, end, activity). That makes
write -> parse the identity and keeps every downstream iteration
deterministic.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .errors import (
    DegenerateSplit,
    EmptyLog,
    EndBeforeStart,
    MissingColumn,
    UnparsableTimestamp,
)

CSV_COLUMNS = ("case_id", "activity", "resource", "start_time", "end_time")


@dataclass(frozen=True)
class Event:
    """One unit of work: activity executed by a resource over [start, end]."""

    case_id: str
    activity: str
    resource: str
    start: datetime
    end: datetime

    def __post_init__(self):
        if self.end < self.start:
            raise EndBeforeStart(
                f"event {self.activity!r} of case {self.case_id!r} "
                f"ends before it starts"
            )

    @property
    def duration_minutes(self) -> float:
        return (self.end - self.start).total_seconds() / 60.0


@dataclass(frozen=True)
class Trace:
    """All events of one case, sorted by (start, end, activity)."""

    case_id: str
    events: tuple[Event, ...]

    @classmethod
    def of(cls, case_id: str, events: Iterable[Event]) -> "Trace":
        ordered = tuple(sorted(events, key=lambda e: (e.start, e.end, e.activity)))
        if not ordered:
            raise EmptyLog(f"trace {case_id!r} has no events")
        return cls(case_id, ordered)

    @property
    def arrival(self) -> datetime:
        return self.events[0].start

    @property
    def completion(self) -> datetime:
        return max(e.end for e in self.events)

    def activity_sequence(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)


@dataclass(frozen=True)
class EventLog:
    """Multiset of traces in canonical (arrival, case_id) order."""

    traces: tuple[Trace, ...]

    @classmethod
    def from_traces(cls, traces: Iterable[Trace]) -> "EventLog":
        ordered = tuple(sorted(traces, key=lambda t: (t.arrival, t.case_id)))
        if not ordered:
            raise EmptyLog("event log has no traces")
        seen = set()
        for t in ordered:
            if t.case_id in seen:
                raise ValueError(f"duplicate case id {t.case_id!r}")
            seen.add(t.case_id)
        return cls(ordered)

    @cached_property
    def activity_alphabet(self) -> tuple[str, ...]:
        return tuple(sorted({e.activity for t in self.traces for e in t.events}))

    @cached_property
    def resource_set(self) -> tuple[str, ...]:
        return tuple(sorted({e.resource for t in self.traces for e in t.events}))

    def __len__(self) -> int:
        return len(self.traces)

    def events(self) -> Iterable[Event]:
        for t in self.traces:
            yield from t.events

    @property
    def earliest(self) -> datetime:
        return self.traces[0].arrival


@dataclass(frozen=True)
class TemporalSplit:
    train: EventLog
    test: EventLog
    ratio: float
    boundary: datetime


@dataclass(frozen=True)
class RoleMap:
    """Total mapping resource -> role label; roles named role_0..role_{m-1}."""

    mapping: dict[str, str]
    roles: tuple[str, ...]

    def role_of(self, resource: str, default: str | None = None) -> str:
        if resource in self.mapping:
            return self.mapping[resource]
        if default is not None:
            return default
        raise KeyError(resource)


def _parse_timestamp(text: str) -> datetime:
    # fromisoformat on this Python version rejects the military Z suffix
    ts = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def parse_event_log_csv(path) -> EventLog:
    """Read a CSV event log (columns case_id,activity,resource,start_time,end_time).

    Timestamps must be ISO-8601; offsets are normalized to UTC and precision
    truncated to whole seconds. Extra columns are ignored. Every defect aborts
    with the offending file row in the message.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyLog(f"{path}: file is empty")
        missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise MissingColumn(f"{path}: missing column(s) {', '.join(missing)}")
        by_case: dict[str, list[Event]] = {}
        for row_no, row in enumerate(reader, start=2):
            values = {}
            for col in CSV_COLUMNS:
                v = row.get(col)
                if v is None or not v.strip():
                    raise MissingColumn(f"no value for column {col!r}", row=row_no)
                values[col] = v.strip()
            try:
                start = _parse_timestamp(values["start_time"])
                end = _parse_timestamp(values["end_time"])
            except ValueError as exc:
                raise UnparsableTimestamp(str(exc), row=row_no) from exc
            try:
                event = Event(
                    values["case_id"], values["activity"], values["resource"],
                    start, end,
                )
            except EndBeforeStart as exc:
                raise EndBeforeStart(str(exc), row=row_no) from exc
            by_case.setdefault(event.case_id, []).append(event)
    if not by_case:
        raise EmptyLog(f"{path}: no event rows")
    return EventLog.from_traces(
        Trace.of(cid, events) for cid, events in by_case.items()
    )


def write_event_log_csv(log: EventLog, path) -> None:
    """Write the canonical CSV form (UTF-8, LF, second-precision UTC stamps)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for trace in log.traces:
            for e in trace.events:
                writer.writerow(
                    [e.case_id, e.activity, e.resource,
                     e.start.isoformat(), e.end.isoformat()]
                )


def temporal_split(log: EventLog, ratio: float) -> TemporalSplit:
    """Split trace-wise by arrival time; first round(ratio*N) traces train.

    Rounding is half-up. Raises DegenerateSplit when either side would be
    empty (this includes ratios that round to all N traces).
    """
    if not 0.0 < ratio < 1.0:
        raise DegenerateSplit(f"ratio must lie in (0, 1), got {ratio}")
    n = len(log)
    if n < 2:
        raise DegenerateSplit("need at least 2 traces to split")
    n_train = int(math.floor(ratio * n + 0.5))
    if n_train == 0 or n_train == n:
        raise DegenerateSplit(
            f"ratio {ratio} on {n} traces leaves one side empty "
            f"({n_train}/{n - n_train})"
        )
    train = EventLog.from_traces(log.traces[:n_train])
    test = EventLog.from_traces(log.traces[n_train:])
    return TemporalSplit(train=train, test=test, ratio=ratio,
                         boundary=test.traces[0].arrival)


def _cosine(a: Sequence[float], b: Sequence[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def derive_roles(log: EventLog, similarity_threshold: float = 0.7) -> RoleMap:
    """Group resources into roles by activity-profile similarity.

    Each resource gets an activity-frequency vector; resources with cosine
    similarity >= threshold are linked and connected components become
    roles, named role_0.. in order of first appearance in the log.
    """
    alphabet = log.activity_alphabet
    index = {a: i for i, a in enumerate(alphabet)}
    profiles: dict[str, list[float]] = {}
    first_seen: dict[str, int] = {}
    for pos, event in enumerate(log.events()):
        prof = profiles.setdefault(event.resource, [0.0] * len(alphabet))
        prof[index[event.activity]] += 1.0
        first_seen.setdefault(event.resource, pos)

    resources = sorted(profiles)
    parent = {r: r for r in resources}

    def find(r: str) -> str:
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        return r

    for i, r1 in enumerate(resources):
        for r2 in resources[i + 1:]:
            if _cosine(profiles[r1], profiles[r2]) >= similarity_threshold:
                parent[find(r2)] = find(r1)

    groups: dict[str, list[str]] = {}
    for r in resources:
        groups.setdefault(find(r), []).append(r)
    # role numbering follows the earliest member appearance, so it is
    # stable under re-parsing the same log
    ordered_groups = sorted(
        groups.values(), key=lambda members: min(first_seen[m] for m in members)
    )
    mapping = {}
    names = []
    for k, members in enumerate(ordered_groups):
        name = f"role_{k}"
        names.append(name)
        for m in members:
            mapping[m] = name
    return RoleMap(mapping=mapping, roles=tuple(names))


def cycle_times(log: EventLog) -> tuple[float, ...]:
    """Per-trace cycle time in fractional hours, trace order preserved."""
    return tuple(
        (t.completion - t.arrival).total_seconds() / 3600.0 for t in log.traces
    )


def relabel_cases(log: EventLog, rename: Callable[[str], str]) -> EventLog:
    """Rebuild the log with case ids passed through ``rename``."""
    new_traces = []
    for t in log.traces:
        cid = rename(t.case_id)
        new_traces.append(
            Trace.of(cid, (Event(cid, e.activity, e.resource, e.start, e.end)
                           for e in t.events))
        )
    return EventLog.from_traces(new_traces)


def merge_logs(a: EventLog, b: EventLog) -> EventLog:
    """Union of two logs; case ids must be disjoint."""
    return EventLog.from_traces(a.traces + b.traces)
