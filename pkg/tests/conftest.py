"""Shared builders and fixtures for the test suite.

Most tests work on tiny hand-built logs anchored at a fixed Monday morning
so weekday/hour arithmetic stays easy to verify by eye.
"""

from datetime import datetime, timedelta, timezone

import pytest

from bps_evalkit import (
    ArrivalKind,
    ArrivalModel,
    BpsModel,
    DurationKind,
    DurationModel,
    Event,
    EventLog,
    Trace,
    generate_reference_log,
    temporal_split,
)

MONDAY_9AM = datetime(2024, 3, 4, 9, 0, 0, tzinfo=timezone.utc)

ALL_WEEK = tuple((wd, 0, 24) for wd in range(7))
WEEKDAYS_9_17 = tuple((wd, 9, 17) for wd in range(5))


def at(minutes: float) -> datetime:
    """Timestamp ``minutes`` after the Monday 9am anchor."""
    return MONDAY_9AM + timedelta(minutes=minutes)


def ev(case: str, act: str, res: str, start_min: float, end_min: float) -> Event:
    return Event(case, act, res, at(start_min), at(end_min))


def log_of(*traces: list[Event]) -> EventLog:
    built = []
    for events in traces:
        built.append(Trace.of(events[0].case_id, events))
    return EventLog.from_traces(built)


def arrivals_log(gaps_minutes, duration_minutes: float = 1.0) -> EventLog:
    """One single-event case per arrival; arrivals spaced by ``gaps_minutes``."""
    traces = []
    cur = MONDAY_9AM
    for i in range(len(gaps_minutes) + 1):
        if i > 0:
            cur = cur + timedelta(minutes=gaps_minutes[i - 1])
        start = cur.replace(microsecond=0)
        e = Event(f"c{i:04d}", "arrive", "res_0", start,
                  start + timedelta(minutes=duration_minutes))
        traces.append(Trace.of(f"c{i:04d}", (e,)))
    return EventLog.from_traces(traces)


def single_activity_model(arrival: ArrivalModel,
                          first_arrival: datetime = MONDAY_9AM,
                          calendar=ALL_WEEK,
                          duration_minutes: float = 1.0,
                          resources=("res_0",)) -> BpsModel:
    return BpsModel(
        activities=("arrive",),
        transitions={"START": (("arrive", 1.0),), "arrive": (("END", 1.0),)},
        arrival=arrival,
        durations={"arrive": DurationModel(DurationKind.EMPIRICAL,
                                           sample_minutes=(duration_minutes,))},
        extraneous_delay_minutes=0.0,
        role_resources={"role_0": tuple(resources)},
        activity_roles={"arrive": ("role_0",)},
        calendars={r: tuple(calendar) for r in resources},
        first_arrival=first_arrival,
    )


def chain_model(activities, arrival_mean: float = 30.0,
                duration_minutes: float = 5.0,
                calendar=ALL_WEEK) -> BpsModel:
    """Deterministic chain over ``activities``, one shared resource."""
    transitions = {"START": ((activities[0], 1.0),)}
    for a, b in zip(activities, activities[1:]):
        transitions[a] = ((b, 1.0),)
    transitions[activities[-1]] = (("END", 1.0),)
    return BpsModel(
        activities=tuple(activities),
        transitions=transitions,
        arrival=ArrivalModel(ArrivalKind.MEAN_DEGENERATE, mean_minutes=arrival_mean),
        durations={a: DurationModel(DurationKind.EMPIRICAL,
                                    sample_minutes=(duration_minutes,))
                   for a in activities},
        extraneous_delay_minutes=0.0,
        role_resources={"role_0": ("res_0",)},
        activity_roles={a: ("role_0",) for a in activities},
        calendars={"res_0": tuple(calendar)},
        first_arrival=MONDAY_9AM,
    )


@pytest.fixture(scope="session")
def reference_log():
    return generate_reference_log(7, 200)


@pytest.fixture(scope="session")
def reference_split(reference_log):
    return temporal_split(reference_log, 0.8)
