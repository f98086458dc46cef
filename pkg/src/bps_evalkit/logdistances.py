"""Distance suite for comparing a simulated event log against a reference log.

Pipeline: extract a one-dimensional proxy (timestamps or intervals), bin it
into hours where required, then measure with a W1 kernel. Six distances:

* NGD  - n-gram frequency distance over activity sequences (control flow)
* AEDD - absolute event distribution (all start and end stamps)
* CADD - case arrival distribution
* CEDD - circadian event distribution (hour-of-day per weekday)
* REDD - relative event distribution (offsets from case arrival)
* CTDD - cycle time distribution

AEDD/CADD/REDD/CTDD run in one of two modes: TIMESTAMP_SAMPLES compares the
raw hour-valued samples with the exact quantile integral; HOURLY_COUNTS bins
both sides into a shared per-hour count vector first and compares the two
count vectors with the equal-size kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterable

from .errors import HorizonTooSmall, OriginAfterData
from .eventlog import EventLog
from .wasserstein import w1_quantile, w1_sorted


class ProxyKind(Enum):
    ABS_EVENT = "ABS_EVENT"
    CASE_ARRIVAL = "CASE_ARRIVAL"
    REL_EVENT = "REL_EVENT"
    CYCLE_TIME = "CYCLE_TIME"


class DistanceKind(Enum):
    AEDD = "AEDD"
    CADD = "CADD"
    REDD = "REDD"
    CTDD = "CTDD"


class Mode(Enum):
    TIMESTAMP_SAMPLES = "TIMESTAMP_SAMPLES"
    HOURLY_COUNTS = "HOURLY_COUNTS"


class ReferenceKind(Enum):
    TEST = "TEST"
    TRAIN = "TRAIN"


_PROXY_FOR = {
    DistanceKind.AEDD: ProxyKind.ABS_EVENT,
    DistanceKind.CADD: ProxyKind.CASE_ARRIVAL,
    DistanceKind.REDD: ProxyKind.REL_EVENT,
    DistanceKind.CTDD: ProxyKind.CYCLE_TIME,
}

START_GRAM = "__START__"
END_GRAM = "__END__"


@dataclass(frozen=True)
class HourSeries:
    """One-dimensional proxy values anchored at ``origin``.

    Values are hour indices since origin (floored, for the event/arrival
    proxies), offsets in floored hours (REL_EVENT), or fractional hours
    (CYCLE_TIME). The circadian metric uses hour-of-day values 0..23.
    """

    origin: datetime
    values: tuple[float, ...]


@dataclass(frozen=True)
class CountSequence:
    """Per-hour observation counts for consecutive bins starting at origin."""

    origin: datetime
    counts: tuple[int, ...]


@dataclass(frozen=True)
class DistanceReport:
    ngd: float
    aedd: float
    cadd: float
    cedd: float
    redd: float
    ctdd: float
    mode: Mode
    reference_kind: ReferenceKind

    def to_dict(self) -> dict:
        # key order is part of the serialization contract
        return {
            "ngd": self.ngd,
            "aedd": self.aedd,
            "cadd": self.cadd,
            "cedd": self.cedd,
            "redd": self.redd,
            "ctdd": self.ctdd,
            "mode": self.mode.value,
            "reference_kind": self.reference_kind.value,
        }


def _hours_between(later: datetime, earlier: datetime) -> float:
    return (later - earlier).total_seconds() / 3600.0


def extract_proxy(log: EventLog, kind: ProxyKind, origin: datetime) -> HourSeries:
    """Project a log onto the one-dimensional proxy for ``kind``."""
    if kind in (ProxyKind.ABS_EVENT, ProxyKind.CASE_ARRIVAL):
        if origin > log.earliest:
            raise OriginAfterData(
                f"origin {origin.isoformat()} is after the first "
                f"timestamp {log.earliest.isoformat()}"
            )
    values: list[float] = []
    if kind is ProxyKind.ABS_EVENT:
        for e in log.events():
            values.append(math.floor(_hours_between(e.start, origin)))
            values.append(math.floor(_hours_between(e.end, origin)))
    elif kind is ProxyKind.CASE_ARRIVAL:
        for t in log.traces:
            values.append(math.floor(_hours_between(t.arrival, origin)))
    elif kind is ProxyKind.REL_EVENT:
        for t in log.traces:
            for e in t.events:
                values.append(math.floor(_hours_between(e.start, t.arrival)))
    elif kind is ProxyKind.CYCLE_TIME:
        for t in log.traces:
            values.append(_hours_between(t.completion, t.arrival))
    return HourSeries(origin=origin, values=tuple(values))


def to_count_sequence(series: HourSeries, horizon_hours: int) -> CountSequence:
    """Bin proxy values into ``horizon_hours`` consecutive hour bins.

    Fractional values fall into the bin they started in (floor); any value
    at or past the horizon aborts.
    """
    if horizon_hours < 1:
        raise HorizonTooSmall("horizon must be at least 1 hour")
    counts = [0] * horizon_hours
    for v in series.values:
        b = math.floor(v)
        if b < 0 or b >= horizon_hours:
            raise HorizonTooSmall(
                f"value {v} outside horizon of {horizon_hours} hours"
            )
        counts[b] += 1
    return CountSequence(origin=series.origin, counts=tuple(counts))


def _gram_counts(log: EventLog, n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for trace in log.traces:
        seq = [START_GRAM] * (n - 1) + list(trace.activity_sequence()) + [END_GRAM]
        for i in range(len(seq) - n + 1):
            gram = tuple(seq[i:i + n])
            counts[gram] = counts.get(gram, 0) + 1
    return counts


def ngd(sim: EventLog, ref: EventLog, n: int = 3) -> float:
    """N-gram distance over activity sequences, in [0, 1].

    Sequences are padded with n-1 start sentinels and one end sentinel;
    the distance is sum |f_sim - f_ref| / sum (f_sim + f_ref) over all grams.
    """
    if n < 2:
        raise ValueError("n-gram order must be at least 2")
    fs = _gram_counts(sim, n)
    fr = _gram_counts(ref, n)
    grams = sorted(set(fs) | set(fr))
    num = sum(abs(fs.get(g, 0) - fr.get(g, 0)) for g in grams)
    den = sum(fs.get(g, 0) + fr.get(g, 0) for g in grams)
    return num / den


def shared_origin(sim: EventLog, ref: EventLog) -> datetime:
    return min(sim.earliest, ref.earliest)


def distribution_distance(
    sim: EventLog,
    ref: EventLog,
    kind: DistanceKind,
    mode: Mode = Mode.TIMESTAMP_SAMPLES,
) -> float:
    """W1 distance between the two logs' proxy distributions, in hours."""
    origin = shared_origin(sim, ref)
    proxy = _PROXY_FOR[kind]
    s = extract_proxy(sim, proxy, origin)
    r = extract_proxy(ref, proxy, origin)
    if mode is Mode.TIMESTAMP_SAMPLES:
        return w1_quantile(s.values, r.values)
    horizon = int(max(math.floor(v) for v in s.values + r.values)) + 1
    cs = to_count_sequence(s, horizon)
    cr = to_count_sequence(r, horizon)
    return w1_sorted([float(c) for c in cs.counts], [float(c) for c in cr.counts])


def cedd(sim: EventLog, ref: EventLog) -> float:
    """Circadian event distribution distance, in hours within [0, 24].

    Event-start hours (0..23) are compared per weekday; a weekday observed
    in exactly one log contributes the maximal penalty of 24 hours. The
    result is the mean over weekdays observed in at least one log.
    """
    def by_weekday(log: EventLog) -> dict[int, list[float]]:
        out: dict[int, list[float]] = {}
        for e in log.events():
            out.setdefault(e.start.weekday(), []).append(float(e.start.hour))
        return out

    s = by_weekday(sim)
    r = by_weekday(ref)
    days = sorted(set(s) | set(r))
    if not days:
        return 0.0
    parts = []
    for d in days:
        if d in s and d in r:
            parts.append(w1_quantile(s[d], r[d]))
        else:
            parts.append(24.0)
    return sum(parts) / len(parts)


def standard_practice_report(
    sim: EventLog,
    ref: EventLog,
    mode: Mode = Mode.TIMESTAMP_SAMPLES,
    reference_kind: ReferenceKind = ReferenceKind.TEST,
    ngram_n: int = 3,
) -> DistanceReport:
    """All six distances against the given reference log.

    ``reference_kind`` only records which log played the reference role so
    reports are self-describing; it does not change any computation.
    """
    return DistanceReport(
        ngd=ngd(sim, ref, ngram_n),
        aedd=distribution_distance(sim, ref, DistanceKind.AEDD, mode),
        cadd=distribution_distance(sim, ref, DistanceKind.CADD, mode),
        cedd=cedd(sim, ref),
        redd=distribution_distance(sim, ref, DistanceKind.REDD, mode),
        ctdd=distribution_distance(sim, ref, DistanceKind.CTDD, mode),
        mode=mode,
        reference_kind=reference_kind,
    )


def mean_report(
    reports: Iterable[DistanceReport],
) -> DistanceReport:
    """Field-wise mean of several reports (mode/reference must agree)."""
    rs = list(reports)
    if not rs:
        raise ValueError("no reports to average")
    modes = {r.mode for r in rs}
    kinds = {r.reference_kind for r in rs}
    if len(modes) != 1 or len(kinds) != 1:
        raise ValueError("cannot average reports with mixed mode or reference")
    k = len(rs)
    return DistanceReport(
        ngd=sum(r.ngd for r in rs) / k,
        aedd=sum(r.aedd for r in rs) / k,
        cadd=sum(r.cadd for r in rs) / k,
        cedd=sum(r.cedd for r in rs) / k,
        redd=sum(r.redd for r in rs) / k,
        ctdd=sum(r.ctdd for r in rs) / k,
        mode=rs[0].mode,
        reference_kind=rs[0].reference_kind,
    )
