"""Tests for prefix extraction, the two predictor families, and task metrics."""

import math

import pytest

from bps_evalkit import (
    PredictorSpec,
    PrefixSample,
    TASKS,
    derive_roles,
    evaluate_predictor,
    extract_prefix_samples,
    metric_vector,
    metric_vector_detailed,
    train_predictor,
)
from bps_evalkit.ppm import PAD, WINDOW
from bps_evalkit.errors import EmptyTestSet, NoDefinedTargets
from conftest import ev, log_of


def pad_window(*tail):
    return (PAD,) * (WINDOW - len(tail)) + tuple(tail)


def sample(acts, next_activity, *, next_role="role_0", npp=None, nwp=None,
           rtp=0.0, elapsed=10.0, hour=9.5, weekday=0, case="c"):
    return PrefixSample(
        case_id=case,
        activity_window=pad_window(*acts),
        role_window=pad_window(*("role_0",) * len(acts)),
        elapsed_minutes=elapsed,
        hour_of_day=hour,
        weekday=weekday,
        next_activity=next_activity,
        next_role=next_role,
        npp_minutes=npp,
        nwp_minutes=nwp,
        rtp_minutes=rtp,
    )


# --- prefix extraction --------------------------------------------------------

def sample_trace_log():
    return log_of([
        ev("c1", "a", "res_x", 0, 10),    # 09:00-09:10
        ev("c1", "b", "res_y", 30, 45),   # 09:30-09:45
        ev("c1", "c", "res_x", 60, 120),  # 10:00-11:00
    ])


def test_one_prefix_per_event_with_padded_windows():
    log = sample_trace_log()
    samples = extract_prefix_samples(log, derive_roles(log, 0.7))
    assert len(samples) == 3
    assert samples[0].activity_window == pad_window("a")
    assert samples[1].activity_window == pad_window("a", "b")
    assert samples[2].activity_window == pad_window("a", "b", "c")


def test_prefix_targets_are_the_next_event():
    log = sample_trace_log()
    s1, s2, s3 = extract_prefix_samples(log, derive_roles(log, 0.7))
    assert (s1.next_activity, s2.next_activity, s3.next_activity) == \
        ("b", "c", "END")
    assert s1.npp_minutes == 15.0   # duration of b
    assert s1.nwp_minutes == 20.0   # 09:30 start - 09:10 prefix end
    assert s1.rtp_minutes == 110.0  # case ends 11:00
    assert s3.next_role is None and s3.npp_minutes is None
    assert s3.rtp_minutes == 0.0


def test_prefix_clock_features():
    log = sample_trace_log()
    s1, _, s3 = extract_prefix_samples(log, derive_roles(log, 0.7))
    assert s1.elapsed_minutes == 10.0
    assert s1.hour_of_day == pytest.approx(9 + 10 / 60)
    assert s1.weekday == 0
    assert s3.elapsed_minutes == 120.0


def test_negative_gaps_are_clamped_to_zero_waiting():
    # second event starts before the first ends (overlap): waiting is 0
    log = log_of([ev("c1", "a", "r", 0, 30), ev("c1", "b", "r", 20, 40)])
    s1, _ = extract_prefix_samples(log, derive_roles(log, 0.7))
    assert s1.nwp_minutes == 0.0


# --- frequency baseline ---------------------------------------------------------

def backoff_training_set():
    return [
        sample(("a", "b", "c"), "d"),
        sample(("a", "b", "c"), "d"),
        sample(("a", "b", "c"), "e"),
        sample(("q", "b", "c"), "e"),
        sample(("q", "b", "c"), "e"),
        sample(("m", "n", "o"), "d"),
    ]


def fit_nap(samples):
    return train_predictor(PredictorSpec("FREQ_BASELINE", "NAP", 0), samples)


def test_full_context_wins_when_seen():
    clf = fit_nap(backoff_training_set())
    assert clf.predict([sample(("a", "b", "c"), "?")]) == ["d"]


def test_unseen_trigram_backs_off_to_bigram():
    clf = fit_nap(backoff_training_set())
    # (b, c) counts pooled over both trigram contexts: d: 3, e: 3... the
    # bigram table counts d twice (a,b,c twice) + once e, plus (q,b,c) e
    # twice: d:2+?  -> enumerate: d appears 2, e appears 3 under (b, c)
    assert clf.predict([sample(("z", "b", "c"), "?")]) == ["e"]


def test_fully_unseen_context_falls_back_to_global_tie_break():
    clf = fit_nap(backoff_training_set())
    # global counts: d 3, e 3 -> lexicographic tie-break picks d
    assert clf.predict([sample(("x", "y", "z"), "?")]) == ["d"]


def test_classification_accuracy_is_the_match_rate():
    clf = fit_nap(backoff_training_set())
    test = [
        sample(("a", "b", "c"), "d"),   # predicted d: hit
        sample(("a", "b", "c"), "e"),   # predicted d: miss
        sample(("q", "b", "c"), "e"),   # predicted e: hit
    ]
    assert evaluate_predictor(clf, test) == pytest.approx(2 / 3)


def test_regression_baseline_uses_conditional_means():
    train = [
        sample(("a",), "x", npp=10.0),
        sample(("a",), "x", npp=20.0),
        sample(("b",), "x", npp=30.0),
    ]
    reg = train_predictor(PredictorSpec("FREQ_BASELINE", "NPP", 0), train)
    assert reg.predict([sample(("a",), "x", npp=1.0)]) == [15.0]
    assert reg.predict([sample(("b",), "x", npp=1.0)]) == [30.0]
    # unseen final activity: global mean (10+20+30)/3
    assert reg.predict([sample(("z",), "x", npp=1.0)]) == [20.0]


def test_regression_error_is_mean_absolute_minutes():
    train = [sample(("a",), "x", npp=10.0), sample(("a",), "x", npp=20.0)]
    reg = train_predictor(PredictorSpec("FREQ_BASELINE", "NPP", 0), train)
    test = [sample(("a",), "x", npp=12.0), sample(("a",), "x", npp=21.0)]
    # predictions are 15.0 for both: |15-12| = 3, |15-21| = 6, mean 4.5
    assert evaluate_predictor(reg, test) == pytest.approx(4.5)


# --- MLP architecture -------------------------------------------------------------

def alternating_samples(n=40):
    out = []
    for i in range(n):
        acts = ("a",) if i % 2 == 0 else ("b",)
        out.append(sample(acts, "x" if i % 2 == 0 else "y",
                          npp=5.0 if i % 2 == 0 else 50.0,
                          elapsed=float(i), hour=(i % 24) + 0.5,
                          weekday=i % 7))
    return out


def test_mlp_is_deterministic_given_its_seed():
    train = alternating_samples()
    a = train_predictor(PredictorSpec("MLP", "NAP", 123), train)
    b = train_predictor(PredictorSpec("MLP", "NAP", 123), train)
    test = alternating_samples(10)
    assert a.predict(test) == b.predict(test)
    assert evaluate_predictor(a, test) == evaluate_predictor(b, test)


def test_mlp_learns_an_obvious_classification_rule():
    train = alternating_samples()
    clf = train_predictor(PredictorSpec("MLP", "NAP", 123), train)
    assert evaluate_predictor(clf, alternating_samples(10)) >= 0.8


def test_mlp_regression_output_is_never_negative():
    train = alternating_samples()
    reg = train_predictor(PredictorSpec("MLP", "NPP", 123), train)
    preds = reg.predict(alternating_samples(10))
    assert all(p >= 0.0 for p in preds)


def test_unseen_labels_encode_as_blank_windows():
    # an activity never seen in training must not crash prediction
    train = alternating_samples()
    clf = train_predictor(PredictorSpec("MLP", "NAP", 123), train)
    out = clf.predict([sample(("never_seen",), "x", npp=1.0)])
    assert len(out) == 1


# --- validation ----------------------------------------------------------------------

def test_predictor_spec_rejects_unknown_names():
    with pytest.raises(ValueError):
        PredictorSpec("RNN", "NAP", 0)
    with pytest.raises(ValueError):
        PredictorSpec("MLP", "XXX", 0)


def test_training_without_defined_targets_is_rejected():
    # single-event traces only ever have END as the next activity, so
    # next-duration targets are undefined everywhere
    undefined = [sample(("a",), "END", next_role=None, npp=None, nwp=None)]
    with pytest.raises(NoDefinedTargets):
        train_predictor(PredictorSpec("FREQ_BASELINE", "NPP", 0), undefined)


def test_evaluating_on_an_empty_test_set_is_rejected():
    clf = fit_nap(backoff_training_set())
    with pytest.raises(EmptyTestSet):
        evaluate_predictor(clf, [])


# --- task metric vectors ----------------------------------------------------------

def test_metric_vector_is_deterministic_and_finite(reference_split):
    train, test = reference_split.train, reference_split.test
    roles = derive_roles(train, 0.7)
    v1 = metric_vector(train, test, roles, 42)
    v2 = metric_vector(train, test, roles, 42)
    assert v1 == v2
    for task in TASKS:
        value = v1.value_for(task)
        assert math.isfinite(value)
        assert value >= 0.0
    assert 0.0 <= v1.nap <= 1.0 and 0.0 <= v1.nrp <= 1.0


def test_detailed_vector_averages_the_architectures(reference_split):
    train, test = reference_split.train, reference_split.test
    roles = derive_roles(train, 0.7)
    avg, by_arch = metric_vector_detailed(train, test, roles, 42)
    assert set(by_arch) == {"FREQ_BASELINE", "MLP"}
    for task in TASKS:
        expect = (by_arch["FREQ_BASELINE"].value_for(task)
                  + by_arch["MLP"].value_for(task)) / 2
        assert avg.value_for(task) == pytest.approx(expect)
