"""Tests for the 1D Wasserstein kernels.

The three routes (sorted closed form, quantile integral, assignment
oracle) are checked against each other and against hand-computed values,
never against themselves.
"""

import math
import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bps_evalkit import Sample1D, w1_assignment_oracle, w1_quantile, w1_sorted
from bps_evalkit.errors import (
    EmptySample,
    LengthMismatch,
    NonFiniteValue,
    TooLarge,
)

ints = st.integers(min_value=-50, max_value=50)


def brute_force_min_assignment(x, y):
    # independent re-derivation of the assignment infimum
    n = len(x)
    best = math.inf
    for perm in permutations(range(n)):
        cost = sum(abs(x[i] - y[perm[i]]) for i in range(n))
        best = min(best, cost)
    return best / n


# --- hand-computed values -------------------------------------------------

def test_permuted_identical_samples_have_zero_distance():
    assert w1_sorted((1, 3, 1, 5, 4), (5, 4, 3, 1, 1)) == 0.0


def test_single_substitution_costs_its_per_item_share():
    # sorted pairs differ only at one slot, by 1, over 5 items
    assert w1_sorted((5, 5, 3, 1, 1), (5, 4, 3, 1, 1)) == 0.2


def test_quantile_integral_on_unequal_sizes_matches_hand_integral():
    # breakpoints at multiples of 1/2: |0-1|/2 + |0-2|/2 = 1.5
    assert w1_quantile((0.0,), (1.0, 2.0)) == 1.5
    # |0-1|/2 + |2-1|/2 = 1.0
    assert w1_quantile((0.0, 2.0), (1.0,)) == 1.0


def test_oracle_finds_the_crossing_assignment():
    assert w1_assignment_oracle((1, 2), (2, 1)) == 0.0
    assert w1_assignment_oracle((0, 0), (1, 3)) == 2.0


# --- cross-route equality -------------------------------------------------

@given(st.lists(ints, min_size=1, max_size=6),
       st.lists(ints, min_size=1, max_size=6))
def test_sorted_form_equals_brute_force_on_equal_sizes(xs, ys):
    n = min(len(xs), len(ys))
    xs, ys = xs[:n], ys[:n]
    assert w1_sorted(xs, ys) == brute_force_min_assignment(xs, ys)


@given(st.lists(ints, min_size=1, max_size=8),
       st.lists(ints, min_size=1, max_size=8))
def test_quantile_integral_matches_replication_oracle(xs, ys):
    # replicating each sample to the common LCM size reduces the quantile
    # integral to the equal-size sorted form
    lcm = math.lcm(len(xs), len(ys))
    xr = sorted(xs * (lcm // len(xs)))
    yr = sorted(ys * (lcm // len(ys)))
    assert w1_quantile(xs, ys) == pytest.approx(w1_sorted(xr, yr), abs=1e-9)


@settings(deadline=None)
@given(st.lists(ints, min_size=1, max_size=7))
def test_equal_size_routes_agree_exactly(xs):
    ys = list(xs)
    random.Random(0).shuffle(ys)
    assert w1_sorted(xs, ys) == 0.0
    assert w1_quantile(xs, ys) == 0.0
    assert w1_assignment_oracle(xs, ys) == 0.0


# --- metric properties ----------------------------------------------------

@given(st.lists(ints, min_size=1, max_size=10),
       st.lists(ints, min_size=1, max_size=10))
def test_symmetry_and_nonnegativity(xs, ys):
    n = min(len(xs), len(ys))
    xs, ys = xs[:n], ys[:n]
    d = w1_sorted(xs, ys)
    assert d >= 0.0
    assert d == w1_sorted(ys, xs)


@given(st.lists(ints, min_size=1, max_size=8),
       st.lists(ints, min_size=1, max_size=8),
       st.lists(ints, min_size=1, max_size=8))
def test_triangle_inequality(xs, ys, zs):
    n = min(len(xs), len(ys), len(zs))
    xs, ys, zs = xs[:n], ys[:n], zs[:n]
    assert w1_sorted(xs, zs) <= w1_sorted(xs, ys) + w1_sorted(ys, zs) + 1e-12


@given(st.lists(ints, min_size=1, max_size=10), ints)
def test_translation_invariance(xs, shift):
    ys = [v + 1 for v in xs]
    assert w1_sorted([v + shift for v in xs], [v + shift for v in ys]) == \
        pytest.approx(w1_sorted(xs, ys), abs=1e-9)


# --- validation -----------------------------------------------------------

def test_empty_sample_is_rejected():
    with pytest.raises(EmptySample):
        Sample1D.of(())
    with pytest.raises(EmptySample):
        w1_sorted((), (1.0,))


def test_non_finite_values_are_rejected():
    with pytest.raises(NonFiniteValue):
        Sample1D.of((1.0, math.nan))
    with pytest.raises(NonFiniteValue):
        w1_quantile((math.inf,), (1.0,))


def test_length_mismatch_is_rejected_by_the_sorted_form():
    with pytest.raises(LengthMismatch):
        w1_sorted((1.0,), (1.0, 2.0))


def test_oracle_caps_input_size():
    with pytest.raises(TooLarge):
        w1_assignment_oracle(tuple(range(10)), tuple(range(10)))


def test_sample_container_keeps_values_and_validates():
    s = Sample1D.of([3, 1, 2])
    assert s.values == (3.0, 1.0, 2.0)
    assert all(isinstance(v, float) for v in s.values)
