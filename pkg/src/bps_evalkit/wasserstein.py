"""One-dimensional Wasserstein-1 kernels over finite samples.

Three routes to the same quantity, kept separate on purpose so they can
cross-check each other:

* :func:`w1_sorted` - closed form for equal-size samples: sort both sides,
  average the absolute differences of the order statistics.
* :func:`w1_quantile` - exact integral of |F_x^-1 - F_y^-1| over the
  piecewise-constant empirical quantile functions; handles unequal sizes and
  reduces to the sorted form when sizes match.
* :func:`w1_assignment_oracle` - brute-force minimum over assignments,
  feasible only for tiny inputs; exists purely to validate the closed form.

All functions accept either a :class:`Sample1D` or any sequence of floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence, Union

from .errors import EmptySample, LengthMismatch, NonFiniteValue, TooLarge

SampleLike = Union["Sample1D", Sequence[float]]


@dataclass(frozen=True)
class Sample1D:
    """Non-empty sample of finite real numbers."""

    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise EmptySample("sample must contain at least one value")
        for v in self.values:
            if not math.isfinite(v):
                raise NonFiniteValue(f"sample contains non-finite value {v!r}")

    @classmethod
    def of(cls, values: Iterable[float]) -> "Sample1D":
        return cls(tuple(float(v) for v in values))

    def __len__(self) -> int:
        return len(self.values)


def _as_sample(x: SampleLike) -> Sample1D:
    if isinstance(x, Sample1D):
        return x
    return Sample1D.of(x)


def w1_sorted(x: SampleLike, y: SampleLike) -> float:
    """W1 distance between two equal-size empirical distributions.

    Equals (1/B) * sum_i |x_(i) - y_(i)| over the non-decreasing order
    statistics of both samples. Inputs are left unmodified.
    """
    xs = _as_sample(x)
    ys = _as_sample(y)
    if len(xs) != len(ys):
        raise LengthMismatch(f"sample sizes differ: {len(xs)} vs {len(ys)}")
    a = sorted(xs.values)
    b = sorted(ys.values)
    return math.fsum(abs(p - q) for p, q in zip(a, b)) / len(a)


def w1_quantile(x: SampleLike, y: SampleLike) -> float:
    """W1 distance between empirical distributions of any sizes.

    Integrates |F_x^-1(u) - F_y^-1(u)| exactly: both empirical quantile
    functions are step functions with breakpoints at multiples of 1/n and
    1/m, so the integral is a finite sum over the merged breakpoint grid.
    Works on the integer grid of multiples of 1/(n*m) to avoid any float
    breakpoint comparisons.
    """
    xs = sorted(_as_sample(x).values)
    ys = sorted(_as_sample(y).values)
    n, m = len(xs), len(ys)
    if n == m:
        # identical breakpoint grids: order statistics pair up directly
        return math.fsum(abs(p - q) for p, q in zip(xs, ys)) / n
    grid = sorted({i * m for i in range(n + 1)} | {j * n for j in range(m + 1)})
    total = math.fsum(
        (k2 - k1) * abs(xs[k1 // m] - ys[k1 // n])
        for k1, k2 in zip(grid, grid[1:])
    )
    return total / (n * m)


_ORACLE_MAX = 9


def w1_assignment_oracle(x: SampleLike, y: SampleLike) -> float:
    """Minimum over all pairings of (1/n) * sum_i |x_i - y_sigma(i)|.

    Exhaustive search over permutations; guarded at n <= 9 because the
    search is factorial. Only meant as an independent check of w1_sorted.
    """
    xs = _as_sample(x)
    ys = _as_sample(y)
    if len(xs) != len(ys):
        raise LengthMismatch(f"sample sizes differ: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n > _ORACLE_MAX:
        raise TooLarge(f"assignment oracle limited to n <= {_ORACLE_MAX}, got {n}")
    best = min(
        math.fsum(abs(a - b) for a, b in zip(xs.values, perm))
        for perm in permutations(ys.values)
    )
    return best / n
