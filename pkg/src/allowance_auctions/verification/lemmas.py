"""Monte Carlo and exhaustive checks of the two random-split concentration facts.

* sum concentration: with ``a_1 < a/36``, a fair-coin subset sum ``b`` lands
  in ``(a/3, 2a/3)`` with probability at least 3/4;
* min-matching concentration: with ``w_1 < w/rho``, pairing the t-th largest
  of one side with the t-th largest of the other gives a total of pairwise
  minima above ``(w/3)(1 - 1/rho)`` with probability at least 1/2.

Numbers are sorted descending, so each side of a split listed in index
order is itself sorted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .. import _kernels

SUM_BOUND = 0.75
MATCHING_BOUND = 0.5


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class LemmaTrial:
    numbers: np.ndarray
    trials: int
    successes: int
    bound: float
    precondition_ok: bool

    @property
    def frequency(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        f = self.frequency
        return math.sqrt(f * (1 - f) / self.trials)

    @property
    def bound_stderr(self) -> float:
        """Binomial standard error at the guaranteed probability."""
        return math.sqrt(self.bound * (1 - self.bound) / self.trials)

    @property
    def passed(self) -> bool:
        return self.frequency >= self.bound - 3 * self.bound_stderr


def _sorted_desc(numbers) -> np.ndarray:
    w = np.sort(np.asarray(numbers, dtype=float))[::-1]
    if len(w) == 0 or w[-1] <= 0:
        raise PreconditionError("numbers must be positive and non-empty")
    return w


def rank_matching_min_sum(a, b) -> float:
    """Sum of ``min(a_t, b_t)`` over ranks shared by both (descending) lists."""
    return float(sum(min(x, y) for x, y in zip(a, b)))


def brute_force_matching_max(a, b) -> float:
    """Best total of pairwise minima over every matching (small sides only)."""
    a, b = list(a), list(b)
    if len(a) > len(b):
        a, b = b, a
    best = 0.0
    for perm in permutations(range(len(b)), len(a)):
        best = max(best, sum(min(a[i], b[j]) for i, j in enumerate(perm)))
    return best


def sum_precondition(w: np.ndarray) -> None:
    a = w.sum()
    if not w[0] < a / 36:
        raise PreconditionError(
            f"largest number {w[0]!r} is not below total/36 = {a / 36!r}")


def matching_precondition(w: np.ndarray, rho: float) -> None:
    total = w.sum()
    if not w[0] < total / rho:
        raise PreconditionError(
            f"largest number {w[0]!r} is not below total/rho = {total / rho!r}")


def _sum_success(w, masks):
    a = w.sum()
    b = masks.astype(float) @ w
    return (a / 3 < b) & (b < 2 * a / 3)


def _matching_success(w, masks, rho):
    threshold = w.sum() / 3 * (1 - 1 / rho)
    return _kernels.batch_rank_matching(w, masks) > threshold


def _mc(w, trials, rng, success, chunk=10_000):
    hits = 0
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        masks = rng.integers(0, 2, size=(m, len(w)), dtype=np.uint8)
        hits += int(success(w, masks).sum())
        done += m
    return hits


def all_splits(ell: int) -> np.ndarray:
    if ell > 22:
        raise ValueError("exhaustive enumeration limited to 22 numbers")
    codes = np.arange(1 << ell, dtype=np.int64)
    return ((codes[:, None] >> np.arange(ell)) & 1).astype(np.uint8)


def mc_concentration_sum(numbers, trials: int, rng: np.random.Generator,
                         check_precondition: bool = True) -> LemmaTrial:
    w = _sorted_desc(numbers)
    ok = w[0] < w.sum() / 36
    if check_precondition:
        sum_precondition(w)
    hits = _mc(w, trials, rng, _sum_success)
    return LemmaTrial(w, trials, hits, SUM_BOUND, bool(ok))


def exact_concentration_sum(numbers) -> float:
    w = _sorted_desc(numbers)
    return float(_sum_success(w, all_splits(len(w))).mean())


def mc_concentration_matching(numbers, rho: float, trials: int, rng: np.random.Generator,
                              check_precondition: bool = True) -> LemmaTrial:
    w = _sorted_desc(numbers)
    ok = w[0] < w.sum() / rho
    if check_precondition:
        matching_precondition(w, rho)
    hits = _mc(w, trials, rng, lambda w_, m: _matching_success(w_, m, rho))
    return LemmaTrial(w, trials, hits, MATCHING_BOUND, bool(ok))


def exact_concentration_matching(numbers, rho: float) -> float:
    w = _sorted_desc(numbers)
    return float(_matching_success(w, all_splits(len(w)), rho).mean())


def equal_numbers(ell: int, value: float = 1.0) -> np.ndarray:
    return np.full(ell, float(value))


def zipf_numbers(ell: int, exponent: float = 0.3) -> np.ndarray:
    """``1 / i**exponent`` for i = 1..ell (descending)."""
    return 1.0 / np.arange(1, ell + 1) ** exponent
