"""Pure-Python/numpy versions of the hot loops. Same contracts as ``_core``."""
from __future__ import annotations

import numpy as np

TOL = 1e-9


def best_slot(value, allowance, unit_prices, ctrs, available):
    """Most profitable available slot at the posted unit prices, or -1.

    Ties go to the lowest slot index; buying at utility exactly 0 beats the
    dummy slot.
    """
    best, best_u = -1, -np.inf
    for j in range(len(ctrs)):
        if not available[j]:
            continue
        a = ctrs[j]
        pay = unit_prices[j] * a
        obtained = value * a
        if pay > obtained + TOL * max(1.0, abs(obtained)):
            continue
        u = obtained - max(0.0, pay - allowance)
        if u > best_u:
            best, best_u = j, u
    if best >= 0 and best_u >= 0.0:
        return best
    return -1


def sequential_purchase(order, values, allowances, unit_prices, ctrs):
    n, k = len(values), len(ctrs)
    assignment = np.full(n, -1, dtype=np.int64)
    payments = np.zeros(n)
    available = [True] * k
    remaining = k
    unit_prices = [float(p) for p in unit_prices]
    ctrs = [float(a) for a in ctrs]
    for i in order:
        if remaining == 0:
            break
        j = best_slot(float(values[i]), float(allowances[i]), unit_prices, ctrs, available)
        if j >= 0:
            available[j] = False
            remaining -= 1
            assignment[i] = j
            payments[i] = unit_prices[j] * ctrs[j]
    return assignment, payments


def batch_rank_matching(w, masks, chunk=4096):
    """Per-row rank-matching value for the split ``masks[r]`` of ``w``.

    ``w`` is sorted descending, so each side listed in index order is already
    sorted; the t-th element of one side is paired with the t-th of the other.
    """
    w = np.asarray(w, dtype=float)
    masks = np.asarray(masks, dtype=bool)
    rows, ell = masks.shape
    out = np.empty(rows)
    for s in range(0, rows, chunk):
        m = masks[s:s + chunk]
        r = m.shape[0]
        rank_a = np.cumsum(m, axis=1) - 1
        rank_b = np.cumsum(~m, axis=1) - 1
        a = np.zeros((r, ell))
        b = np.zeros((r, ell))
        rr, cc = np.nonzero(m)
        a[rr, rank_a[rr, cc]] = w[cc]
        rr, cc = np.nonzero(~m)
        b[rr, rank_b[rr, cc]] = w[cc]
        out[s:s + r] = np.minimum(a, b).sum(axis=1)
    return out
