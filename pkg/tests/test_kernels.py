import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from allowance_auctions import _kernels
from allowance_auctions.model import INF, allowance_utility
from allowance_auctions.verification.lemmas import all_splits


def test_backend_selected():
    assert _kernels.BACKEND in ("compiled", "python")
    assert "python" in _kernels.backends()


def _oracle_best(v, g, prices, ctrs, avail):
    best, best_u = -1, -INF
    for j, (p, a) in enumerate(zip(prices, ctrs)):
        if avail[j]:
            u = allowance_utility(v, g, a, p * a)
            if u > best_u:
                best, best_u = j, u
    return best if best_u >= 0 else -1


@given(st.floats(0.1, 10), st.one_of(st.floats(0, 10), st.just(INF)),
       st.lists(st.tuples(st.floats(0, 12), st.floats(0, 1), st.booleans()), min_size=1, max_size=8))
def test_best_slot_matches_oracle(v, g, raw):
    prices = [p for p, _, _ in raw]
    ctrs = sorted((a for _, a, _ in raw), reverse=True)
    avail = [x for _, _, x in raw]
    want = _oracle_best(v, g, prices, ctrs, avail)
    for mod in _kernels.backends().values():
        assert mod.best_slot(v, g, np.array(prices), np.array(ctrs), np.array(avail)) == want


def test_sequential_purchase_against_loop(kernel):
    rng = np.random.default_rng(0)
    for _ in range(50):
        n, k = int(rng.integers(1, 40)), int(rng.integers(1, 8))
        values = rng.uniform(0.5, 3, n)
        allowances = np.where(rng.random(n) < 0.3, INF, rng.uniform(0, 2, n))
        ctrs = np.sort(rng.uniform(0, 1, k))[::-1]
        prices = rng.uniform(0, 3, k)
        order = np.sort(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False))
        a, p = kernel.sequential_purchase(order, values, allowances, prices, ctrs)
        avail = [True] * k
        for i in range(n):
            if i not in set(order.tolist()):
                assert a[i] == -1 and p[i] == 0
        for i in order:
            j = _oracle_best(values[i], allowances[i], prices, ctrs, avail)
            assert a[i] == j
            if j >= 0:
                avail[j] = False
                assert p[i] == prices[j] * ctrs[j]


def _rank_min_sum(w, mask):
    a = [x for x, m in zip(w, mask) if m]
    b = [x for x, m in zip(w, mask) if not m]
    return sum(min(x, y) for x, y in zip(a, b))


def test_batch_rank_matching_against_lists(kernel):
    rng = np.random.default_rng(1)
    for ell in (1, 2, 7, 30):
        w = np.sort(rng.uniform(0.1, 1, ell))[::-1]
        masks = rng.integers(0, 2, size=(300, ell), dtype=np.uint8)
        got = kernel.batch_rank_matching(w, masks)
        want = [_rank_min_sum(w, m) for m in masks]
        assert np.allclose(got, want, rtol=1e-12, atol=0)


def test_batch_rank_matching_exhaustive_small(kernel):
    w = np.array([5.0, 3.0, 2.0, 2.0, 1.0])
    masks = all_splits(5)
    got = kernel.batch_rank_matching(w, masks)
    assert np.allclose(got, [_rank_min_sum(w, m) for m in masks])


def test_backends_agree():
    mods = _kernels.backends()
    if len(mods) < 2:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(2)
    w = np.sort(rng.uniform(0.1, 1, 120))[::-1]
    masks = rng.integers(0, 2, size=(2000, 120), dtype=np.uint8)
    np.testing.assert_allclose(mods["python"].batch_rank_matching(w, masks),
                               mods["compiled"].batch_rank_matching(w, masks), rtol=1e-12)
