import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from allowance_auctions.generators import lemma2_instance, random_instance
from allowance_auctions.mechanisms import Mechanism, get_mechanism
from allowance_auctions.model import AuctionInstance
from allowance_auctions.rng import make_rng, trial_rng
from allowance_auctions.verification import (
    DeviationError,
    PreconditionError,
    check_allocation_monotonicity,
    check_unit_price_monotonicity,
    deviation_grid,
    deviation_search,
    empirical_ratio,
    exact_concentration_matching,
    exact_concentration_sum,
    mc_concentration_matching,
    mc_concentration_sum,
    rank_matching_min_sum,
    ratio_bound,
    run_plain_second_price,
)
from allowance_auctions.verification.baselines import (
    run_constant_mock,
    run_demoting_mock,
    run_first_price_positions,
)
from allowance_auctions.verification.bench import COMBINED_RATIO
from allowance_auctions.verification.deviation import mean_gain_over_seeds
from allowance_auctions.verification.lemmas import (
    brute_force_matching_max,
    equal_numbers,
    zipf_numbers,
)

# baselines -------------------------------------------------------------------------


@pytest.mark.parametrize("bids, pay", [([3, 2], 2.0), ([2, 2], 2.0), ([5], 0.0)])
def test_plain_second_price(bids, pay):
    out = run_plain_second_price(bids, 0.5)
    assert out.assignment[0] == 0
    assert out.payments[0] == pay * 0.5


# deviation search ----------------------------------------------------------------------

def test_grid_contains_value_and_breakpoints():
    inst = AuctionInstance.create([5.0, 3.0], [1.0])
    g = deviation_grid(inst, 1, epsilon=1.0).bids
    assert 3.0 in g and 5.0 in g
    assert 4.0 in g and 4.0 * (1 - 1e-6) in g and 4.0 * (1 + 1e-6) in g
    assert (g > 0).all() and (np.diff(g) > 0).all()


def test_second_price_fails_on_lemma2_scenario():
    mech = get_mechanism("second_price_baseline")
    rep = deviation_search(mech, lemma2_instance(), 1)
    assert not rep.certified
    assert rep.truthful_utility == 0.0
    assert rep.best_bid > 1.0
    assert rep.best_utility == pytest.approx(0.5)


@pytest.mark.parametrize("eps", [0.1, 1.0])
def test_single_slot_passes_lemma2_scenario(eps):
    mech = get_mechanism("single_slot", epsilon=eps)
    for b in range(2):
        assert deviation_search(mech, lemma2_instance(), b).certified


def test_deviation_error_carries_bid():
    def boom(inst, rng):
        if inst.bids[0] > 2:
            raise RuntimeError("nope")
        return run_first_price_positions(inst)
    mech = Mechanism("boom", False, boom)
    with pytest.raises(DeviationError) as exc:
        deviation_search(mech, AuctionInstance.create([1.0, 1.5], [1.0]), 0)
    assert exc.value.bid > 2


def test_deviation_search_is_reproducible_with_seed():
    inst = random_instance(trial_rng(3, 3))
    mech = get_mechanism("combined", epsilon=0.5)
    a = [deviation_search(mech, inst, b, seed=77) for b in range(inst.n)]
    b = [deviation_search(mech, inst, b, seed=77) for b in range(inst.n)]
    assert a == b


def test_mean_gain_over_seeds_is_not_positive_for_large_market():
    inst = random_instance(trial_rng(5, 0))
    mech = get_mechanism("large_market")
    g = mean_gain_over_seeds(mech, inst, 0, inst.values[0] * 2, range(50))
    assert g <= 1e-9


# monotonicity ---------------------------------------------------------------------------

def _mock(name, fn):
    return Mechanism(name, False, lambda inst, rng: fn(inst))


def test_allocation_monotonicity_controls():
    inst = AuctionInstance.create([1.0, 2.0, 3.0], [1.0, 0.5])
    demote = _mock("demote", lambda i: run_demoting_mock(i, 2.5))
    v = check_allocation_monotonicity(demote, inst, 0)
    assert not v.passed and v.witness[0] < v.witness[1]
    assert check_allocation_monotonicity(_mock("const", run_constant_mock), inst, 0).passed
    assert check_allocation_monotonicity(get_mechanism("public", epsilon=0.5), inst, 0).passed


def test_unit_price_controls():
    # bidder 1 ties bidder 0 at bid 1; allowance 1/2 puts gamma/v between the two CTRs
    inst = AuctionInstance.create([1.0, 1.0, 0.5], [1.0, 0.4], [0.0, 0.5, 0.0])
    sweep = [0.6, 0.9, 1.0, 1.0 + 1e-6, 1.2, 2.0]
    vcg = check_unit_price_monotonicity(get_mechanism("vcg_mock"), inst, 1, sweep)
    # raising past the tie buys CTR 1 at a VCG price of 0.8 < v
    assert not vcg.passed and vcg.witness[1] == 1.0 + 1e-6 and vcg.witness[0] > 0.8
    first = check_unit_price_monotonicity(_mock("first", run_first_price_positions), inst, 1, sweep)
    assert first.passed and first.pairs_checked > 0
    assert check_unit_price_monotonicity(get_mechanism("public", epsilon=0.1), inst, 1).passed


def test_vcg_mock_is_manipulable_on_the_same_instance():
    inst = AuctionInstance.create([1.0, 1.0, 0.5], [1.0, 0.4], [0.0, 0.5, 0.0])
    rep = deviation_search(get_mechanism("vcg_mock"), inst, 1)
    assert rep.truthful_utility == pytest.approx(0.4)
    assert rep.best_utility == pytest.approx(0.7)


# lemmas ----------------------------------------------------------------------------------

def test_rank_matching_examples():
    assert rank_matching_min_sum([3, 1], [2, 2]) == 3
    assert rank_matching_min_sum([3, 1], []) == 0


@given(st.lists(st.floats(0.1, 10), min_size=0, max_size=6),
       st.lists(st.floats(0.1, 10), min_size=0, max_size=6))
def test_rank_matching_is_optimal(a, b):
    a, b = sorted(a, reverse=True), sorted(b, reverse=True)
    assert rank_matching_min_sum(a, b) == pytest.approx(brute_force_matching_max(a, b), rel=1e-12)


def _exact_sum_oracle(w):
    a = sum(w)
    hits = sum(1 for bits in itertools.product((0, 1), repeat=len(w))
               if a / 3 < sum(x for x, m in zip(w, bits) if m) < 2 * a / 3)
    return hits / 2 ** len(w)


def _exact_matching_oracle(w, rho):
    thr = sum(w) / 3 * (1 - 1 / rho)
    hits = 0
    for bits in itertools.product((0, 1), repeat=len(w)):
        a = sorted((x for x, m in zip(w, bits) if m), reverse=True)
        b = sorted((x for x, m in zip(w, bits) if not m), reverse=True)
        hits += sum(min(x, y) for x, y in zip(a, b)) > thr
    return hits / 2 ** len(w)


@pytest.mark.parametrize("w", [equal_numbers(9), zipf_numbers(10), [5, 4, 3, 1, 1, 0.5]])
def test_exact_enumeration_matches_oracle(w):
    w = sorted(w, reverse=True)
    assert exact_concentration_sum(w) == pytest.approx(_exact_sum_oracle(w), abs=1e-15)
    assert exact_concentration_matching(w, 4.0) == pytest.approx(_exact_matching_oracle(w, 4.0),
                                                                 abs=1e-15)


def test_sum_precondition():
    with pytest.raises(PreconditionError):
        mc_concentration_sum(equal_numbers(10), 100, make_rng(0))
    res = mc_concentration_sum(equal_numbers(10), 100, make_rng(0), check_precondition=False)
    assert not res.precondition_ok


def test_matching_precondition():
    with pytest.raises(PreconditionError):
        mc_concentration_matching([1.0, 1.0], 3.0, 100, make_rng(0))


def test_non_positive_numbers_rejected():
    with pytest.raises(PreconditionError):
        mc_concentration_sum([1.0, 0.0], 10, make_rng(0), check_precondition=False)


def test_sum_lemma_monte_carlo():
    res = mc_concentration_sum(equal_numbers(200), 20_000, make_rng(1))
    assert res.precondition_ok and res.passed


def test_matching_lemma_monte_carlo():
    res = mc_concentration_matching(equal_numbers(200), 100.0, 20_000, make_rng(2))
    assert res.precondition_ok and res.passed


def test_lemma_trial_statistics():
    res = mc_concentration_sum(equal_numbers(40), 1000, make_rng(3))
    assert res.frequency == res.successes / 1000
    assert res.stderr == pytest.approx(math.sqrt(res.frequency * (1 - res.frequency) / 1000))
    assert res.bound_stderr == pytest.approx(math.sqrt(0.75 * 0.25 / 1000))


# benches -------------------------------------------------------------------------------

def test_ratio_bounds():
    assert COMBINED_RATIO == pytest.approx(62.856, abs=5e-4)
    assert ratio_bound("combined", 1.0, 1, epsilon=0.1) == pytest.approx(1 / (62.8564 * 1.1), rel=1e-5)
    assert ratio_bound("public", 1.0, 1, epsilon=0.5) == pytest.approx(1 / 1.5)
    assert ratio_bound("single_slot", 2.0, 1, epsilon=1.0) == 0.25
    assert ratio_bound("large_market", 36.0, 10) == pytest.approx((1 - 1 / 36) / 48)


def test_empirical_ratio_public_min_exact():
    stats = empirical_ratio(get_mechanism("public", epsilon=0.5), random_instance, 200, 9)
    assert stats.min_ratio >= 1 / 1.5 - 1e-12
    assert stats.passed and stats.trials == 200 and stats.skipped == 0


def test_empirical_ratio_skips_zero_opt():
    inst = AuctionInstance.create([1.0, 2.0], [0.0])
    stats = empirical_ratio(get_mechanism("public", epsilon=0.5), inst, 5, 0)
    assert stats.skipped == 5 and math.isnan(stats.mean_ratio)
