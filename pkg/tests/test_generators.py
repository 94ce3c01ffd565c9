import numpy as np
import pytest

from allowance_auctions import instance_io
from allowance_auctions.generators import (
    GenerationError,
    flat_market_instance,
    generate_large_market_instance,
    parse_generator_spec,
    random_instance,
    tie_instance,
)
from allowance_auctions.model import INF, optimal_welfare, round_bid
from allowance_auctions.rng import instance_rng, make_rng, trial_rng


def test_large_market_instance_meets_target():
    inst = generate_large_market_instance(2000, 10, 8.0, make_rng(0))
    rep = optimal_welfare(inst)
    assert rep.rho_observed >= 8.0
    assert ((inst.values >= 1) & (inst.values <= 2)).all()
    assert (inst.bids == inst.values).all()
    kinds = {0.0 if g == 0 else (INF if g == INF else 1.0) for g in inst.allowances}
    assert kinds == {0.0, 1.0, INF}


def test_large_market_target_above_k_fails_fast():
    with pytest.raises(GenerationError, match="unreachable"):
        generate_large_market_instance(4000, 10, 36.0, make_rng(0))


def test_large_market_budget_exhausted():
    with pytest.raises(GenerationError, match="after 3 draws"):
        generate_large_market_instance(20, 10, 9.99, make_rng(0), ctr_low=0.0, max_attempts=3)


def test_large_market_deterministic():
    a = generate_large_market_instance(300, 5, 3.0, make_rng(11))
    b = generate_large_market_instance(300, 5, 3.0, make_rng(11))
    assert instance_io.dumps(a) == instance_io.dumps(b)


def test_flat_market_reaches_rho_equal_k_exactly():
    inst = flat_market_instance(500, 36, 40, make_rng(2))
    assert optimal_welfare(inst).rho_observed == 36.0


def test_tie_instance_has_tied_top_exponent():
    for s in range(50):
        inst = tie_instance(trial_rng(1, s), 0.5)
        exps = [round_bid(b, 0.5).exponent for b in inst.bids]
        top = max(exps)
        assert exps.count(top) >= 2


def test_random_instance_valid_and_bounded():
    for s in range(100):
        inst = random_instance(trial_rng(2, s))
        assert inst.n <= 8 and 1 <= inst.k <= 4 and inst.n >= inst.k


def test_spec_parser():
    make = parse_generator_spec("random:n_max=5,k_max=2")
    inst = make(instance_rng(0, 0))
    assert inst.n <= 5 and inst.k <= 2
    assert parse_generator_spec("lemma2")(None).n == 2
    with pytest.raises(GenerationError):
        parse_generator_spec("nope")
    with pytest.raises(GenerationError):
        parse_generator_spec("random:n_max")
    with pytest.raises(GenerationError):
        parse_generator_spec("random:bogus=1")(make_rng(0))


def test_generators_replay_under_seed():
    for spec in ("random", "single", "tie:eps=0.1", "flat:n=50,k=5,top=5", "dominant", "mixed"):
        make = parse_generator_spec(spec)
        a, b = make(instance_rng(4, 1)), make(instance_rng(4, 1))
        assert np.array_equal(a.values, b.values) and np.array_equal(a.allowances, b.allowances)
