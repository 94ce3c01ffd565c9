"""Truthful position auctions for bidders with allowance utilities."""
from ._kernels import BACKEND
from .mechanisms import MECHANISMS, Mechanism, get_mechanism
from .model import (
    DUMMY,
    INF,
    TOL,
    AuctionInstance,
    Bidder,
    Outcome,
    RoundedBid,
    ValidationError,
    WelfareReport,
    allowance_utility,
    optimal_welfare,
    round_bid,
    social_welfare,
    validate_instance,
)
from .private_mech import (
    CombinedParams,
    PartitionState,
    run_combined,
    run_large_market,
    run_single_slot,
    select_best_slot,
)
from .public_mech import (
    PublicParams,
    allocation_curve,
    public_payment,
    run_public_auction,
    threshold_exponent,
)
from .uniform_price import UniformPriceParams, optimal_beta, run_uniform_price, threshold_index

__version__ = "0.1.0"
