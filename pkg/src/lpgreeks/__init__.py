"""Pricing, greeks and hedge analytics for constant-product AMM liquidity
positions and the Impermanent Gain contract."""

from .errors import ConfigError, DomainError, HedgeMismatchError, StepCollapseError
from .greeks import (
    GreeksReport,
    GreeksTable,
    HedgedGreeks,
    greeks_ig,
    greeks_locked_lp,
    greeks_table,
    greeks_unlocked_lp,
    hedge_report,
)
from .mc import (
    McConfig,
    McEstimate,
    McScenario,
    fd_greek,
    mc_price,
    sample_terminal,
)
from .payoff import ig_return_from_strike, il_curve, impermanent_gain, impermanent_loss
from .pool import (
    FeeParams,
    PoolPosition,
    Reserves,
    hodl_value,
    lp_value,
    pool_from_deposit,
    reserves_at_price,
)
from .pricing import (
    DecayFactors,
    IgContract,
    LpState,
    MarketParams,
    decay_factors,
    expected_sqrt_price,
    forward_price,
    price_ig,
    price_locked_lp,
    price_unlocked_lp,
)
from .replication import (
    StrikeGrid,
    VanillaQuote,
    build_strike_grid,
    price_ig_via_strip,
    replicate_il_payoff,
    strip_density,
    strip_price_error_bound,
    vanilla_price,
    write_grid_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DecayFactors",
    "DomainError",
    "FeeParams",
    "GreeksReport",
    "GreeksTable",
    "HedgeMismatchError",
    "HedgedGreeks",
    "IgContract",
    "LpState",
    "MarketParams",
    "McConfig",
    "McEstimate",
    "McScenario",
    "PoolPosition",
    "Reserves",
    "StepCollapseError",
    "StrikeGrid",
    "VanillaQuote",
    "build_strike_grid",
    "decay_factors",
    "expected_sqrt_price",
    "fd_greek",
    "forward_price",
    "greeks_ig",
    "greeks_locked_lp",
    "greeks_table",
    "greeks_unlocked_lp",
    "hedge_report",
    "hodl_value",
    "ig_return_from_strike",
    "il_curve",
    "impermanent_gain",
    "impermanent_loss",
    "lp_value",
    "mc_price",
    "pool_from_deposit",
    "price_ig",
    "price_ig_via_strip",
    "price_locked_lp",
    "price_unlocked_lp",
    "replicate_il_payoff",
    "reserves_at_price",
    "sample_terminal",
    "strip_density",
    "strip_price_error_bound",
    "vanilla_price",
    "write_grid_csv",
]
