"""Closed-form risk-neutral pricing of LP positions and the Impermanent Gain
product under lognormal price dynamics.

The price of token x in token y follows a geometric Brownian motion whose
risk-neutral drift is the lending-rate differential r_f = r_x - r_y; every
price here depends on the two rates only through that difference. Times are
year fractions throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, require_finite, require_non_negative, require_positive
from .pool import FeeParams, PoolPosition, lp_value


@dataclass(frozen=True)
class MarketParams:
    """Model inputs: lending rates of each token, lognormal vol, pool fee APY."""

    r_x: float
    r_y: float
    sigma: float
    phi: float

    def __post_init__(self) -> None:
        require_finite("r_x", self.r_x)
        require_finite("r_y", self.r_y)
        require_non_negative("sigma", self.sigma)
        require_non_negative("phi", self.phi)

    @property
    def r_f(self) -> float:
        """Rate differential r_x - r_y. May be negative."""
        return self.r_x - self.r_y

    @classmethod
    def from_rate_differential(cls, r_f: float, sigma: float, phi: float) -> "MarketParams":
        """Build from the differential alone, booking it entirely on the x leg."""
        return cls(r_x=r_f, r_y=0.0, sigma=sigma, phi=phi)


@dataclass(frozen=True)
class LpState:
    """A priced LP scenario: position, market, current spot and clock."""

    position: PoolPosition
    market: MarketParams
    s_t: float
    t: float
    maturity_T: float
    locked: bool

    def __post_init__(self) -> None:
        require_positive("s_t", self.s_t)
        require_non_negative("t", self.t)
        require_finite("maturity_T", self.maturity_T)
        if self.maturity_T < self.t:
            raise DomainError(
                f"maturity_T must be >= t, got T={self.maturity_T!r} < t={self.t!r}")

    @property
    def tau(self) -> float:
        """Remaining time to unlock."""
        return self.maturity_T - self.t


@dataclass(frozen=True)
class IgContract:
    """Terms of one Impermanent Gain contract.

    The strike is the reference price from which the payoff return
    s_T/strike_k - 1 is measured; notional_v0 scales the unit payoff.
    """

    notional_v0: float
    strike_k: float
    maturity_T: float
    t: float = 0.0

    def __post_init__(self) -> None:
        require_positive("notional_v0", self.notional_v0)
        require_positive("strike_k", self.strike_k)
        require_non_negative("t", self.t)
        require_finite("maturity_T", self.maturity_T)
        if self.maturity_T < self.t:
            raise DomainError(
                f"maturity_T must be >= t, got T={self.maturity_T!r} < t={self.t!r}")

    @property
    def tau(self) -> float:
        return self.maturity_T - self.t


@dataclass(frozen=True)
class DecayFactors:
    """Exponential factors shared by every closed form.

    beta = exp(-(r_f/2 + sigma^2/8) * tau) decays the sqrt-payoff leg and
    gamma_disc = exp(-r_f * tau) is the plain discount factor. Both are 1 at
    tau = 0; beta may exceed 1 when r_f/2 + sigma^2/8 < 0.
    """

    beta: float
    gamma_disc: float


def decay_factors(market: MarketParams, tau: float) -> DecayFactors:
    """Evaluate both decay factors over a remaining time tau."""
    require_non_negative("tau", tau)
    r_f = market.r_f
    beta = math.exp(-(0.5 * r_f + market.sigma * market.sigma / 8.0) * tau)
    gamma_disc = math.exp(-r_f * tau)
    return DecayFactors(beta=beta, gamma_disc=gamma_disc)


def expected_sqrt_price(s_t: float, market: MarketParams, tau: float) -> float:
    """Risk-neutral mean of sqrt(S_T): sqrt(s_t) * exp((r_f/2 - sigma^2/8) * tau)."""
    require_positive("s_t", s_t)
    require_non_negative("tau", tau)
    exponent = (0.5 * market.r_f - market.sigma * market.sigma / 8.0) * tau
    return math.sqrt(s_t) * math.exp(exponent)


def forward_price(s_t: float, market: MarketParams, tau: float) -> float:
    """Risk-neutral mean of S_T: s_t * exp(r_f * tau)."""
    require_positive("s_t", s_t)
    require_non_negative("tau", tau)
    return s_t * math.exp(market.r_f * tau)


def price_unlocked_lp(state: LpState) -> float:
    """Price of a redeemable position: the underlying value plus accrued fees,
    V0 * (sqrt(s_t/s0) + phi*t)."""
    if state.locked:
        raise DomainError("state is locked; use price_locked_lp")
    return lp_value(state.position, state.s_t, state.t, FeeParams(state.market.phi))


def price_locked_lp(state: LpState) -> float:
    """Fair value of a position locked until maturity.

    V0 * (sqrt(s_t/s0) * beta + phi * T * gamma_disc), with the factors taken
    over the remaining time tau. The fee leg credits the whole-horizon accrual
    phi*T as a lump sum at maturity and discounts it.
    """
    if not state.locked:
        raise DomainError("state is unlocked; use price_unlocked_lp")
    d = decay_factors(state.market, state.tau)
    pos = state.position
    return pos.notional_v0 * (
        math.sqrt(state.s_t / pos.entry_price_s0) * d.beta
        + state.market.phi * state.maturity_T * d.gamma_disc
    )


def price_ig(contract: IgContract, s_t: float, market: MarketParams) -> float:
    """Premium of the Impermanent Gain contract.

    V0 * (gamma_disc/2 + s_t/(2K) - sqrt(s_t/K) * beta). Non-negative for any
    tau >= 0 because sqrt(gamma_disc) >= beta; at tau = 0 it collapses to the
    terminal payoff V0 * IG(s_T/K - 1).
    """
    require_positive("s_t", s_t)
    d = decay_factors(market, contract.tau)
    k = contract.strike_k
    return contract.notional_v0 * (
        0.5 * d.gamma_disc + s_t / (2.0 * k) - math.sqrt(s_t / k) * d.beta
    )
