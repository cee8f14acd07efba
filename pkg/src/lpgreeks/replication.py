"""Static replication of the LP shortfall as a strip of vanilla options.

The shortfall payoff has a strictly negative second strike-derivative, so the
LP is synthetically short a continuum of puts below the entry price and calls
above it; the gain contract is long the same strip. Discretizing the strip on
a log-strike trapezoid grid gives both a payoff reconstruction and a pricer
that is independent of the closed forms up to quadrature and truncation error.

Strip summation uses fixed-order numpy reductions only, so results are
bit-reproducible; grids are immutable after construction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import DomainError, require_non_negative, require_positive
from .pricing import IgContract, MarketParams

_TEST_RATIOS = (0.1, 10.0 ** -0.5, 1.0, 10.0 ** 0.5, 10.0)
_N_START = 64
_N_CAP = 1 << 21


def strip_density(k_strike: float, s0: float) -> float:
    """Second strike-derivative of the normalized shortfall payoff:
    -1 / (4 * K^1.5 * sqrt(s0)). Negative for every strike."""
    require_positive("k_strike", k_strike)
    require_positive("s0", s0)
    return -1.0 / (4.0 * k_strike**1.5 * math.sqrt(s0))


@dataclass(frozen=True)
class StrikeGrid:
    """Discretized strike strip with density-weighted quadrature weights.

    Put strikes run from lower_cut up to the entry price and call strikes from
    the entry price up to upper_cut; each side is strictly ascending and the
    entry price carries a half trapezoid weight on both sides. weights already
    fold in |density| and the log-strike Jacobian, so a strip value is just
    sum(weights * option values).
    """

    entry_price: float
    put_strikes: np.ndarray
    put_weights: np.ndarray
    call_strikes: np.ndarray
    call_weights: np.ndarray
    lower_cut: float
    upper_cut: float
    scheme: str
    error_estimate: float

    def __post_init__(self) -> None:
        for strikes in (self.put_strikes, self.call_strikes):
            if np.any(strikes <= 0.0) or np.any(np.diff(strikes) <= 0.0):
                raise DomainError("strikes must be positive and strictly ascending")
        if np.any(self.put_weights <= 0.0) or np.any(self.call_weights <= 0.0):
            raise DomainError("weights must be positive")
        if not self.lower_cut < self.entry_price < self.upper_cut:
            raise DomainError("cut bounds must bracket the entry price")

    @property
    def n_strikes(self) -> int:
        return len(self.put_strikes) + len(self.call_strikes)


@dataclass(frozen=True)
class VanillaQuote:
    """One European option premium per unit notional of the underlying."""

    strike: float
    tau: float
    kind: str
    premium: float


def _side(s0: float, lo_u: float, hi_u: float, n_side: int) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid nodes and density-folded weights on one log-strike interval."""
    u = np.linspace(lo_u, hi_u, n_side + 1)
    strikes = s0 * np.exp(u)
    du = (hi_u - lo_u) / n_side
    coeff = np.full(n_side + 1, du)
    coeff[0] = coeff[-1] = 0.5 * du
    density_mag = 1.0 / (4.0 * strikes**1.5 * math.sqrt(s0))
    return strikes, coeff * strikes * density_mag


def _raw_grid(s0: float, half_width: float, n_side: int):
    put_k, put_w = _side(s0, -half_width, 0.0, n_side)
    call_k, call_w = _side(s0, 0.0, half_width, n_side)
    return put_k, put_w, call_k, call_w


def _reconstruct(put_k, put_w, call_k, call_w, s_terminal: float) -> float:
    put_leg = float(np.sum(np.maximum(put_k - s_terminal, 0.0) * put_w))
    call_leg = float(np.sum(np.maximum(s_terminal - call_k, 0.0) * call_w))
    return -(put_leg + call_leg)


def build_strike_grid(s0: float, sigma: float, tau: float, target_tol: float = 1e-5,
                      n_side: int | None = None) -> StrikeGrid:
    """Build the strip grid over [s0 * e^-m, s0 * e^+m], m = max(8*sigma*sqrt(tau), 5).

    Beyond those cuts both the option values and the density tail are
    negligible for the regimes this models. When n_side is not given, the
    per-side node count doubles until the halving difference of the
    reconstructed shortfall, maximized over five terminal test prices spanning
    [0.1*s0, 10*s0], falls below target_tol; that conservative difference is
    reported as error_estimate. Passing n_side pins the node count instead and
    still reports the halving difference.
    """
    require_positive("s0", s0)
    require_non_negative("sigma", sigma)
    require_non_negative("tau", tau)
    if not (math.isfinite(target_tol) and 0.0 < target_tol <= 1e-2):
        raise DomainError(f"target_tol must lie in (0, 1e-2], got {target_tol!r}")

    half_width = max(8.0 * sigma * math.sqrt(tau), 5.0)
    test_prices = [s0 * ratio for ratio in _TEST_RATIOS]

    def reconstruction_profile(n: int):
        parts = _raw_grid(s0, half_width, n)
        values = np.array([_reconstruct(*parts, p) for p in test_prices])
        return parts, values

    if n_side is not None:
        if n_side < 2:
            raise DomainError(f"n_side must be >= 2, got {n_side!r}")
        _, coarse = reconstruction_profile(max(n_side // 2, 1))
        parts, fine = reconstruction_profile(n_side)
        err = float(np.max(np.abs(fine - coarse)))
        chosen = n_side
    else:
        chosen = _N_START
        parts, coarse = reconstruction_profile(chosen)
        while True:
            next_parts, fine = reconstruction_profile(2 * chosen)
            err = float(np.max(np.abs(fine - coarse)))
            chosen, parts, coarse = 2 * chosen, next_parts, fine
            if err <= target_tol:
                break
            if chosen >= _N_CAP:
                raise ArithmeticError(
                    f"grid reached {chosen} nodes per side without meeting {target_tol!r}")

    put_k, put_w, call_k, call_w = parts
    return StrikeGrid(
        entry_price=s0,
        put_strikes=put_k,
        put_weights=put_w,
        call_strikes=call_k,
        call_weights=call_w,
        lower_cut=float(put_k[0]),
        upper_cut=float(call_k[-1]),
        scheme=f"trapezoid-log/{chosen}+{chosen}",
        error_estimate=err,
    )


def replicate_il_payoff(grid: StrikeGrid, s_terminal: float) -> float:
    """Strip reconstruction of the shortfall at a terminal price; the grid's
    error_estimate bounds the quadrature error inside the cut range."""
    require_positive("s_terminal", s_terminal)
    return _reconstruct(grid.put_strikes, grid.put_weights,
                        grid.call_strikes, grid.call_weights, s_terminal)


def _black_values(strikes, s_t: float, market: MarketParams, tau: float,
                  is_call: bool) -> np.ndarray:
    """Lognormal forward-model premiums, discounted at the rate differential.

    At tau = 0 or sigma = 0 this degenerates to discounted intrinsic value on
    the forward.
    """
    strikes = np.asarray(strikes, dtype=float)
    forward = s_t * math.exp(market.r_f * tau)
    disc = math.exp(-market.r_f * tau)
    vol = market.sigma * math.sqrt(tau)
    if vol == 0.0:
        intrinsic = np.maximum(forward - strikes, 0.0) if is_call \
            else np.maximum(strikes - forward, 0.0)
        return disc * intrinsic
    with np.errstate(over="ignore"):
        # d saturates to +-inf for vanishing vol; ndtr then yields intrinsic
        d1 = np.log(forward / strikes) / vol + 0.5 * vol
        d2 = d1 - vol
    if is_call:
        return disc * (forward * ndtr(d1) - strikes * ndtr(d2))
    return disc * (strikes * ndtr(-d2) - forward * ndtr(-d1))


def vanilla_price(strike: float, s_t: float, market: MarketParams, tau: float,
                  kind: str) -> VanillaQuote:
    """Single-strike European premium under the same dynamics as the closed forms."""
    require_positive("strike", strike)
    require_positive("s_t", s_t)
    require_non_negative("tau", tau)
    if kind not in ("put", "call"):
        raise DomainError(f"kind must be 'put' or 'call', got {kind!r}")
    premium = float(_black_values(strike, s_t, market, tau, kind == "call"))
    return VanillaQuote(strike=float(strike), tau=float(tau), kind=kind, premium=premium)


def price_ig_via_strip(contract: IgContract, s_t: float, market: MarketParams,
                       grid: StrikeGrid) -> float:
    """Price the gain contract as the cost of going long the whole strip.

    Independent of the closed-form premium up to the grid's quadrature error
    and the truncation tail; see strip_price_error_bound for the combined
    estimate. The grid must be centered on the contract strike.
    """
    require_positive("s_t", s_t)
    if not math.isclose(grid.entry_price, contract.strike_k, rel_tol=1e-9):
        raise DomainError("grid is not centered on the contract strike")
    tau = contract.tau
    puts = _black_values(grid.put_strikes, s_t, market, tau, is_call=False)
    calls = _black_values(grid.call_strikes, s_t, market, tau, is_call=True)
    total = float(np.sum(puts * grid.put_weights) + np.sum(calls * grid.call_weights))
    return contract.notional_v0 * total


def _tail_remainder(grid: StrikeGrid, s_t: float, market: MarketParams, tau: float) -> float:
    """Analytic bound on the strip value lost beyond the cut strikes.

    Put side: premiums below lower_cut are bounded by disc * K * N(-d2(cut)),
    and the density integral of K below the cut is sqrt(cut)/(2*sqrt(s0)).
    Call side mirrors with disc * F * N(d1(cut)) and density mass
    1/(2*sqrt(cut*s0)).
    """
    forward = s_t * math.exp(market.r_f * tau)
    disc = math.exp(-market.r_f * tau)
    vol = market.sigma * math.sqrt(tau)
    s0 = grid.entry_price
    if vol == 0.0:
        p_put = 1.0 if forward <= grid.lower_cut else 0.0
        p_call = 1.0 if forward >= grid.upper_cut else 0.0
    else:
        p_put = float(ndtr(-(math.log(forward / grid.lower_cut) / vol - 0.5 * vol)))
        p_call = float(ndtr(math.log(forward / grid.upper_cut) / vol + 0.5 * vol))
    put_tail = disc * p_put * math.sqrt(grid.lower_cut) / (2.0 * math.sqrt(s0))
    call_tail = disc * forward * p_call / (2.0 * math.sqrt(grid.upper_cut * s0))
    return put_tail + call_tail


def strip_price_error_bound(contract: IgContract, s_t: float, market: MarketParams,
                            grid: StrikeGrid) -> float:
    """Combined error estimate for price_ig_via_strip, in token-y units."""
    tail = _tail_remainder(grid, s_t, market, contract.tau)
    return contract.notional_v0 * (grid.error_estimate + tail)


def write_grid_csv(grid: StrikeGrid, path) -> None:
    """Audit dump: one row per strike with its folded weight and option kind."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["strike", "weight", "kind"])
        for strike, weight in zip(grid.put_strikes, grid.put_weights):
            writer.writerow([format(strike, ".17g"), format(weight, ".17g"), "put"])
        for strike, weight in zip(grid.call_strikes, grid.call_weights):
            writer.writerow([format(strike, ".17g"), format(weight, ".17g"), "call"])
