"""Closed-form greeks for each strategy, hedge aggregation, and the side-by-side
comparison table.

Theta is the clock sensitivity dP/dt with the maturity held fixed, so it is the
negative of the sensitivity to the remaining time. Vega and rho are reported
per unit of sigma and of the rate differential; the display scalings (per 1%
vol, per day, per 1% rate) are applied at presentation time only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator

from .errors import DomainError, HedgeMismatchError, require_positive
from .pricing import IgContract, LpState, MarketParams, decay_factors

_CANCEL_TOL = 1e-10


@dataclass(frozen=True)
class GreeksReport:
    """Price sensitivities of one strategy, in token-y units.

    delta_pct and gamma_pct are the P&L responses to a 1% spot move:
    delta * s_t/100 and gamma * (s_t/100)^2.
    """

    delta: float
    delta_pct: float
    gamma: float
    gamma_pct: float
    vega: float
    theta: float
    rho: float


def _report(s_t: float, delta: float, gamma: float, vega: float,
            theta: float, rho: float) -> GreeksReport:
    move = s_t / 100.0
    return GreeksReport(
        delta=delta,
        delta_pct=delta * move,
        gamma=gamma,
        gamma_pct=gamma * move * move,
        vega=vega,
        theta=theta,
        rho=rho,
    )


def greeks_unlocked_lp(state: LpState) -> GreeksReport:
    """Greeks of a redeemable position.

    delta = V0/(2*sqrt(s0*s_t)) > 0, gamma = -V0/(4*sqrt(s0)*s_t^1.5) < 0,
    theta = phi*V0; no vol or rate exposure.
    """
    if state.locked:
        raise DomainError("state is locked; use greeks_locked_lp")
    v0 = state.position.notional_v0
    s0 = state.position.entry_price_s0
    s = state.s_t
    return _report(
        s,
        delta=v0 / (2.0 * math.sqrt(s0 * s)),
        gamma=-v0 / (4.0 * math.sqrt(s0) * s**1.5),
        vega=0.0,
        theta=state.market.phi * v0,
        rho=0.0,
    )


def greeks_locked_lp(state: LpState) -> GreeksReport:
    """Greeks of a position locked until maturity.

    The spot greeks are the unlocked ones scaled by beta; locking adds a
    strictly negative vega -V0*(sigma*tau/4)*sqrt(s_t/s0)*beta for
    sigma*tau > 0, a theta pulling toward the terminal value, and a rho on
    both the sqrt leg and the discounted fee leg.
    """
    if not state.locked:
        raise DomainError("state is unlocked; use greeks_unlocked_lp")
    v0 = state.position.notional_v0
    s0 = state.position.entry_price_s0
    s = state.s_t
    m = state.market
    tau = state.tau
    d = decay_factors(m, tau)
    carry = 0.5 * m.r_f + m.sigma * m.sigma / 8.0
    moneyness = math.sqrt(s / s0)
    fee_leg = m.phi * state.maturity_T * d.gamma_disc
    return _report(
        s,
        delta=v0 * d.beta / (2.0 * math.sqrt(s0 * s)),
        gamma=-v0 * d.beta / (4.0 * math.sqrt(s0) * s**1.5),
        vega=-v0 * (m.sigma * tau / 4.0) * moneyness * d.beta,
        theta=v0 * (moneyness * carry * d.beta + m.r_f * fee_leg),
        rho=-v0 * ((tau / 2.0) * moneyness * d.beta + tau * fee_leg),
    )


def greeks_ig(contract: IgContract, s_t: float, market: MarketParams) -> GreeksReport:
    """Greeks of the Impermanent Gain contract.

    gamma = V0*beta/(4*sqrt(K)*s_t^1.5) > 0 and vega >= 0 are the exact
    opposites of the locked-position values whenever the strike sits at the
    pool entry price. delta at the strike is V0*(1-beta)/(2K) > 0 for beta < 1.
    """
    require_positive("s_t", s_t)
    v0 = contract.notional_v0
    k = contract.strike_k
    tau = contract.tau
    d = decay_factors(market, tau)
    carry = 0.5 * market.r_f + market.sigma * market.sigma / 8.0
    moneyness = math.sqrt(s_t / k)
    return _report(
        s_t,
        delta=v0 * (1.0 / (2.0 * k) - d.beta / (2.0 * math.sqrt(k * s_t))),
        gamma=v0 * d.beta / (4.0 * math.sqrt(k) * s_t**1.5),
        vega=v0 * (market.sigma * tau / 4.0) * moneyness * d.beta,
        theta=v0 * (0.5 * market.r_f * d.gamma_disc - moneyness * carry * d.beta),
        rho=(v0 * tau / 2.0) * (moneyness * d.beta - d.gamma_disc),
    )


def _sum_reports(a: GreeksReport, b: GreeksReport) -> GreeksReport:
    return GreeksReport(
        delta=a.delta + b.delta,
        delta_pct=a.delta_pct + b.delta_pct,
        gamma=a.gamma + b.gamma,
        gamma_pct=a.gamma_pct + b.gamma_pct,
        vega=a.vega + b.vega,
        theta=a.theta + b.theta,
        rho=a.rho + b.rho,
    )


@dataclass(frozen=True)
class HedgedGreeks:
    """Greeks of a locked position hedged one-for-one with the gain contract.

    total holds the component-wise sums. The predictions are the closed-form
    collapsed sums, independent of both the spot and the volatility:
    delta_pred = V0/(2K), theta_pred = V0*r_f*(1/2 + phi*T)*gamma_disc,
    rho_pred = -V0*tau*(1/2 + phi*T)*gamma_disc.
    """

    lp: GreeksReport
    ig: GreeksReport
    total: GreeksReport
    delta_pred: float
    theta_pred: float
    rho_pred: float


def hedge_report(lp: LpState, ig: IgContract, market: MarketParams, s_t: float) -> HedgedGreeks:
    """Aggregate greeks of the hedged book, revalued at spot s_t.

    Requires matching terms: the contract strike at the pool entry price, equal
    notionals, equal maturities and a shared clock. Gamma and vega cancel at
    the formula level; a residual beyond 1e-10 of the leg magnitude indicates a
    broken formula and raises ArithmeticError.
    """
    if not lp.locked:
        raise HedgeMismatchError("hedge requires a locked position")
    pos = lp.position
    if ig.strike_k != pos.entry_price_s0:
        raise HedgeMismatchError(
            f"contract strike {ig.strike_k!r} must equal the entry price {pos.entry_price_s0!r}")
    if ig.notional_v0 != pos.notional_v0:
        raise HedgeMismatchError(
            f"notionals differ: {ig.notional_v0!r} vs {pos.notional_v0!r}")
    if ig.maturity_T != lp.maturity_T:
        raise HedgeMismatchError(
            f"maturities differ: {ig.maturity_T!r} vs {lp.maturity_T!r}")
    if ig.t != lp.t:
        raise HedgeMismatchError(f"clocks differ: {ig.t!r} vs {lp.t!r}")
    if market != lp.market:
        raise HedgeMismatchError("market parameters differ between the legs")

    lp_g = greeks_locked_lp(replace(lp, s_t=s_t))
    ig_g = greeks_ig(ig, s_t, market)
    total = _sum_reports(lp_g, ig_g)
    for name, residual, a, b in (
        ("gamma", total.gamma, lp_g.gamma, ig_g.gamma),
        ("vega", total.vega, lp_g.vega, ig_g.vega),
    ):
        scale = max(abs(a), abs(b))
        if scale > 0.0 and abs(residual) > _CANCEL_TOL * scale:
            raise ArithmeticError(f"{name} legs failed to cancel: residual {residual!r}")

    d = decay_factors(market, ig.tau)
    v0 = ig.notional_v0
    half_plus_fees = 0.5 + market.phi * ig.maturity_T
    return HedgedGreeks(
        lp=lp_g,
        ig=ig_g,
        total=total,
        delta_pred=v0 / (2.0 * ig.strike_k),
        theta_pred=v0 * market.r_f * half_plus_fees * d.gamma_disc,
        rho_pred=-v0 * ig.tau * half_plus_fees * d.gamma_disc,
    )


_TABLE_ROWS: tuple[tuple[str, str], ...] = (
    ("delta", "Delta"),
    ("delta_pct", "Delta 1%"),
    ("gamma", "Gamma"),
    ("gamma_pct", "Gamma 1%"),
    ("vega", "Vega"),
    ("theta", "Theta"),
    ("rho", "Rho"),
)


@dataclass(frozen=True)
class GreeksTable:
    """Seven greeks for the three strategies, evaluated at a shared spot."""

    unlocked: GreeksReport
    locked: GreeksReport
    ig: GreeksReport
    beta: float
    gamma_disc: float
    s_t: float

    def rows(self) -> Iterator[tuple[str, float, float, float]]:
        for field_name, label in _TABLE_ROWS:
            yield (
                label,
                getattr(self.unlocked, field_name),
                getattr(self.locked, field_name),
                getattr(self.ig, field_name),
            )

    def as_text(self) -> str:
        header = f"{'Greek':<10}{'Unlocked LP':>20}{'Locked LP':>20}{'Impermanent Gain':>20}"
        lines = [header, "-" * len(header)]
        for label, unlocked, locked, ig in self.rows():
            lines.append(f"{label:<10}{unlocked:>20.10g}{locked:>20.10g}{ig:>20.10g}")
        lines.append("-" * len(header))
        lines.append(f"beta = {self.beta:.10g}, gamma = {self.gamma_disc:.10g}, s_t = {self.s_t:.10g}")
        return "\n".join(lines)

    def as_csv(self) -> str:
        lines = ["greek,unlocked_lp,locked_lp,impermanent_gain"]
        for label, unlocked, locked, ig in self.rows():
            lines.append(
                f"{label},{format(unlocked, '.17g')},{format(locked, '.17g')},{format(ig, '.17g')}")
        return "\n".join(lines) + "\n"


def greeks_table(lp_unlocked: LpState, lp_locked: LpState, ig: IgContract,
                 market: MarketParams, s_t: float) -> GreeksTable:
    """Evaluate all three strategies at a shared spot and emit the comparison."""
    require_positive("s_t", s_t)
    if lp_unlocked.locked:
        raise DomainError("lp_unlocked must be an unlocked state")
    if not lp_locked.locked:
        raise DomainError("lp_locked must be a locked state")
    if lp_unlocked.market != market or lp_locked.market != market:
        raise DomainError("both states must share the given market parameters")
    d = decay_factors(market, lp_locked.tau)
    return GreeksTable(
        unlocked=greeks_unlocked_lp(replace(lp_unlocked, s_t=s_t)),
        locked=greeks_locked_lp(replace(lp_locked, s_t=s_t)),
        ig=greeks_ig(ig, s_t, market),
        beta=d.beta,
        gamma_disc=d.gamma_disc,
        s_t=s_t,
    )
