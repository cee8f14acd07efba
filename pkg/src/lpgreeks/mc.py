"""Seeded Monte Carlo verification engine and finite-difference greeks.

Terminal prices are sampled exactly from the lognormal terminal law, so the
estimates carry statistical error only, never discretization bias. Draws are
tied to path indices rather than workers: the uniform for path i is element i
of a single Philox stream, normals come from the inverse CDF of that uniform,
and per-chunk partial sums combine in a fixed pairwise order. Together these
make every estimate bit-identical for any worker count.

PRNG: Philox 4x64 (10 rounds) as implemented by numpy.random.Philox, keyed by
the seed. numpy guarantees stream stability for a released BitGenerator.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

from .errors import DomainError, StepCollapseError, require_non_negative, require_positive
from .pricing import MarketParams, decay_factors

_CHUNK = 1 << 16

PAYOFFS = ("locked_lp", "ig", "sqrt_moment", "forward", "vanilla_call", "vanilla_put")
_DISCOUNTED = frozenset({"locked_lp", "ig", "vanilla_call", "vanilla_put"})
PRICERS = ("unlocked_lp", "locked_lp", "ig")
GREEK_NAMES = ("delta", "gamma", "vega", "theta", "rho")

_BUMP_MIN = 1e-8
_BUMP_MAX = 1e-2


@dataclass(frozen=True)
class McConfig:
    """Estimator knobs; (n_paths, seed, antithetic) fix the result bits."""

    n_paths: int
    seed: int = 0
    antithetic: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_paths < 1:
            raise DomainError(f"n_paths must be >= 1, got {self.n_paths!r}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must fit in 64 bits, got {self.seed!r}")


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with its standard error and the effective draw count."""

    mean: float
    std_error: float
    n_effective: int


@dataclass(frozen=True)
class McScenario:
    """Inputs a payoff may need; fields unused by a given payoff stay None.

    horizon is the total lock maturity T (so the clock is t = horizon - tau);
    entry_price is the pool entry price for the locked-LP payoff and strike is
    the reference price for the gain contract and the vanillas.
    """

    market: MarketParams
    s_t: float
    tau: float
    v0: Optional[float] = None
    entry_price: Optional[float] = None
    strike: Optional[float] = None
    horizon: Optional[float] = None

    def __post_init__(self) -> None:
        require_positive("s_t", self.s_t)
        require_non_negative("tau", self.tau)


def sample_terminal(s_t: float, market: MarketParams, tau: float, draw: float) -> float:
    """One exact lognormal terminal price for a standard normal draw:
    s_t * exp((r_f - sigma^2/2) * tau + sigma * sqrt(tau) * draw)."""
    require_positive("s_t", s_t)
    require_non_negative("tau", tau)
    sigma = market.sigma
    return s_t * math.exp((market.r_f - 0.5 * sigma * sigma) * tau
                          + sigma * math.sqrt(tau) * draw)


def _terminal_array(scn: McScenario, z: np.ndarray) -> np.ndarray:
    sigma = scn.market.sigma
    drift = (scn.market.r_f - 0.5 * sigma * sigma) * scn.tau
    diffusion = sigma * math.sqrt(scn.tau)
    if diffusion == 0.0:
        return np.full_like(z, scn.s_t * math.exp(drift))
    return scn.s_t * np.exp(drift + diffusion * z)


def _payoff_values(payoff: str, scn: McScenario, z: np.ndarray) -> np.ndarray:
    s_terminal = _terminal_array(scn, z)
    if payoff == "sqrt_moment":
        return np.sqrt(s_terminal)
    if payoff == "forward":
        return s_terminal
    if payoff == "locked_lp":
        return scn.v0 * (np.sqrt(s_terminal / scn.entry_price)
                         + scn.market.phi * scn.horizon)
    if payoff == "ig":
        return scn.v0 * (0.5 + s_terminal / (2.0 * scn.strike)
                         - np.sqrt(s_terminal / scn.strike))
    if payoff == "vanilla_call":
        return np.maximum(s_terminal - scn.strike, 0.0)
    if payoff == "vanilla_put":
        return np.maximum(scn.strike - s_terminal, 0.0)
    raise DomainError(f"unknown payoff {payoff!r}; expected one of {PAYOFFS}")


def _validate_scenario(payoff: str, scn: McScenario) -> None:
    if payoff not in PAYOFFS:
        raise DomainError(f"unknown payoff {payoff!r}; expected one of {PAYOFFS}")
    needed: tuple[str, ...] = ()
    if payoff == "locked_lp":
        needed = ("v0", "entry_price", "horizon")
    elif payoff == "ig":
        needed = ("v0", "strike")
    elif payoff in ("vanilla_call", "vanilla_put"):
        needed = ("strike",)
    for field_name in needed:
        if getattr(scn, field_name) is None:
            raise DomainError(f"payoff {payoff!r} needs scenario field {field_name!r}")


def _stream_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Elements [start, start + count) of the unit-uniform stream for a seed.

    Philox counts in 4-word blocks, so chunk starts must be 4-aligned; one
    64-bit word yields one uniform via the usual 53-bit scaling.
    """
    if start % 4:
        raise DomainError("stream offsets must be multiples of 4")
    bitgen = Philox(key=seed)
    if start:
        bitgen.advance(start // 4)
    raw = bitgen.random_raw(count)
    return (raw >> np.uint64(11)) * (2.0 ** -53)


def _chunk_stats(payoff: str, scn: McScenario, cfg: McConfig,
                 start: int, stop: int) -> np.ndarray:
    u = _stream_uniforms(cfg.seed, start, stop - start)
    z = ndtri(u)
    with np.errstate(over="ignore", invalid="ignore"):
        values = _payoff_values(payoff, scn, z)
        if cfg.antithetic:
            values = 0.5 * (values + _payoff_values(payoff, scn, -z))
    if not np.isfinite(values).all():
        raise DomainError(f"payoff {payoff!r} evaluated to non-finite values")
    return np.array([values.sum(), np.square(values).sum()])


def _pairwise_total(rows: list[np.ndarray]) -> np.ndarray:
    while len(rows) > 1:
        paired = [rows[i] + rows[i + 1] for i in range(0, len(rows) - 1, 2)]
        if len(rows) % 2:
            paired.append(rows[-1])
        rows = paired
    return rows[0]


def mc_price(payoff: str, scenario: McScenario, cfg: McConfig) -> McEstimate:
    """Monte Carlo estimate of a payoff's price, or of a raw terminal moment.

    locked_lp, ig and the vanillas are discounted at exp(-r_f * tau);
    sqrt_moment and forward are undiscounted moments of the terminal price,
    directly comparable with expected_sqrt_price and forward_price. With
    antithetic on, each path index is paired with its mirrored draw and the
    pair average feeds the variance, doubling the effective draw count.
    """
    _validate_scenario(payoff, scenario)
    n = cfg.n_paths
    spans = [(a, min(a + _CHUNK, n)) for a in range(0, n, _CHUNK)]
    if cfg.workers == 1 or len(spans) == 1:
        rows = [_chunk_stats(payoff, scenario, cfg, a, b) for a, b in spans]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(
                lambda span: _chunk_stats(payoff, scenario, cfg, span[0], span[1]),
                spans,
            ))
    total = _pairwise_total(rows)
    mean = total[0] / n
    var = max((total[1] - n * mean * mean) / (n - 1), 0.0) if n > 1 else 0.0
    std_error = math.sqrt(var / n)
    if payoff in _DISCOUNTED:
        discount = math.exp(-scenario.market.r_f * scenario.tau)
        mean *= discount
        std_error *= discount
    return McEstimate(
        mean=float(mean),
        std_error=float(std_error),
        n_effective=2 * n if cfg.antithetic else n,
    )


def _closed_form_price(pricer: str, scn: McScenario, s_t: float,
                       sigma: float, r_f: float, t: float) -> float:
    """Parameter-space pricers used by the finite differences.

    The clock t may run below zero (valuing before inception is smooth), but
    the remaining time horizon - t must stay non-negative wherever it enters
    a formula; a violated bound raises StepCollapseError.
    """
    if s_t <= 0.0:
        raise StepCollapseError(f"bumped spot left the domain: {s_t!r}")
    if sigma < 0.0:
        raise StepCollapseError(f"bumped sigma left the domain: {sigma!r}")
    market = MarketParams(r_x=r_f, r_y=0.0, sigma=sigma, phi=scn.market.phi)
    if pricer == "unlocked_lp":
        return scn.v0 * (math.sqrt(s_t / scn.entry_price) + market.phi * t)
    tau = scn.horizon - t
    if tau < 0.0:
        raise StepCollapseError(f"bumped clock passed the maturity: t={t!r} > T={scn.horizon!r}")
    d = decay_factors(market, tau)
    if pricer == "locked_lp":
        return scn.v0 * (math.sqrt(s_t / scn.entry_price) * d.beta
                         + market.phi * scn.horizon * d.gamma_disc)
    if pricer == "ig":
        return scn.v0 * (0.5 * d.gamma_disc + s_t / (2.0 * scn.strike)
                         - math.sqrt(s_t / scn.strike) * d.beta)
    raise DomainError(f"unknown pricer {pricer!r}; expected one of {PRICERS}")


def fd_greek(pricer: str, scenario: McScenario, which: str, bump: float = 1e-5) -> float:
    """Central finite difference of a closed-form pricer.

    The step is bump * max(|x|, 1) in the bumped parameter x, keeping the step
    relative for the spot while giving small rates and vols an absolute floor.
    gamma uses a second central difference (a coarser bump, about 1e-4, keeps
    its rounding noise inside a 1e-5 relative budget); theta bumps the clock t
    with the maturity held fixed; rho bumps the rate differential.
    """
    if pricer not in PRICERS:
        raise DomainError(f"unknown pricer {pricer!r}; expected one of {PRICERS}")
    if which not in GREEK_NAMES:
        raise DomainError(f"unknown greek {which!r}; expected one of {GREEK_NAMES}")
    if not _BUMP_MIN <= bump <= _BUMP_MAX:
        raise DomainError(f"bump must lie in [{_BUMP_MIN}, {_BUMP_MAX}], got {bump!r}")
    for field_name in ("v0", "entry_price" if pricer != "ig" else "strike", "horizon"):
        if getattr(scenario, field_name) is None:
            raise DomainError(f"pricer {pricer!r} needs scenario field {field_name!r}")

    m = scenario.market
    s, sigma, r_f = scenario.s_t, m.sigma, m.r_f
    t = scenario.horizon - scenario.tau

    def value(s_t: float = s, sig: float = sigma, rate: float = r_f, clock: float = t) -> float:
        return _closed_form_price(pricer, scenario, s_t, sig, rate, clock)

    if which == "delta":
        h = bump * max(abs(s), 1.0)
        return (value(s_t=s + h) - value(s_t=s - h)) / (2.0 * h)
    if which == "gamma":
        h = bump * max(abs(s), 1.0)
        return (value(s_t=s + h) - 2.0 * value() + value(s_t=s - h)) / (h * h)
    if which == "vega":
        h = bump * max(abs(sigma), 1.0)
        return (value(sig=sigma + h) - value(sig=sigma - h)) / (2.0 * h)
    if which == "theta":
        h = bump * max(abs(t), 1.0)
        return (value(clock=t + h) - value(clock=t - h)) / (2.0 * h)
    h = bump * max(abs(r_f), 1.0)
    return (value(rate=r_f + h) - value(rate=r_f - h)) / (2.0 * h)
