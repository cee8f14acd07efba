"""Cross-checking suite behind the verify command.

Each check pits a closed form against an independent route: Monte Carlo for
the terminal moments and the discounted payoffs, central finite differences
for every greek, and the option strip for the gain premium. Monte Carlo rows
pass on |z| <= 3; deterministic rows scale the discrepancy by their tolerance
so that the same z <= threshold reading applies (threshold 1 there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .config import ScenarioConfig
from .errors import ConfigError
from .greeks import greeks_ig, greeks_locked_lp, greeks_unlocked_lp
from .mc import McScenario, fd_greek, mc_price
from .pricing import expected_sqrt_price, forward_price, price_ig, price_locked_lp
from .replication import build_strike_grid, price_ig_via_strip, vanilla_price

MC_Z_LIMIT = 3.0
FD_TOL_FIRST_ORDER = 1e-6
FD_TOL_SECOND_ORDER = 1e-5
FD_BUMP_FIRST_ORDER = 1e-5
FD_BUMP_SECOND_ORDER = 1e-4
STRIP_REL_TOL = 1e-2

# (sigma, r_f, tau) triples spanning the supported vol/rate/time box while
# keeping the sampling noise non-degenerate.
MOMENT_SETS = (
    (0.2, 0.00, 0.50),
    (0.7, 0.03, 0.25),
    (1.5, 0.10, 2.00),
    (0.5, -0.05, 1.00),
    (1.0, 0.05, 0.10),
)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification row."""

    name: str
    closed_form: float
    estimate: float
    std_error: float
    z_score: float
    passed: bool


def _mc_check(name: str, closed: float, estimate_mean: float, std_error: float) -> CheckResult:
    diff = estimate_mean - closed
    if std_error > 0.0:
        z = diff / std_error
    elif abs(diff) <= 1e-9 * max(abs(closed), 1.0):
        z = 0.0  # degenerate sampling noise: require near-exact agreement
    else:
        z = math.inf if diff > 0 else -math.inf
    return CheckResult(
        name=name,
        closed_form=closed,
        estimate=estimate_mean,
        std_error=std_error,
        z_score=z,
        passed=abs(z) <= MC_Z_LIMIT,
    )


def _tol_check(name: str, closed: float, estimate: float, rel_tol: float) -> CheckResult:
    scale = max(abs(closed), 1e-12)
    z = abs(estimate - closed) / (rel_tol * scale)
    return CheckResult(
        name=name,
        closed_form=closed,
        estimate=estimate,
        std_error=0.0,
        z_score=z,
        passed=z <= 1.0,
    )


def _fd_checks(pricer: str, closed, scenario: McScenario) -> list[CheckResult]:
    move = scenario.s_t / 100.0
    rows: list[CheckResult] = []
    fd_delta = fd_greek(pricer, scenario, "delta", FD_BUMP_FIRST_ORDER)
    fd_gamma = fd_greek(pricer, scenario, "gamma", FD_BUMP_SECOND_ORDER)
    pairs = (
        ("delta", closed.delta, fd_delta, FD_TOL_FIRST_ORDER),
        ("delta_pct", closed.delta_pct, fd_delta * move, FD_TOL_FIRST_ORDER),
        ("gamma", closed.gamma, fd_gamma, FD_TOL_SECOND_ORDER),
        ("gamma_pct", closed.gamma_pct, fd_gamma * move * move, FD_TOL_SECOND_ORDER),
        ("vega", closed.vega, fd_greek(pricer, scenario, "vega", FD_BUMP_FIRST_ORDER),
         FD_TOL_FIRST_ORDER),
        ("theta", closed.theta, fd_greek(pricer, scenario, "theta", FD_BUMP_FIRST_ORDER),
         FD_TOL_FIRST_ORDER),
        ("rho", closed.rho, fd_greek(pricer, scenario, "rho", FD_BUMP_FIRST_ORDER),
         FD_TOL_FIRST_ORDER),
    )
    for greek, closed_value, fd_value, tol in pairs:
        rows.append(_tol_check(f"fd/{pricer}/{greek}", closed_value, fd_value, tol))
    return rows


def run_verification(scenario: ScenarioConfig) -> list[CheckResult]:
    """Run every check for a scenario; needs a locked position, an ig block and
    an mc block."""
    if scenario.mc is None:
        raise ConfigError("mc: block is required for verification")
    if scenario.ig is None:
        raise ConfigError("ig: block is required for verification")
    if not scenario.position.locked:
        raise ConfigError("position.locked: verification prices the locked position")

    cfg = scenario.mc
    market = scenario.market
    state = scenario.lp_state()
    contract = scenario.ig_contract()
    results: list[CheckResult] = []

    # Terminal-moment identities on the fixed parameter box.
    for sigma, r_f, tau in MOMENT_SETS:
        set_market = replace(market, r_x=r_f, r_y=0.0, sigma=sigma)
        moment_scn = McScenario(market=set_market, s_t=scenario.spot, tau=tau)
        label = f"sigma={sigma:g},r_f={r_f:g},tau={tau:g}"
        est = mc_price("sqrt_moment", moment_scn, cfg)
        results.append(_mc_check(
            f"moment/sqrt[{label}]",
            expected_sqrt_price(scenario.spot, set_market, tau), est.mean, est.std_error))
        est = mc_price("forward", moment_scn, cfg)
        results.append(_mc_check(
            f"moment/forward[{label}]",
            forward_price(scenario.spot, set_market, tau), est.mean, est.std_error))

    # Discounted payoffs of the scenario itself.
    lp_scn = McScenario(
        market=market, s_t=scenario.spot, tau=state.tau,
        v0=state.position.notional_v0, entry_price=state.position.entry_price_s0,
        horizon=state.maturity_T,
    )
    est = mc_price("locked_lp", lp_scn, cfg)
    results.append(_mc_check("price/locked_lp", price_locked_lp(state), est.mean, est.std_error))

    ig_scn = McScenario(
        market=market, s_t=scenario.spot, tau=contract.tau,
        v0=contract.notional_v0, strike=contract.strike_k, horizon=contract.maturity_T,
    )
    est = mc_price("ig", ig_scn, cfg)
    results.append(_mc_check("price/ig", price_ig(contract, scenario.spot, market),
                             est.mean, est.std_error))

    for kind in ("call", "put"):
        quote = vanilla_price(contract.strike_k, scenario.spot, market, contract.tau, kind)
        est = mc_price(f"vanilla_{kind}", ig_scn, cfg)
        results.append(_mc_check(f"price/vanilla_{kind}", quote.premium, est.mean, est.std_error))

    # Finite differences against each closed-form greek.
    unlocked_state = replace(state, locked=False)
    results.extend(_fd_checks("unlocked_lp", greeks_unlocked_lp(unlocked_state), lp_scn))
    results.extend(_fd_checks("locked_lp", greeks_locked_lp(state), lp_scn))
    results.extend(_fd_checks("ig", greeks_ig(contract, scenario.spot, market), ig_scn))

    # Strip route for the gain premium.
    grid = build_strike_grid(contract.strike_k, market.sigma, contract.tau,
                             target_tol=scenario.quad_tol or 1e-5)
    results.append(_tol_check(
        "strip/ig",
        price_ig(contract, scenario.spot, market),
        price_ig_via_strip(contract, scenario.spot, market, grid),
        STRIP_REL_TOL,
    ))
    return results


def _g17(value: float) -> str:
    return format(value, ".17g")


def report_lines(results: list[CheckResult]) -> list[str]:
    lines = ["check_name,closed_form,mc_mean,std_error,z_score,pass"]
    for row in results:
        lines.append(",".join((
            row.name,
            _g17(row.closed_form),
            _g17(row.estimate),
            _g17(row.std_error),
            _g17(row.z_score),
            "true" if row.passed else "false",
        )))
    return lines


def write_report(results: list[CheckResult], path) -> None:
    Path(path).write_text("\n".join(report_lines(results)) + "\n")
