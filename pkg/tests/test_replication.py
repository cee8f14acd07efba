import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpgreeks import (
    DomainError,
    IgContract,
    MarketParams,
    build_strike_grid,
    impermanent_loss,
    price_ig,
    price_ig_via_strip,
    replicate_il_payoff,
    strip_density,
    strip_price_error_bound,
    vanilla_price,
    write_grid_csv,
)

WEEK_TAU = 7.0 / 365.0


class TestStripDensity:
    def test_plug_in_values(self):
        assert strip_density(1.0, 1.0) == -0.25
        assert strip_density(4.0, 1.0) == -1.0 / 32.0
        assert strip_density(1000.0, 1000.0) == -2.5e-7

    @given(k=st.floats(1e-3, 1e6), s0=st.floats(1e-3, 1e6))
    def test_always_negative(self, k, s0):
        assert strip_density(k, s0) < 0.0

    def test_rejects_non_positive(self):
        with pytest.raises(DomainError):
            strip_density(0.0, 1.0)
        with pytest.raises(DomainError):
            strip_density(1.0, -1.0)

    def test_payoff_and_slope_vanish_at_entry(self):
        # the replication identity's h(S0) and h'(S0) terms drop out because
        # both are zero at the entry price
        s0 = 1000.0
        h = math.sqrt(s0 / s0) - s0 / (2.0 * s0) - 0.5
        h_prime = 1.0 / (2.0 * math.sqrt(s0 * s0)) - 1.0 / (2.0 * s0)
        assert h == 0.0
        assert h_prime == 0.0


class TestGridConstruction:
    def test_entry_node_on_both_sides(self):
        grid = build_strike_grid(1000.0, 0.7, 1.0, target_tol=1e-4)
        assert grid.put_strikes[-1] == 1000.0
        assert grid.call_strikes[0] == 1000.0

    def test_cuts_and_monotonicity(self):
        grid = build_strike_grid(1000.0, 0.7, 1.0, target_tol=1e-4)
        assert grid.lower_cut < 1000.0 < grid.upper_cut
        assert grid.lower_cut == pytest.approx(1000.0 * math.exp(-5.6), rel=1e-12)
        assert grid.upper_cut == pytest.approx(1000.0 * math.exp(5.6), rel=1e-12)
        assert np.all(np.diff(grid.put_strikes) > 0.0)
        assert np.all(np.diff(grid.call_strikes) > 0.0)
        assert np.all(grid.put_weights > 0.0)
        assert np.all(grid.call_weights > 0.0)

    def test_minimum_half_width(self):
        grid = build_strike_grid(1000.0, 0.1, 0.1, target_tol=1e-3)
        assert grid.upper_cut == pytest.approx(1000.0 * math.exp(5.0), rel=1e-12)

    def test_reported_estimate_meets_tolerance(self):
        grid = build_strike_grid(1000.0, 0.7, 1.0, target_tol=1e-6)
        assert grid.error_estimate <= 1e-6
        for ratio in (0.1, 10.0 ** -0.5, 1.0, 10.0 ** 0.5, 10.0):
            s_terminal = 1000.0 * ratio
            exact = impermanent_loss(s_terminal / 1000.0 - 1.0)
            assert abs(replicate_il_payoff(grid, s_terminal) - exact) <= 1e-6

    def test_doubling_halves_error_at_least(self):
        errors = []
        for n in (64, 128, 256, 512, 1024, 2048):
            grid = build_strike_grid(1000.0, 0.7, 1.0, n_side=n)
            errors.append(abs(replicate_il_payoff(grid, 4000.0) - impermanent_loss(3.0)))
        for coarse, fine in zip(errors, errors[1:]):
            assert fine <= coarse / 2.0

    def test_rejects_bad_tolerance(self):
        for bad in (0.0, -1e-3, 0.5):
            with pytest.raises(DomainError):
                build_strike_grid(1000.0, 0.7, 1.0, target_tol=bad)


@pytest.fixture(scope="module")
def grid():
    return build_strike_grid(1000.0, 0.7, 1.0, target_tol=1e-5)


@pytest.fixture(scope="module")
def week_setup():
    market = MarketParams.from_rate_differential(0.03, 0.7, 0.0)
    contract = IgContract(notional_v0=10000.0, strike_k=1000.0,
                          maturity_T=WEEK_TAU, t=0.0)
    week_grid = build_strike_grid(1000.0, 0.7, WEEK_TAU, target_tol=1e-5)
    return market, contract, week_grid


class TestPayoffReconstruction:
    def test_zero_at_entry(self, grid):
        assert replicate_il_payoff(grid, 1000.0) == 0.0

    def test_exact_surd_points(self, grid):
        assert replicate_il_payoff(grid, 4000.0) == pytest.approx(-0.5, abs=1e-4)
        assert replicate_il_payoff(grid, 250.0) == pytest.approx(-0.125, abs=1e-4)

    def test_21_point_sweep(self, grid):
        for s_terminal in np.geomspace(100.0, 10000.0, 21):
            exact = impermanent_loss(s_terminal / 1000.0 - 1.0)
            assert abs(replicate_il_payoff(grid, s_terminal)
                       - exact) <= max(grid.error_estimate, 1e-5)

    def test_rejects_non_positive_terminal(self, grid):
        with pytest.raises(DomainError):
            replicate_il_payoff(grid, 0.0)


class TestVanillaPrice:
    def test_zero_vol_at_the_money_call_is_worthless(self):
        m = MarketParams.from_rate_differential(0.0, 0.0, 0.0)
        assert vanilla_price(1000.0, 1000.0, m, 1.0, "call").premium == 0.0

    def test_put_call_parity(self):
        for strike in (800.0, 1000.0, 1250.0):
            for sigma in (0.2, 0.7, 1.4):
                m = MarketParams.from_rate_differential(0.03, sigma, 0.0)
                tau = 0.5
                call = vanilla_price(strike, 1000.0, m, tau, "call").premium
                put = vanilla_price(strike, 1000.0, m, tau, "put").premium
                forward = 1000.0 * math.exp(0.03 * tau)
                disc = math.exp(-0.03 * tau)
                assert abs((call - put) - disc * (forward - strike)) <= 1e-12 * max(
                    1.0, forward, strike)

    def test_premium_dominates_discounted_intrinsic(self):
        m = MarketParams.from_rate_differential(0.03, 0.7, 0.0)
        tau = 0.25
        forward = 1000.0 * math.exp(0.03 * tau)
        disc = math.exp(-0.03 * tau)
        for strike in (500.0, 1000.0, 2000.0):
            call = vanilla_price(strike, 1000.0, m, tau, "call").premium
            put = vanilla_price(strike, 1000.0, m, tau, "put").premium
            assert call >= disc * max(forward - strike, 0.0) - 1e-12
            assert put >= disc * max(strike - forward, 0.0) - 1e-12
            assert call >= 0.0 and put >= 0.0

    def test_zero_tau_is_intrinsic(self):
        m = MarketParams.from_rate_differential(0.03, 0.7, 0.0)
        assert vanilla_price(900.0, 1000.0, m, 0.0, "call").premium == 100.0
        assert vanilla_price(900.0, 1000.0, m, 0.0, "put").premium == 0.0

    @given(
        strike=st.floats(1.0, 1e5),
        s_t=st.floats(1.0, 1e5),
        sigma=st.floats(0.0, 1.5),
        r_f=st.floats(-0.05, 0.10),
        tau=st.floats(0.0, 2.0),
    )
    def test_parity_property(self, strike, s_t, sigma, r_f, tau):
        m = MarketParams.from_rate_differential(r_f, sigma, 0.0)
        call = vanilla_price(strike, s_t, m, tau, "call").premium
        put = vanilla_price(strike, s_t, m, tau, "put").premium
        forward = s_t * math.exp(r_f * tau)
        disc = math.exp(-r_f * tau)
        assert abs((call - put) - disc * (forward - strike)) <= 1e-12 * max(
            1.0, forward, strike)

    def test_rejects_unknown_kind(self):
        m = MarketParams.from_rate_differential(0.03, 0.7, 0.0)
        with pytest.raises(DomainError):
            vanilla_price(1000.0, 1000.0, m, 1.0, "straddle")


class TestStripPricing:
    def test_matches_closed_form_within_one_percent(self, week_setup):
        market, contract, grid = week_setup
        closed = price_ig(contract, 1000.0, market)
        strip = price_ig_via_strip(contract, 1000.0, market, grid)
        assert abs(strip - closed) / closed <= 1e-2
        assert abs(strip - closed) <= strip_price_error_bound(contract, 1000.0, market, grid)

    def test_flat_market_at_strike_is_zero(self):
        market = MarketParams.from_rate_differential(0.0, 0.0, 0.0)
        contract = IgContract(notional_v0=10000.0, strike_k=1000.0, maturity_T=1.0, t=0.0)
        grid = build_strike_grid(1000.0, 0.0, 1.0, target_tol=1e-4)
        assert price_ig_via_strip(contract, 1000.0, market, grid) == 0.0

    def test_tighter_tolerance_never_hurts(self, week_setup):
        market, contract, _ = week_setup
        closed = price_ig(contract, 1000.0, market)
        errors = []
        for tol in (1e-2, 1e-3, 1e-4, 1e-5):
            grid = build_strike_grid(1000.0, 0.7, WEEK_TAU, target_tol=tol)
            errors.append(abs(price_ig_via_strip(contract, 1000.0, market, grid) - closed))
        for coarse, fine in zip(errors, errors[1:]):
            assert fine <= coarse

    def test_monotone_convergence_in_node_count(self, week_setup):
        market, contract, _ = week_setup
        closed = price_ig(contract, 1000.0, market)
        errors = []
        for n in (64, 128, 256, 512, 1024):
            grid = build_strike_grid(1000.0, 0.7, WEEK_TAU, n_side=n)
            errors.append(abs(price_ig_via_strip(contract, 1000.0, market, grid) - closed))
        for coarse, fine in zip(errors, errors[1:]):
            assert fine <= coarse

    def test_rejects_off_center_grid(self, week_setup):
        market, _, grid = week_setup
        shifted = IgContract(notional_v0=10000.0, strike_k=1111.0,
                             maturity_T=WEEK_TAU, t=0.0)
        with pytest.raises(DomainError):
            price_ig_via_strip(shifted, 1000.0, market, grid)


class TestGridCsv:
    def test_dump_round_trips(self, tmp_path):
        grid = build_strike_grid(1000.0, 0.7, 0.5, n_side=32)
        path = tmp_path / "grid.csv"
        write_grid_csv(grid, path)
        with open(path, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == grid.n_strikes
        kinds = {row["kind"] for row in rows}
        assert kinds == {"put", "call"}
        puts = [row for row in rows if row["kind"] == "put"]
        assert len(puts) == len(grid.put_strikes)
        assert float(puts[-1]["strike"]) == 1000.0
        assert float(puts[0]["weight"]) == grid.put_weights[0]
