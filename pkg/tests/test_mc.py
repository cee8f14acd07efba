import math

import numpy as np
import pytest

from lpgreeks import (
    DomainError,
    IgContract,
    MarketParams,
    McConfig,
    McEstimate,
    McScenario,
    StepCollapseError,
    expected_sqrt_price,
    fd_greek,
    greeks_locked_lp,
    greeks_ig,
    mc_price,
    pool_from_deposit,
    price_ig,
    price_locked_lp,
    sample_terminal,
)
from lpgreeks.mc import _stream_uniforms

POOL = pool_from_deposit(10000.0, 1000.0)
WEEK_TAU = 7.0 / 365.0
MEDIAN_PATH = 782.70453824186816771  # 1000 * exp(-0.7^2/2)


def week_ig_scenario(s_t=1000.0, phi=0.0):
    market = MarketParams.from_rate_differential(0.03, 0.7, phi)
    return McScenario(market=market, s_t=s_t, tau=WEEK_TAU, v0=10000.0,
                      strike=1000.0, horizon=WEEK_TAU)


class TestSampleTerminal:
    def test_median_path(self):
        m = MarketParams.from_rate_differential(0.0, 0.7, 0.0)
        assert sample_terminal(1000.0, m, 1.0, 0.0) == pytest.approx(
            MEDIAN_PATH, rel=1e-14)

    def test_deterministic_when_flat_vol(self):
        m = MarketParams.from_rate_differential(0.03, 0.0, 0.0)
        for z in (-3.0, 0.0, 4.5):
            assert sample_terminal(1000.0, m, 1.0, z) == pytest.approx(
                1000.0 * math.exp(0.03), rel=1e-14)

    def test_zero_tau_returns_spot_exactly(self):
        m = MarketParams.from_rate_differential(0.03, 0.7, 0.0)
        assert sample_terminal(1234.5, m, 0.0, 1.7) == 1234.5

    def test_strictly_positive(self):
        m = MarketParams.from_rate_differential(0.0, 1.5, 0.0)
        assert sample_terminal(1000.0, m, 2.0, -8.0) > 0.0


class TestStreamIndexing:
    def test_chunked_reads_match_one_shot(self):
        whole = _stream_uniforms(42, 0, 1000)
        pieces = np.concatenate([
            _stream_uniforms(42, 0, 256),
            _stream_uniforms(42, 256, 500),
            _stream_uniforms(42, 756, 244),
        ])
        assert np.array_equal(whole, pieces)

    def test_distinct_seeds_differ(self):
        assert not np.array_equal(_stream_uniforms(1, 0, 64), _stream_uniforms(2, 0, 64))


class TestMcPrice:
    def test_zero_rate_forward_is_martingale(self):
        m = MarketParams.from_rate_differential(0.0, 0.7, 0.0)
        scn = McScenario(market=m, s_t=1000.0, tau=1.0)
        est = mc_price("forward", scn, McConfig(n_paths=10**6, seed=3))
        assert abs(est.mean - 1000.0) <= 3.0 * est.std_error

    def test_sqrt_moment_matches_closed_form(self):
        m = MarketParams.from_rate_differential(0.03, 0.7, 0.0)
        scn = McScenario(market=m, s_t=1000.0, tau=0.25)
        est = mc_price("sqrt_moment", scn, McConfig(n_paths=2 * 10**5, seed=5))
        closed = expected_sqrt_price(1000.0, m, 0.25)
        assert abs(est.mean - closed) <= 3.0 * est.std_error

    def test_ig_price_matches_closed_form(self, week_market, week_contract):
        est = mc_price("ig", week_ig_scenario(), McConfig(n_paths=10**6, seed=42))
        closed = price_ig(week_contract, 1000.0, week_market)
        assert abs(est.mean - closed) <= 3.0 * est.std_error

    def test_locked_lp_price_matches_closed_form(self, locked_half_year, half_year_market):
        scn = McScenario(market=half_year_market, s_t=1000.0, tau=0.25,
                         v0=10000.0, entry_price=1000.0, horizon=0.5)
        est = mc_price("locked_lp", scn, McConfig(n_paths=10**6, seed=42))
        assert abs(est.mean - price_locked_lp(locked_half_year)) <= 3.0 * est.std_error

    def test_vanilla_call_matches_black_formula(self, week_market):
        from lpgreeks import vanilla_price
        scn = week_ig_scenario()
        est = mc_price("vanilla_call", scn, McConfig(n_paths=2 * 10**5, seed=9))
        closed = vanilla_price(1000.0, 1000.0, week_market, WEEK_TAU, "call").premium
        assert abs(est.mean - closed) <= 3.0 * est.std_error

    def test_missing_scenario_fields_rejected(self):
        m = MarketParams.from_rate_differential(0.03, 0.7, 0.0)
        bare = McScenario(market=m, s_t=1000.0, tau=0.5)
        with pytest.raises(DomainError):
            mc_price("locked_lp", bare, McConfig(n_paths=10))
        with pytest.raises(DomainError):
            mc_price("nonsense", bare, McConfig(n_paths=10))

    def test_non_finite_payoff_guarded(self):
        m = MarketParams.from_rate_differential(1e4, 0.7, 0.0)
        scn = McScenario(market=m, s_t=1000.0, tau=1.0)
        with pytest.raises(DomainError):
            mc_price("forward", scn, McConfig(n_paths=100))


class TestDeterminism:
    def test_identical_config_identical_bits(self):
        cfg = McConfig(n_paths=10**5, seed=77)
        a = mc_price("ig", week_ig_scenario(), cfg)
        b = mc_price("ig", week_ig_scenario(), cfg)
        assert a == b

    def test_worker_count_never_changes_bits(self):
        # 300001 paths exercises a partial final chunk as well
        base = mc_price("ig", week_ig_scenario(), McConfig(n_paths=300001, seed=7, workers=1))
        for workers in (2, 4):
            other = mc_price("ig", week_ig_scenario(),
                             McConfig(n_paths=300001, seed=7, workers=workers))
            assert other.mean == base.mean
            assert other.std_error == base.std_error

    def test_seed_independence_of_truth(self):
        a = mc_price("ig", week_ig_scenario(), McConfig(n_paths=2 * 10**5, seed=101))
        b = mc_price("ig", week_ig_scenario(), McConfig(n_paths=2 * 10**5, seed=202))
        combined = math.hypot(a.std_error, b.std_error)
        assert abs(a.mean - b.mean) <= 6.0 * combined

    def test_se_scales_like_inverse_sqrt_n(self):
        small = mc_price("ig", week_ig_scenario(), McConfig(n_paths=10**4, seed=13))
        large = mc_price("ig", week_ig_scenario(), McConfig(n_paths=4 * 10**4, seed=13))
        assert 1.6 <= small.std_error / large.std_error <= 2.5

    def test_se_ratio_over_three_decades(self):
        tiny = mc_price("ig", week_ig_scenario(), McConfig(n_paths=10**3, seed=13))
        big = mc_price("ig", week_ig_scenario(), McConfig(n_paths=10**6, seed=13))
        assert 20.0 <= tiny.std_error / big.std_error <= 50.0


class TestAntithetic:
    def test_effective_draws_double(self):
        est = mc_price("ig", week_ig_scenario(), McConfig(n_paths=1000, seed=1, antithetic=True))
        assert est.n_effective == 2000
        plain = mc_price("ig", week_ig_scenario(), McConfig(n_paths=1000, seed=1))
        assert plain.n_effective == 1000

    def test_variance_reduction_at_equal_effective_draws(self):
        # evaluated in-the-money where the payoff is monotone over the draw;
        # at the strike the payoff is nearly even in z and pairing cannot help
        scn = week_ig_scenario(s_t=2000.0)
        plain = mc_price("ig", scn, McConfig(n_paths=2 * 10**5, seed=11))
        anti = mc_price("ig", scn, McConfig(n_paths=10**5, seed=11, antithetic=True))
        assert anti.n_effective == plain.n_effective
        assert anti.std_error <= plain.std_error


class TestConfigValidation:
    def test_bad_configs_rejected(self):
        with pytest.raises(DomainError):
            McConfig(n_paths=0)
        with pytest.raises(DomainError):
            McConfig(n_paths=10, workers=0)
        with pytest.raises(DomainError):
            McConfig(n_paths=10, seed=-1)
        with pytest.raises(DomainError):
            McConfig(n_paths=10, seed=2**64)

    def test_estimate_fields(self):
        est = mc_price("forward",
                       McScenario(market=MarketParams.from_rate_differential(0.0, 0.3, 0.0),
                                  s_t=100.0, tau=0.5),
                       McConfig(n_paths=4096, seed=0))
        assert isinstance(est, McEstimate)
        assert est.std_error > 0.0
        assert est.n_effective == 4096

    def test_single_path_and_max_seed(self):
        scn = McScenario(market=MarketParams.from_rate_differential(0.0, 0.3, 0.0),
                         s_t=100.0, tau=0.5)
        est = mc_price("forward", scn, McConfig(n_paths=1, seed=2**64 - 1))
        assert math.isfinite(est.mean)
        assert est.std_error == 0.0


class TestFdGreek:
    def test_locked_delta_matches_closed_form(self, locked_half_year, half_year_market):
        scn = McScenario(market=half_year_market, s_t=1000.0, tau=0.25,
                         v0=10000.0, entry_price=1000.0, horizon=0.5)
        fd = fd_greek("locked_lp", scn, "delta", 1e-5)
        closed = greeks_locked_lp(locked_half_year).delta
        assert abs(fd - closed) / abs(closed) < 1e-6

    def test_ig_gamma_with_coarse_bump(self, week_market, week_contract):
        fd = fd_greek("ig", week_ig_scenario(), "gamma", 1e-4)
        closed = greeks_ig(week_contract, 1000.0, week_market).gamma
        assert abs(fd - closed) / abs(closed) < 1e-5

    def test_unlocked_vega_identically_zero(self, half_year_market):
        scn = McScenario(market=half_year_market, s_t=1234.0, tau=0.25,
                         v0=10000.0, entry_price=1000.0, horizon=0.5)
        assert fd_greek("unlocked_lp", scn, "vega") == 0.0
        assert fd_greek("unlocked_lp", scn, "rho") == 0.0

    def test_theta_at_inception_works(self, week_market):
        # clock sits at zero; the down-bump values the contract pre-inception
        fd = fd_greek("ig", week_ig_scenario(), "theta")
        closed = greeks_ig(IgContract(notional_v0=10000.0, strike_k=1000.0,
                                      maturity_T=WEEK_TAU, t=0.0),
                           1000.0, week_market).theta
        assert abs(fd - closed) / abs(closed) < 1e-6

    def test_step_collapse_past_maturity(self, half_year_market):
        expired = McScenario(market=half_year_market, s_t=1000.0, tau=0.0,
                             v0=10000.0, entry_price=1000.0, horizon=0.5)
        with pytest.raises(StepCollapseError):
            fd_greek("locked_lp", expired, "theta")

    def test_bump_bounds_enforced(self, half_year_market):
        scn = McScenario(market=half_year_market, s_t=1000.0, tau=0.25,
                         v0=10000.0, entry_price=1000.0, horizon=0.5)
        with pytest.raises(DomainError):
            fd_greek("locked_lp", scn, "delta", 1e-9)
        with pytest.raises(DomainError):
            fd_greek("locked_lp", scn, "delta", 0.5)
        with pytest.raises(DomainError):
            fd_greek("locked_lp", scn, "vanna")
