import pytest

from lpgreeks import IgContract, LpState, MarketParams, pool_from_deposit


@pytest.fixture
def benchmark_pool():
    """10k token-y deposited at an entry price of 1000."""
    return pool_from_deposit(10000.0, 1000.0)


@pytest.fixture
def half_year_market():
    return MarketParams.from_rate_differential(0.03, 0.7, 0.10)


@pytest.fixture
def locked_half_year(benchmark_pool, half_year_market):
    """Locked position with a quarter year left on a half-year lock."""
    return LpState(position=benchmark_pool, market=half_year_market,
                   s_t=1000.0, t=0.25, maturity_T=0.5, locked=True)


@pytest.fixture
def week_market():
    return MarketParams.from_rate_differential(0.03, 0.7, 0.0)


@pytest.fixture
def week_contract():
    """At-the-money gain contract with seven days to run."""
    return IgContract(notional_v0=10000.0, strike_k=1000.0, maturity_T=7.0 / 365.0, t=0.0)


@pytest.fixture
def hedge_year(benchmark_pool, half_year_market):
    """Matched one-year locked position and gain contract."""
    lp = LpState(position=benchmark_pool, market=half_year_market,
                 s_t=1000.0, t=0.0, maturity_T=1.0, locked=True)
    ig = IgContract(notional_v0=10000.0, strike_k=1000.0, maturity_T=1.0, t=0.0)
    return lp, ig
