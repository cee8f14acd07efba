"""Scenario files: JSON layout, strict validation, canonical serialization.

A scenario file is a single JSON object with sections market, position, spot and
the optional ig, mc and quadrature blocks. Rates, vols and fee yields are
decimals per year; times are year fractions, or days via a *_days key (divided
by 365). The shipped JSON Schema (schema/scenario.schema.json) documents the
layout; loading re-validates every domain constraint of the underlying types.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .errors import ConfigError, DomainError
from .mc import McConfig
from .pool import pool_from_deposit
from .pricing import IgContract, LpState, MarketParams

DAYS_PER_YEAR = 365.0

_SECTIONS = {"market", "position", "spot", "ig", "mc", "quadrature"}
_MARKET_KEYS = {"r_x", "r_y", "r_f", "sigma", "phi"}
_POSITION_KEYS = {"v0", "s0", "t", "t_days", "T", "T_days", "locked"}
_IG_KEYS = {"k", "T", "T_days"}
_MC_KEYS = {"n_paths", "seed", "antithetic", "workers"}
_QUAD_KEYS = {"target_tol"}


@dataclass(frozen=True)
class PositionConfig:
    v0: float
    s0: float
    t: float
    maturity: float
    locked: bool


@dataclass(frozen=True)
class IgTerms:
    strike: float
    maturity: float


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully validated pricing scenario."""

    market: MarketParams
    position: PositionConfig
    spot: float
    ig: Optional[IgTerms] = None
    mc: Optional[McConfig] = None
    quad_tol: Optional[float] = None

    def lp_state(self) -> LpState:
        return LpState(
            position=pool_from_deposit(self.position.v0, self.position.s0),
            market=self.market,
            s_t=self.spot,
            t=self.position.t,
            maturity_T=self.position.maturity,
            locked=self.position.locked,
        )

    def ig_contract(self) -> IgContract:
        if self.ig is None:
            raise ConfigError("ig: block is required for this command")
        return IgContract(
            notional_v0=self.position.v0,
            strike_k=self.ig.strike,
            maturity_T=self.ig.maturity,
            t=self.position.t,
        )

    def to_dict(self) -> dict[str, Any]:
        """Canonical form: rates as the (r_x, r_y) pair, all times in years."""
        out: dict[str, Any] = {
            "market": {
                "r_x": self.market.r_x,
                "r_y": self.market.r_y,
                "sigma": self.market.sigma,
                "phi": self.market.phi,
            },
            "position": {
                "v0": self.position.v0,
                "s0": self.position.s0,
                "t": self.position.t,
                "T": self.position.maturity,
                "locked": self.position.locked,
            },
            "spot": self.spot,
        }
        if self.ig is not None:
            out["ig"] = {"k": self.ig.strike, "T": self.ig.maturity}
        if self.mc is not None:
            out["mc"] = {
                "n_paths": self.mc.n_paths,
                "seed": self.mc.seed,
                "antithetic": self.mc.antithetic,
                "workers": self.mc.workers,
            }
        if self.quad_tol is not None:
            out["quadrature"] = {"target_tol": self.quad_tol}
        return out


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {', '.join(unknown)}")


def _number(obj: dict, key: str, path: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _integer(obj: dict, key: str, path: str) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


def _boolean(obj: dict, key: str, path: str) -> bool:
    value = obj[key]
    if not isinstance(value, bool):
        raise ConfigError(f"{path}.{key}: expected a boolean, got {value!r}")
    return value


def _time_field(obj: dict, key: str, path: str, default: Optional[float] = None) -> float:
    """Read a year-fraction field, accepting the <key>_days variant instead."""
    days_key = f"{key}_days"
    if key in obj and days_key in obj:
        raise ConfigError(f"{path}: give {key} or {days_key}, not both")
    if key in obj:
        return _number(obj, key, path)
    if days_key in obj:
        return _number(obj, days_key, path) / DAYS_PER_YEAR
    if default is None:
        raise ConfigError(f"{path}.{key}: required field is missing")
    return default


def _parse_market(obj: Any) -> MarketParams:
    market = _expect_object(obj, "market")
    _reject_unknown(market, _MARKET_KEYS, "market")
    has_pair = "r_x" in market or "r_y" in market
    has_diff = "r_f" in market
    if has_pair == has_diff:
        raise ConfigError("market: give exactly one of (r_x, r_y) or r_f")
    if has_pair and not ("r_x" in market and "r_y" in market):
        raise ConfigError("market: r_x and r_y must be given together")
    for key in ("sigma", "phi"):
        if key not in market:
            raise ConfigError(f"market.{key}: required field is missing")
    sigma = _number(market, "sigma", "market")
    phi = _number(market, "phi", "market")
    try:
        if has_diff:
            return MarketParams.from_rate_differential(
                _number(market, "r_f", "market"), sigma, phi)
        return MarketParams(
            r_x=_number(market, "r_x", "market"),
            r_y=_number(market, "r_y", "market"),
            sigma=sigma,
            phi=phi,
        )
    except DomainError as exc:
        raise ConfigError(f"market: {exc}") from exc


def _parse_position(obj: Any) -> PositionConfig:
    position = _expect_object(obj, "position")
    _reject_unknown(position, _POSITION_KEYS, "position")
    for key in ("v0", "s0"):
        if key not in position:
            raise ConfigError(f"position.{key}: required field is missing")
    v0 = _number(position, "v0", "position")
    s0 = _number(position, "s0", "position")
    t = _time_field(position, "t", "position", default=0.0)
    locked = _boolean(position, "locked", "position") if "locked" in position else False
    maturity = _time_field(position, "T", "position", default=t)
    for name, value in (("position.v0", v0), ("position.s0", s0)):
        if not (math.isfinite(value) and value > 0.0):
            raise ConfigError(f"{name}: must be a positive finite number")
    if not (math.isfinite(t) and t >= 0.0):
        raise ConfigError("position.t: must be >= 0")
    if not (math.isfinite(maturity) and maturity >= t):
        raise ConfigError("position.T: must be >= position.t")
    return PositionConfig(v0=v0, s0=s0, t=t, maturity=maturity, locked=locked)


def _parse_ig(obj: Any, t: float) -> IgTerms:
    ig = _expect_object(obj, "ig")
    _reject_unknown(ig, _IG_KEYS, "ig")
    if "k" not in ig:
        raise ConfigError("ig.k: required field is missing")
    strike = _number(ig, "k", "ig")
    maturity = _time_field(ig, "T", "ig")
    if not (math.isfinite(strike) and strike > 0.0):
        raise ConfigError("ig.k: must be a positive finite number")
    if not (math.isfinite(maturity) and maturity >= t):
        raise ConfigError("ig.T: must be >= position.t")
    return IgTerms(strike=strike, maturity=maturity)


def _parse_mc(obj: Any) -> McConfig:
    mc = _expect_object(obj, "mc")
    _reject_unknown(mc, _MC_KEYS, "mc")
    if "n_paths" not in mc:
        raise ConfigError("mc.n_paths: required field is missing")
    try:
        return McConfig(
            n_paths=_integer(mc, "n_paths", "mc"),
            seed=_integer(mc, "seed", "mc") if "seed" in mc else 0,
            antithetic=_boolean(mc, "antithetic", "mc") if "antithetic" in mc else False,
            workers=_integer(mc, "workers", "mc") if "workers" in mc else 1,
        )
    except DomainError as exc:
        raise ConfigError(f"mc: {exc}") from exc


def _parse_quadrature(obj: Any) -> float:
    quad = _expect_object(obj, "quadrature")
    _reject_unknown(quad, _QUAD_KEYS, "quadrature")
    if "target_tol" not in quad:
        raise ConfigError("quadrature.target_tol: required field is missing")
    tol = _number(quad, "target_tol", "quadrature")
    if not (math.isfinite(tol) and 0.0 < tol <= 1e-2):
        raise ConfigError("quadrature.target_tol: must lie in (0, 1e-2]")
    return tol


def scenario_from_dict(data: Any) -> ScenarioConfig:
    root = _expect_object(data, "<root>")
    _reject_unknown(root, _SECTIONS, "<root>")
    for key in ("market", "position", "spot"):
        if key not in root:
            raise ConfigError(f"{key}: required section is missing")
    market = _parse_market(root["market"])
    position = _parse_position(root["position"])
    spot = _number(root, "spot", "<root>")
    if not (math.isfinite(spot) and spot > 0.0):
        raise ConfigError("spot: must be a positive finite number")
    scenario = ScenarioConfig(
        market=market,
        position=position,
        spot=spot,
        ig=_parse_ig(root["ig"], position.t) if "ig" in root else None,
        mc=_parse_mc(root["mc"]) if "mc" in root else None,
        quad_tol=_parse_quadrature(root["quadrature"]) if "quadrature" in root else None,
    )
    try:
        scenario.lp_state()
        if scenario.ig is not None:
            scenario.ig_contract()
    except DomainError as exc:
        raise ConfigError(f"scenario: {exc}") from exc
    return scenario


def loads_config(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return loads_config(text)


def dumps_config(scenario: ScenarioConfig) -> str:
    return json.dumps(scenario.to_dict(), indent=2, sort_keys=True) + "\n"


def dump_config(scenario: ScenarioConfig, path) -> None:
    Path(path).write_text(dumps_config(scenario))
