"""Exogenously fixed prices: viability, admissible bands, sectoral profit rates.

Prices handed to these functions are per physical unit unless a
:class:`PriceVector` says otherwise. The value of one survival dose of
commodity ``i`` is ``p_i * F_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .economy import Economy, Units
from .errors import InvalidEconomyError, NotViableError

__all__ = [
    "FEAS_EPS",
    "PriceVector",
    "ViabilityReport",
    "FeasibilityReport",
    "SectorRates",
    "Band",
    "check_viability",
    "surplus_rates",
    "two_sector_band",
    "basket_values",
    "check_price_feasibility",
    "sector_profit_rates",
    "macro_identity_residual",
    "policy_prices_r_eq_s",
    "feasibility_witness",
    "dose_value_ratio",
]

#: Relative tolerance for budget comparisons, scaled by each sector's full basket cost.
FEAS_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class PriceVector:
    """Positive prices per physical unit, optionally normalized to a numeraire."""

    prices: np.ndarray
    numeraire: int | None = None

    def __post_init__(self) -> None:
        p = np.array(self.prices, dtype=float)
        if p.ndim != 1:
            raise InvalidEconomyError("prices must be a vector")
        if not np.all(np.isfinite(p)) or np.any(p <= 0):
            raise InvalidEconomyError("prices must be finite and strictly positive")
        if self.numeraire is not None:
            if not 0 <= self.numeraire < len(p):
                raise InvalidEconomyError(f"numeraire index {self.numeraire} out of range")
            p = p / p[self.numeraire]
        p.setflags(write=False)
        object.__setattr__(self, "prices", p)

    @classmethod
    def from_values(
        cls,
        economy: Economy,
        values: Sequence[float],
        units: Units | str = Units.PHYSICAL,
        numeraire: int | str | None = None,
    ) -> "PriceVector":
        vals = np.asarray(values, dtype=float)
        if vals.shape != (economy.n,):
            raise InvalidEconomyError(
                f"expected {economy.n} prices, got {vals.size}"
            )
        if Units.coerce(units) is Units.DOSE:
            vals = vals / economy.survival_doses
        idx = None if numeraire is None else economy.index(numeraire)
        return cls(vals, idx)

    def in_units(self, economy: Economy, units: Units | str) -> np.ndarray:
        if Units.coerce(units) is Units.DOSE:
            return self.prices * economy.survival_doses
        return self.prices.copy()

    def __len__(self) -> int:
        return len(self.prices)


def _prices(prices: PriceVector | Sequence[float]) -> np.ndarray:
    if isinstance(prices, PriceVector):
        return prices.prices
    p = np.asarray(prices, dtype=float)
    if np.any(p <= 0) or not np.all(np.isfinite(p)):
        raise InvalidEconomyError("prices must be finite and strictly positive")
    return p


def dose_value_ratio(economy: Economy, prices: PriceVector | Sequence[float]) -> float:
    """``rho = p_2 F_2 / (p_1 F_1)`` for the first two sectors."""
    v = _prices(prices) * economy.survival_doses
    return float(v[1] / v[0])


@dataclass(frozen=True, eq=False)
class ViabilityReport:
    viable: bool
    per_commodity: np.ndarray
    margins: np.ndarray  # physical units, Q_i - F_i * consumers_i


def check_viability(economy: Economy) -> ViabilityReport:
    """Is every commodity produced in sufficient quantity for all its eaters?"""
    need = economy.survival_doses * economy.consumers()
    margins = economy.outputs - need
    ok = margins >= -1e-12 * need
    return ViabilityReport(bool(ok.all()), ok, margins)


def surplus_rates(economy: Economy) -> np.ndarray:
    """``s_i`` with ``Q_i = N F_i (1 + s_i)``; needs a viable economy."""
    report = check_viability(economy)
    if not report.viable:
        bad = [economy.names[i] for i in np.flatnonzero(~report.per_commodity)]
        raise NotViableError(f"not viable, shortfall in: {', '.join(bad)}")
    need = economy.survival_doses * economy.consumers()
    return np.maximum(economy.outputs / need - 1.0, 0.0)


@dataclass(frozen=True)
class Band:
    """Closed interval for the dose-value ratio ``p_2 F_2 / (p_1 F_1)``."""

    lower: float
    upper: float

    def contains(self, rho: float, rel: float = FEAS_EPS) -> bool:
        return self.lower * (1 - rel) <= rho <= self.upper * (1 + rel)

    def __iter__(self):
        yield self.lower
        yield self.upper


def two_sector_band(economy: Economy) -> Band:
    if economy.n != 2:
        raise InvalidEconomyError(f"band needs exactly 2 sectors, got {economy.n}")
    if not economy.full_incidence:
        raise InvalidEconomyError("band needs full incidence")
    N = economy.populations
    X = economy.doses
    if np.any(X <= N):
        raise NotViableError("band is empty: each sector must produce more than it eats")
    if not check_viability(economy).viable:
        raise NotViableError("band is empty: economy is not viable")
    return Band(float(N[1] / (X[1] - N[1])), float((X[0] - N[0]) / N[0]))


def basket_values(economy: Economy, prices: PriceVector | Sequence[float]) -> np.ndarray:
    """Value of one worker's survival basket in each sector, ``sum_j B_ji p_j F_j``."""
    v = _prices(prices) * economy.survival_doses
    return economy.incidence.astype(float).T @ v


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    names: list[str]
    slack: np.ndarray
    baskets: np.ndarray
    min_prices: np.ndarray
    status: list[str]
    eps: float

    @property
    def feasible(self) -> bool:
        return all(s != "infeasible" for s in self.status)

    @property
    def cost_per_worker(self) -> float:
        """``M``: value of the full survival basket (the max over sectors)."""
        return float(self.baskets.max())

    @property
    def starving(self) -> list[str]:
        return [nm for nm, s in zip(self.names, self.status) if s == "infeasible"]


def check_price_feasibility(
    economy: Economy,
    prices: PriceVector | Sequence[float],
    eps: float = FEAS_EPS,
) -> FeasibilityReport:
    """Per-sector slack ``p_i Q_i - N_i M`` of the survival budget constraint.

    A sector whose slack is within ``eps * N_i M`` of zero is reported as
    ``"tight"``, which still counts as feasible.
    """
    p = _prices(prices)
    M = basket_values(economy, p)
    N = economy.populations
    Q = economy.outputs
    cost = N * M
    slack = p * Q - cost
    status = []
    for sig, c in zip(slack, cost):
        tol = eps * c
        if sig > tol:
            status.append("strict")
        elif sig >= -tol:
            status.append("tight")
        else:
            status.append("infeasible")
    return FeasibilityReport(economy.names, slack, M, M * N / Q, status, eps)


@dataclass(frozen=True, eq=False)
class SectorRates:
    r: np.ndarray
    s: np.ndarray

    @property
    def destroyed(self) -> np.ndarray:
        return self.r < 0


def sector_profit_rates(
    economy: Economy, prices: PriceVector | Sequence[float]
) -> SectorRates:
    """Excess of each price over its per-unit survival cost, relative to that cost."""
    p = _prices(prices)
    unit_cost = economy.populations / economy.outputs * basket_values(economy, p)
    return SectorRates((p - unit_cost) / unit_cost, surplus_rates(economy))


def macro_identity_residual(
    economy: Economy, rates: SectorRates, form: str = "shares"
) -> float:
    """Residual of the aggregate constraint tying sectoral rates together.

    ``form="shares"`` evaluates ``sum n_i (1+r_i)/(1+s_i) - 1``;
    ``form="costs"`` evaluates ``sum (N_i F_i / Q_i)(1+r_i) - 1``.
    Both vanish for rates derived from any positive price vector.
    """
    if not economy.full_incidence:
        raise InvalidEconomyError("the macro identity holds for full incidence only")
    if form == "shares":
        terms = economy.population_shares * (1 + rates.r) / (1 + rates.s)
    elif form == "costs":
        N, F, Q = economy.populations, economy.survival_doses, economy.outputs
        terms = N * F / Q * (1 + rates.r)
    else:
        raise ValueError(f"unknown form {form!r}")
    return float(terms.sum() - 1.0)


def policy_prices_r_eq_s(economy: Economy, numeraire: int | str = 0) -> PriceVector:
    """Prices giving each sector a profit rate equal to its surplus rate.

    Dose values ``p_i F_i`` come out proportional to population shares.
    """
    if not economy.full_incidence:
        raise InvalidEconomyError("r = s pricing needs full incidence")
    surplus_rates(economy)  # viability check
    p = economy.population_shares / economy.survival_doses
    return PriceVector(p, economy.index(numeraire))


def feasibility_witness(economy: Economy) -> np.ndarray | None:
    """A feasible price vector ``p_i = N_i / Q_i`` when one exists, else None.

    For full incidence a feasible positive price exists exactly when
    ``sum N_i F_i / Q_i <= 1``.
    """
    if not economy.full_incidence:
        raise InvalidEconomyError("feasibility witness needs full incidence")
    N, F, Q = economy.populations, economy.survival_doses, economy.outputs
    if float(np.sum(N * F / Q)) > 1.0 + 1e-12:
        return None
    return N / Q
