"""Period-by-period exchange under fixed prices.

Each period every surviving sector sells part of its surplus, then buys the
survival basket of foods it does not produce for all its workers. A sector
whose savings plus revenue cannot pay for the basket collapses; from the next
period on it neither sells nor buys.

In ``closed`` mode sales are limited by what the other surviving sectors eat
and unsold surplus is discarded. In ``open`` mode the whole surplus is sold to
an outside buyer, so the per-period savings change equals the static budget
slack ``p_i Q_i - N_i M``.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .economy import Economy
from .errors import InvalidEconomyError
from .policy import FEAS_EPS, PriceVector, check_viability

__all__ = [
    "SimMode",
    "SimConfig",
    "CollapseEvent",
    "SimTrajectory",
    "simulate",
    "time_to_collapse",
]

STEADY = "steady"


class SimMode(str, enum.Enum):
    CLOSED = "closed"
    OPEN = "open"


@dataclass(frozen=True, eq=False)
class SimConfig:
    mode: SimMode
    periods: int
    initial_savings: np.ndarray
    prices: PriceVector
    eps: float = FEAS_EPS

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", SimMode(self.mode))
        if int(self.periods) != self.periods or self.periods < 1:
            raise InvalidEconomyError("periods must be a positive integer")
        object.__setattr__(self, "periods", int(self.periods))
        s = np.array(self.initial_savings, dtype=float)
        if np.any(s < 0) or not np.all(np.isfinite(s)):
            raise InvalidEconomyError("initial savings must be finite and >= 0")
        object.__setattr__(self, "initial_savings", s)
        if not isinstance(self.prices, PriceVector):
            object.__setattr__(self, "prices", PriceVector(self.prices))


@dataclass(frozen=True)
class CollapseEvent:
    sector: str
    period: int


@dataclass(frozen=True, eq=False)
class SimTrajectory:
    """Ledger of a run; rows are periods (1-based), columns sectors.

    Entries after a sector's collapse period are NaN.
    """

    names: list[str]
    mode: SimMode
    revenue: np.ndarray
    basket_cost: np.ndarray
    savings_after: np.ndarray
    status: np.ndarray  # 0 alive, 1 collapsed this period, 2 gone
    events: list[CollapseEvent]
    viable: list[bool]  # viability of the surviving sectors, per period

    @property
    def periods(self) -> int:
        return self.revenue.shape[0]

    @property
    def outcome(self) -> str:
        return "collapsed" if self.events else STEADY

    @property
    def flux(self) -> np.ndarray:
        """Revenue minus basket cost, before the savings floor."""
        return self.revenue - self.basket_cost

    def rows(self) -> list[dict]:
        out = []
        for t in range(self.periods):
            for i, name in enumerate(self.names):
                st = self.status[t, i]
                if st == 2:
                    continue
                out.append(
                    {
                        "period": t + 1,
                        "sector": name,
                        "revenue": float(self.revenue[t, i]),
                        "cost": float(self.basket_cost[t, i]),
                        "savings": float(self.savings_after[t, i]),
                        "event": "collapse" if st == 1 else "",
                    }
                )
        return out

    def to_csv(self, fmt: str = ".12g") -> str:
        buf = io.StringIO()
        fields = ["period", "sector", "revenue", "cost", "savings", "event"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            for key in ("revenue", "cost", "savings"):
                row[key] = format(row[key], fmt)
            writer.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "periods": self.periods,
            "outcome": self.outcome,
            "events": [{"sector": e.sector, "period": e.period} for e in self.events],
            "rows": self.rows(),
        }


def _surviving_viable(economy: Economy, alive: np.ndarray) -> bool:
    B = economy.incidence[np.ix_(alive, alive)].astype(float)
    need = economy.survival_doses[alive] * (B @ economy.populations[alive])
    return bool(np.all(economy.outputs[alive] >= need * (1 - 1e-12)))


def _run(economy: Economy, config: SimConfig, stop_when_steady: bool) -> SimTrajectory:
    n = economy.n
    if len(config.prices) != n:
        raise InvalidEconomyError(f"expected {n} prices, got {len(config.prices)}")
    if config.initial_savings.shape != (n,):
        raise InvalidEconomyError(f"expected {n} initial savings")
    if not check_viability(economy).viable:
        raise InvalidEconomyError("simulation needs a viable economy")
    revenue, cost, sav, status, collapse, ran = _kernels.run_ledger(
        np.ascontiguousarray(config.prices.prices, dtype=np.float64),
        np.ascontiguousarray(economy.outputs, dtype=np.float64),
        np.ascontiguousarray(economy.populations, dtype=np.float64),
        np.ascontiguousarray(economy.survival_doses, dtype=np.float64),
        np.ascontiguousarray(economy.incidence, dtype=np.uint8),
        config.mode is SimMode.CLOSED,
        config.periods,
        np.ascontiguousarray(config.initial_savings, dtype=np.float64),
        config.eps,
        stop_when_steady,
    )
    ran = int(ran)
    revenue, cost, sav, status = (np.asarray(x)[:ran] for x in (revenue, cost, sav, status))
    gone = status == 2
    revenue, cost, sav = (np.where(gone, np.nan, x) for x in (revenue, cost, sav))

    events = sorted(
        (CollapseEvent(economy.names[i], int(collapse[i])) for i in range(n) if collapse[i]),
        key=lambda e: (e.period, economy.index(e.sector)),
    )
    viable = [_surviving_viable(economy, status[t] != 2) for t in range(ran)]
    return SimTrajectory(
        economy.names, config.mode, revenue, cost, sav, status, events, viable
    )


def simulate(economy: Economy, config: SimConfig) -> SimTrajectory:
    """Run the exchange ledger for ``config.periods`` periods. Deterministic."""
    return _run(economy, config, stop_when_steady=False)


def time_to_collapse(
    economy: Economy,
    prices: PriceVector | Sequence[float],
    savings: Sequence[float],
    mode: SimMode | str = SimMode.OPEN,
    max_periods: int = 100_000,
    eps: float = FEAS_EPS,
) -> dict[str, int | str | None]:
    """First collapse period of each sector, ``"steady"`` if it never collapses.

    The run stops early once no sector runs a deficit. A sector still in
    deficit when ``max_periods`` is reached maps to None.
    """
    cfg = SimConfig(SimMode(mode), max_periods, np.asarray(savings, float), prices, eps)
    traj = _run(economy, cfg, stop_when_steady=True)
    first = {e.sector: e.period for e in traj.events}
    out: dict[str, int | str | None] = {}
    last = traj.periods - 1
    for i, name in enumerate(economy.names):
        if name in first:
            out[name] = first[name]
        elif traj.flux[last, i] >= -eps * max(traj.basket_cost[last, i], 1e-300):
            out[name] = STEADY
        else:
            out[name] = None
    return out
