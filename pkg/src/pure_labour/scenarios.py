"""Transformations of a base economy and income accounting at natural prices."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .economy import Economy, Sector, Units, build_input_matrix, labour_coefficients
from .errors import InvalidEconomyError, NotViableError
from .policy import check_viability

__all__ = [
    "ScenarioKind",
    "NewSector",
    "Scenario",
    "ScenarioOutcome",
    "IncomeReport",
    "apply_output_scaling",
    "apply_labour_saving",
    "add_sector",
    "apply_scenarios",
    "sector_incomes",
]


class ScenarioKind(str, enum.Enum):
    OUTPUT_SCALING = "output_scaling"
    LABOUR_SAVING = "labour_saving"
    ADD_LUXURY = "add_luxury"
    ADD_INPUT_SECTOR = "add_input_sector"


@dataclass(frozen=True)
class NewSector:
    """A sector to append to an economy.

    ``inputs`` lists the existing commodities its workers consume (all of them
    when None); ``used_by`` lists the existing sectors that consume the new
    commodity. ``self_use`` adds the new commodity to its own inputs.
    """

    name: str
    population: float
    survival_dose: float
    output: float
    inputs: tuple[str, ...] | None = None
    used_by: tuple[str, ...] = ()
    self_use: bool = True


@dataclass(frozen=True)
class Scenario:
    kind: ScenarioKind
    target: str | None = None
    gamma: float | None = None
    g: float | None = None
    sector: NewSector | None = None

    def __post_init__(self) -> None:
        kind = ScenarioKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ScenarioKind.OUTPUT_SCALING:
            if self.target is None or self.gamma is None:
                raise InvalidEconomyError("output_scaling needs target and gamma")
            if not self.gamma >= 1:
                raise InvalidEconomyError(f"gamma must be >= 1, got {self.gamma}")
        elif kind is ScenarioKind.LABOUR_SAVING:
            if self.target is None or self.g is None:
                raise InvalidEconomyError("labour_saving needs target and g")
            if not 0 <= self.g <= 1:
                raise InvalidEconomyError(f"g must lie in [0, 1], got {self.g}")
        else:
            if self.sector is None:
                raise InvalidEconomyError(f"{kind.value} needs a sector spec")
            if kind is ScenarioKind.ADD_LUXURY and self.sector.used_by:
                raise InvalidEconomyError("a luxury good is not used by other sectors")
            if kind is ScenarioKind.ADD_INPUT_SECTOR and not self.sector.used_by:
                raise InvalidEconomyError("an input sector must be used by some sector")


def apply_output_scaling(economy: Economy, sector: str | int, gamma: float) -> Economy:
    """Multiply one sector's output by ``gamma >= 1``, all else unchanged."""
    if not gamma >= 1:
        raise InvalidEconomyError(f"gamma must be >= 1, got {gamma}")
    i = economy.index(sector)
    return economy.replace_sector(i, output=economy.sectors[i].output * gamma)


def apply_labour_saving(
    economy: Economy,
    sector: str | int,
    g: float,
    units: Units | str = Units.DOSE,
    labour: Sequence[float] | None = None,
) -> np.ndarray:
    """Labour vector with one sector's coefficient scaled by ``g``.

    The technical matrix is untouched; pass the result as ``labour`` to
    :func:`~pure_labour.natural.wage_profit_prices`.
    """
    if not 0 <= g <= 1:
        raise InvalidEconomyError(f"g must lie in [0, 1], got {g}")
    a = labour_coefficients(economy, units) if labour is None else np.array(labour, float)
    a[economy.index(sector)] *= g
    return a


def add_sector(economy: Economy, spec: NewSector) -> Economy:
    n = economy.n
    names = economy.names
    if spec.name in names:
        raise InvalidEconomyError(f"sector {spec.name!r} already exists")
    inputs = names if spec.inputs is None else list(spec.inputs)
    B = np.zeros((n + 1, n + 1), dtype=bool)
    B[:n, :n] = economy.incidence
    for nm in inputs:
        B[economy.index(nm), n] = True
    for nm in spec.used_by:
        B[n, economy.index(nm)] = True
    B[n, n] = spec.self_use
    sector = Sector(spec.name, spec.population, spec.survival_dose, spec.output)
    out = Economy(economy.sectors + (sector,), B)
    report = check_viability(out)
    if not report.viable:
        short = [out.names[i] for i in np.flatnonzero(~report.per_commodity)]
        raise NotViableError(
            f"adding {spec.name!r} leaves too little of: {', '.join(short)}"
        )
    return out


@dataclass(frozen=True, eq=False)
class ScenarioOutcome:
    economy: Economy
    labour_scale: dict[str, float] = field(default_factory=dict)

    def labour(self, units: Units | str = Units.DOSE) -> np.ndarray | None:
        """Labour vector including labour-saving factors, or None if there are none."""
        if not self.labour_scale:
            return None
        a = labour_coefficients(self.economy, units)
        for name, g in self.labour_scale.items():
            a[self.economy.index(name)] *= g
        return a


def apply_scenarios(economy: Economy, scenarios: Iterable[Scenario]) -> ScenarioOutcome:
    """Apply transforms in order. Labour-saving factors accumulate per sector."""
    scale: dict[str, float] = {}
    for sc in scenarios:
        if sc.kind is ScenarioKind.OUTPUT_SCALING:
            economy = apply_output_scaling(economy, sc.target, sc.gamma)
        elif sc.kind is ScenarioKind.LABOUR_SAVING:
            name = economy.names[economy.index(sc.target)]
            scale[name] = scale.get(name, 1.0) * sc.g
        else:
            economy = add_sector(economy, sc.sector)
    return ScenarioOutcome(economy, scale)


@dataclass(frozen=True, eq=False)
class IncomeReport:
    names: list[str]
    incomes: np.ndarray
    per_worker: np.ndarray
    means_of_production: np.ndarray
    net_product: np.ndarray
    net_value: float


def sector_incomes(
    economy: Economy,
    prices: Sequence[float],
    R: float,
    units: Units | str = Units.DOSE,
) -> IncomeReport:
    """Profit income of each sector: ``R`` times the value of its means of production.

    Quantities are measured in ``units`` and ``prices`` must be in the same
    units. The net product is ``Y = Q - A Q``.
    """
    units = Units.coerce(units)
    p = np.asarray(prices, dtype=float)
    A = build_input_matrix(economy, units).entries
    Q = economy.doses if units is Units.DOSE else economy.outputs
    means = (p @ A) * Q
    incomes = R * means
    Y = Q - A @ Q
    return IncomeReport(
        economy.names, incomes, incomes / economy.populations, means, Y, float(p @ Y)
    )
