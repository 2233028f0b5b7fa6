"""Economy description, technical matrices, labour coefficients and basics.

Sectors are indexed in declaration order. Every vector and matrix in the
package uses that order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidEconomyError

__all__ = [
    "Units",
    "Sector",
    "Economy",
    "InputMatrix",
    "BasicsPartition",
    "build_input_matrix",
    "labour_coefficients",
    "classify_basics",
    "reachability",
]


class Units(str, enum.Enum):
    """Measurement units for quantities and prices.

    ``PHYSICAL`` measures commodity ``i`` in its own physical unit.
    ``DOSE`` measures it in individual survival doses ``F_i``.
    """

    PHYSICAL = "physical"
    DOSE = "dose"

    @classmethod
    def coerce(cls, value: "Units | str") -> "Units":
        return value if isinstance(value, cls) else cls(str(value).lower())


@dataclass(frozen=True)
class Sector:
    name: str
    population: float
    survival_dose: float
    output: float

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise InvalidEconomyError("sector name must be a non-empty string")
        for attr in ("population", "survival_dose", "output"):
            value = getattr(self, attr)
            if not np.isfinite(value):
                raise InvalidEconomyError(f"sector {self.name!r}: {attr} must be finite")
            object.__setattr__(self, attr, float(value))
        if self.population < 1:
            raise InvalidEconomyError(f"sector {self.name!r}: population must be >= 1")
        if self.survival_dose <= 0:
            raise InvalidEconomyError(f"sector {self.name!r}: survival_dose must be > 0")
        if self.output <= 0:
            raise InvalidEconomyError(f"sector {self.name!r}: output must be > 0")

    @property
    def doses(self) -> float:
        """Output counted in survival doses, ``X = Q / F``."""
        return self.output / self.survival_dose


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Economy:
    """An ordered set of sectors plus the input incidence between them.

    ``incidence[i, j]`` is True when commodity ``i`` enters the production of
    sector ``j`` (i.e. the workers of ``j`` eat food ``i``). ``None`` means
    every sector consumes every commodity.
    """

    sectors: tuple[Sector, ...]
    incidence: np.ndarray | None = None
    _full: bool = field(init=False, repr=False)

    def __post_init__(self) -> None:
        sectors = tuple(self.sectors)
        object.__setattr__(self, "sectors", sectors)
        n = len(sectors)
        if n < 2:
            raise InvalidEconomyError("an economy needs at least 2 sectors")
        names = [s.name for s in sectors]
        if len(set(names)) != n:
            dupes = sorted({x for x in names if names.count(x) > 1})
            raise InvalidEconomyError(f"duplicate sector names: {', '.join(dupes)}")

        if self.incidence is None:
            object.__setattr__(self, "_full", True)
            object.__setattr__(self, "incidence", _readonly(np.ones((n, n), dtype=bool)))
        else:
            raw = np.asarray(self.incidence)
            if raw.shape != (n, n):
                raise InvalidEconomyError(
                    f"incidence must be {n}x{n}, got shape {raw.shape}"
                )
            if not np.all((raw == 0) | (raw == 1)):
                raise InvalidEconomyError("incidence entries must be 0 or 1")
            inc = raw.astype(bool)
            empty = [names[j] for j in range(n) if not inc[:, j].any()]
            if empty:
                raise InvalidEconomyError(f"sector uses no inputs: {', '.join(empty)}")
            object.__setattr__(self, "_full", bool(inc.all()))
            object.__setattr__(self, "incidence", _readonly(inc.copy()))

        for i, s in enumerate(sectors):
            own = s.population * s.survival_dose
            if self.incidence[i, i] and s.output < own * (1.0 - 1e-12):
                raise InvalidEconomyError(
                    f"sector {s.name!r} cannot feed its own workers "
                    f"(output {s.output:g} < population*dose {own:g})"
                )

    # -- accessors -----------------------------------------------------------

    @classmethod
    def from_arrays(
        cls,
        populations: Sequence[float],
        doses: Sequence[float],
        outputs: Sequence[float],
        names: Sequence[str] | None = None,
        incidence: Sequence[Sequence[int]] | np.ndarray | None = None,
    ) -> "Economy":
        n = len(populations)
        if not (len(doses) == len(outputs) == n):
            raise InvalidEconomyError("populations, doses and outputs differ in length")
        names = list(names) if names is not None else [f"s{i + 1}" for i in range(n)]
        sectors = tuple(
            Sector(nm, N, F, Q) for nm, N, F, Q in zip(names, populations, doses, outputs)
        )
        return cls(sectors, None if incidence is None else np.asarray(incidence))

    @classmethod
    def from_doses(
        cls,
        populations: Sequence[float],
        X: Sequence[float],
        names: Sequence[str] | None = None,
        incidence: Sequence[Sequence[int]] | np.ndarray | None = None,
    ) -> "Economy":
        """Economy with unit survival doses, so outputs equal dose counts."""
        return cls.from_arrays(populations, [1.0] * len(X), X, names, incidence)

    @property
    def n(self) -> int:
        return len(self.sectors)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.sectors]

    @property
    def populations(self) -> np.ndarray:
        return np.array([s.population for s in self.sectors])

    @property
    def survival_doses(self) -> np.ndarray:
        return np.array([s.survival_dose for s in self.sectors])

    @property
    def outputs(self) -> np.ndarray:
        return np.array([s.output for s in self.sectors])

    @property
    def doses(self) -> np.ndarray:
        return self.outputs / self.survival_doses

    @property
    def total_population(self) -> float:
        return float(self.populations.sum())

    @property
    def population_shares(self) -> np.ndarray:
        N = self.populations
        return N / N.sum()

    @property
    def full_incidence(self) -> bool:
        return self._full

    def index(self, sector: str | int) -> int:
        if isinstance(sector, (int, np.integer)):
            if not 0 <= sector < self.n:
                raise InvalidEconomyError(f"sector index {sector} out of range")
            return int(sector)
        try:
            return self.names.index(sector)
        except ValueError:
            raise InvalidEconomyError(f"unknown sector {sector!r}") from None

    def consumers(self) -> np.ndarray:
        """Number of workers consuming each commodity, ``sum_j B_ij N_j``."""
        return self.incidence.astype(float) @ self.populations

    def replace_sector(self, index: int, **changes: float) -> "Economy":
        old = self.sectors[index]
        new = Sector(
            changes.get("name", old.name),
            changes.get("population", old.population),
            changes.get("survival_dose", old.survival_dose),
            changes.get("output", old.output),
        )
        sectors = list(self.sectors)
        sectors[index] = new
        return Economy(tuple(sectors), None if self._full else self.incidence)

    def to_dict(self) -> dict:
        out: dict = {
            "sectors": [
                {
                    "name": s.name,
                    "population": s.population,
                    "survival_dose": s.survival_dose,
                    "output": s.output,
                }
                for s in self.sectors
            ]
        }
        if not self._full:
            out["incidence"] = self.incidence.astype(int).tolist()
        return out


@dataclass(frozen=True, eq=False)
class InputMatrix:
    entries: np.ndarray
    units: Units

    def __post_init__(self) -> None:
        A = np.array(self.entries, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidEconomyError(f"input matrix must be square, got shape {A.shape}")
        if np.any(A < 0) or not np.all(np.isfinite(A)):
            raise InvalidEconomyError("input matrix entries must be finite and >= 0")
        object.__setattr__(self, "entries", _readonly(A))
        object.__setattr__(self, "units", Units.coerce(self.units))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BasicsPartition:
    basic: frozenset[int]
    non_basic: frozenset[int]
    # strongly connected components of the non-basic sectors, suppliers first
    non_basic_order: tuple[tuple[int, ...], ...] = ()

    @property
    def is_irreducible(self) -> bool:
        return not self.non_basic

    def basic_indices(self) -> list[int]:
        return sorted(self.basic)


def build_input_matrix(economy: Economy, units: Units | str = Units.DOSE) -> InputMatrix:
    """Technical coefficients: commodity ``i`` needed per unit output of ``j``."""
    units = Units.coerce(units)
    B = economy.incidence.astype(float)
    a = labour_coefficients(economy, units)
    if units is Units.DOSE:
        A = B * a[np.newaxis, :]
    else:
        A = B * np.outer(economy.survival_doses, a)
    return InputMatrix(A, units)


def labour_coefficients(economy: Economy, units: Units | str = Units.DOSE) -> np.ndarray:
    """Workers per unit of output, ``N_j / Q_j`` or ``N_j / X_j``."""
    units = Units.coerce(units)
    per = economy.doses if units is Units.DOSE else economy.outputs
    return economy.populations / per


def reachability(adjacency: np.ndarray) -> np.ndarray:
    """Reflexive transitive closure of a boolean adjacency matrix (Warshall)."""
    R = np.asarray(adjacency, dtype=bool).copy()
    n = R.shape[0]
    np.fill_diagonal(R, True)
    for k in range(n):
        R |= np.outer(R[:, k], R[k, :])
    return R


def classify_basics(matrix: InputMatrix | np.ndarray) -> BasicsPartition:
    """Split commodities into basics and non-basics.

    Commodity ``i`` is basic when every sector is reachable from it along
    edges ``i -> j`` with ``A_ij > 0``, i.e. it enters every production
    directly or indirectly.
    """
    A = matrix.entries if isinstance(matrix, InputMatrix) else np.asarray(matrix, float)
    n = A.shape[0]
    zero_cols = [j for j in range(n) if not np.any(A[:, j] > 0)]
    if zero_cols:
        raise InvalidEconomyError(
            "sector uses no inputs: column(s) " + ", ".join(str(j) for j in zero_cols)
        )
    reach = reachability(A > 0)
    basic = frozenset(i for i in range(n) if reach[i].all())
    non_basic = frozenset(range(n)) - basic

    comps: list[tuple[int, ...]] = []
    seen: set[int] = set()
    for i in sorted(non_basic):
        if i in seen:
            continue
        comp = tuple(j for j in sorted(non_basic) if reach[i, j] and reach[j, i])
        seen.update(comp)
        comps.append(comp)
    # a component reaching another reaches strictly more nodes, so it sorts first
    comps.sort(key=lambda c: (-int(reach[c[0]].sum()), c))
    return BasicsPartition(basic, non_basic, tuple(comps))

