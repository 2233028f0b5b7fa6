"""JSON scenario files: strict schema validation, parsing and serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .economy import Economy, Sector, Units
from .errors import EconomyError, InvalidEconomyError
from .policy import PriceVector
from .scenarios import NewSector, Scenario, ScenarioKind
from .simulation import SimMode

__all__ = [
    "SCHEMA",
    "ScenarioFileError",
    "ScenarioSyntaxError",
    "ScenarioSchemaError",
    "ScenarioInvariantError",
    "PriceSpec",
    "SimSpec",
    "ScenarioFile",
    "parse_scenario",
    "load_scenario",
]

_pos = {"type": "number", "exclusiveMinimum": 0}
_name_list = {"type": "array", "items": {"type": "string", "minLength": 1}}

_SECTOR = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "population", "survival_dose", "output"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "population": {"type": "number", "minimum": 1},
        "survival_dose": _pos,
        "output": _pos,
    },
}

_NEW_SECTOR = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "population", "survival_dose", "output"],
    "properties": {
        **_SECTOR["properties"],
        "inputs": _name_list,
        "used_by": _name_list,
        "self_use": {"type": "boolean"},
    },
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["economy"],
    "properties": {
        "description": {"type": "string"},
        "economy": {
            "type": "object",
            "additionalProperties": False,
            "required": ["sectors"],
            "properties": {
                "sectors": {"type": "array", "minItems": 2, "items": _SECTOR},
                "incidence": {
                    "type": "array",
                    "items": {"type": "array", "items": {"enum": [0, 1]}},
                },
            },
        },
        "prices": {
            "type": "object",
            "additionalProperties": False,
            "required": ["values"],
            "properties": {
                "values": {"type": "array", "items": _pos},
                "grid": {"type": "array", "items": {"type": "array", "items": _pos}},
                "units": {"enum": ["physical", "dose"]},
                "numeraire": {"type": ["string", "null"]},
            },
        },
        "scenarios": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": [k.value for k in ScenarioKind]},
                    "target": {"type": "string"},
                    "gamma": {"type": "number", "minimum": 1},
                    "g": {"type": "number", "minimum": 0, "maximum": 1},
                    "sector": _NEW_SECTOR,
                },
            },
        },
        "sim": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mode", "periods", "savings"],
            "properties": {
                "mode": {"enum": [m.value for m in SimMode]},
                "periods": {"type": "integer", "minimum": 1},
                "savings": {"type": "array", "items": {"type": "number", "minimum": 0}},
            },
        },
        "net_product": {"type": "array", "items": {"type": "number", "minimum": 0}},
    },
}


class ScenarioFileError(Exception):
    exit_code = 1


class ScenarioSyntaxError(ScenarioFileError):
    exit_code = 3


class ScenarioSchemaError(ScenarioFileError):
    exit_code = 4


class ScenarioInvariantError(ScenarioFileError):
    exit_code = 5


@dataclass(frozen=True)
class PriceSpec:
    values: tuple[float, ...]
    units: Units = Units.PHYSICAL
    numeraire: str | None = None
    grid: tuple[tuple[float, ...], ...] = ()

    def vectors(self, economy: Economy) -> list[PriceVector]:
        """The main price vector followed by any grid vectors, in file order."""
        return [
            PriceVector.from_values(economy, v, self.units, self.numeraire)
            for v in (self.values, *self.grid)
        ]


@dataclass(frozen=True)
class SimSpec:
    mode: SimMode
    periods: int
    savings: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class ScenarioFile:
    economy: Economy
    prices: PriceSpec | None = None
    scenarios: tuple[Scenario, ...] = ()
    sim: SimSpec | None = None
    net_product: tuple[float, ...] | None = None
    description: str | None = None
    source: str | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out: dict = {"economy": self.economy.to_dict()}
        if self.description is not None:
            out["description"] = self.description
        if self.prices is not None:
            pr: dict = {"values": list(self.prices.values), "units": self.prices.units.value}
            if self.prices.numeraire is not None:
                pr["numeraire"] = self.prices.numeraire
            if self.prices.grid:
                pr["grid"] = [list(v) for v in self.prices.grid]
            out["prices"] = pr
        if self.scenarios:
            out["scenarios"] = [_scenario_to_dict(s) for s in self.scenarios]
        if self.sim is not None:
            out["sim"] = {
                "mode": self.sim.mode.value,
                "periods": self.sim.periods,
                "savings": list(self.sim.savings),
            }
        if self.net_product is not None:
            out["net_product"] = list(self.net_product)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _scenario_to_dict(sc: Scenario) -> dict:
    out: dict = {"kind": sc.kind.value}
    if sc.target is not None:
        out["target"] = sc.target
    if sc.gamma is not None:
        out["gamma"] = sc.gamma
    if sc.g is not None:
        out["g"] = sc.g
    if sc.sector is not None:
        s = sc.sector
        d: dict = {
            "name": s.name,
            "population": s.population,
            "survival_dose": s.survival_dose,
            "output": s.output,
            "used_by": list(s.used_by),
            "self_use": s.self_use,
        }
        if s.inputs is not None:
            d["inputs"] = list(s.inputs)
        out["sector"] = d
    return out


def _pointer(path) -> str:
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else part)
    return out or "<root>"


def _reject_nonfinite(token: str) -> float:
    raise ValueError(f"non-finite number {token} not allowed")


def parse_scenario(text: str | bytes, source: str | None = None) -> ScenarioFile:
    """Parse and validate a scenario document.

    Raises :class:`ScenarioSyntaxError` for malformed JSON,
    :class:`ScenarioSchemaError` for schema violations and
    :class:`ScenarioInvariantError` when the content describes an invalid
    economy.
    """
    where = f"{source}: " if source else ""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioSyntaxError(f"{where}not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(text, parse_constant=_reject_nonfinite)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(
            f"{where}line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    except ValueError as exc:
        raise ScenarioSyntaxError(f"{where}{exc}") from None

    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ScenarioSchemaError(f"{where}{_pointer(err.absolute_path)}: {err.message}")

    try:
        return _build(doc, source)
    except (EconomyError, ValueError) as exc:
        raise ScenarioInvariantError(f"{where}{exc}") from None


def load_scenario(path: str | Path) -> ScenarioFile:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ScenarioFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(data, str(path))


def _build(doc: dict, source: str | None) -> ScenarioFile:
    eco = doc["economy"]
    sectors = tuple(
        Sector(s["name"], s["population"], s["survival_dose"], s["output"])
        for s in eco["sectors"]
    )
    incidence = eco.get("incidence")
    economy = Economy(sectors, None if incidence is None else np.array(incidence))
    n = economy.n

    prices = None
    if "prices" in doc:
        pr = doc["prices"]
        vectors = [pr["values"], *pr.get("grid", [])]
        for k, v in enumerate(vectors):
            if len(v) != n:
                label = "prices.values" if k == 0 else f"prices.grid[{k - 1}]"
                raise InvalidEconomyError(f"{label}: expected {n} prices, got {len(v)}")
        numeraire = pr.get("numeraire")
        if numeraire is not None:
            economy.index(numeraire)
        prices = PriceSpec(
            tuple(float(x) for x in pr["values"]),
            Units(pr.get("units", "physical")),
            numeraire,
            tuple(tuple(float(x) for x in v) for v in pr.get("grid", [])),
        )

    scenarios = []
    for k, sc in enumerate(doc.get("scenarios", [])):
        sec = sc.get("sector")
        spec = None
        if sec is not None:
            spec = NewSector(
                sec["name"],
                float(sec["population"]),
                float(sec["survival_dose"]),
                float(sec["output"]),
                tuple(sec["inputs"]) if "inputs" in sec else None,
                tuple(sec.get("used_by", ())),
                bool(sec.get("self_use", True)),
            )
        try:
            scenarios.append(
                Scenario(sc["kind"], sc.get("target"), sc.get("gamma"), sc.get("g"), spec)
            )
        except InvalidEconomyError as exc:
            raise InvalidEconomyError(f"scenarios[{k}]: {exc}") from None

    sim = None
    if "sim" in doc:
        s = doc["sim"]
        if len(s["savings"]) != n:
            raise InvalidEconomyError(f"sim.savings: expected {n} entries")
        sim = SimSpec(SimMode(s["mode"]), int(s["periods"]), tuple(float(x) for x in s["savings"]))

    net = doc.get("net_product")
    if net is not None:
        if len(net) != n:
            raise InvalidEconomyError(f"net_product: expected {n} entries")
        net = tuple(float(x) for x in net)
        if not all(math.isfinite(x) for x in net):
            raise InvalidEconomyError("net_product: entries must be finite")

    return ScenarioFile(
        economy, prices, tuple(scenarios), sim, net, doc.get("description"), source
    )
