"""``econ`` command line interface.

Every subcommand reads a scenario file and prints either an aligned text
table or, with ``--json``, a deterministic JSON document. Exit codes: 0 for a
feasible or steady verdict, 2 for an infeasible or collapsed one, 1 for usage
and I/O errors, 3/4/5 for syntax, schema and economy-invariant errors in the
scenario file.
"""

from __future__ import annotations

import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable

import click
import numpy as np

from .economy import Economy, Units, build_input_matrix, classify_basics
from .errors import EconomyError, InvalidEconomyError
from .natural import natural_prices, quantity_system, wage_profit_sweep
from .policy import (
    FEAS_EPS,
    check_price_feasibility,
    check_viability,
    dose_value_ratio,
    macro_identity_residual,
    sector_profit_rates,
    surplus_rates,
    two_sector_band,
)
from .scenario_file import ScenarioFile, ScenarioFileError, load_scenario
from .scenarios import apply_scenarios, sector_incomes
from .simulation import SimConfig, simulate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERDICT = 2
EXIT_INVARIANT = 5

# values closer to zero than this print as 0 so goldens do not depend on rounding noise
ZERO_CUTOFF = 1e-10


@dataclass
class Ctx:
    scenario: ScenarioFile
    units: Units
    numeraire: str | None
    tol: float
    as_json: bool

    @property
    def economy(self) -> Economy:
        return self.scenario.economy

    def numeraire_index(self, economy: Economy | None = None) -> int:
        eco = economy or self.economy
        if self.numeraire is not None:
            return eco.index(self.numeraire)
        if self.scenario.prices is not None and self.scenario.prices.numeraire:
            return eco.index(self.scenario.prices.numeraire)
        return 0

    def price_vectors(self):
        spec = self.scenario.prices
        if spec is None:
            raise click.UsageError("this command needs a 'prices' block in the scenario file")
        return spec.vectors(self.economy)


def clean(obj: Any) -> Any:
    """Round floats to 12 significant digits, recursively."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return None
        if abs(x) < ZERO_CUTOFF:
            return 0.0
        return float(f"{x:.12g}")
    return obj


def dumps(report: dict) -> str:
    return json.dumps(clean(report), sort_keys=True, indent=2) + "\n"


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        if abs(x) < ZERO_CUTOFF:
            x = 0.0
        return f"{x:.6g}"
    return str(x)


def table(headers: list[str], rows: list[list[Any]]) -> str:
    cells = [headers] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = []
    for n, r in enumerate(cells):
        lines.append("  ".join(c.rjust(w) if n and _numeric(c) else c.ljust(w)
                               for c, w in zip(r, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _numeric(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _kv(pairs: list[tuple[str, Any]]) -> str:
    w = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(w)}  {_fmt(v)}\n" for k, v in pairs)


# -- command bodies -------------------------------------------------------------
# each returns (report dict, text rendering, ok flag)


def cmd_viability(ctx: Ctx):
    eco = ctx.economy
    rep = check_viability(eco)
    s = surplus_rates(eco) if rep.viable else [None] * eco.n
    sectors = [
        {"name": nm, "viable": bool(ok), "margin": float(m), "surplus_rate": sr}
        for nm, ok, m, sr in zip(eco.names, rep.per_commodity, rep.margins, s)
    ]
    report = {"command": "viability", "viable": rep.viable, "sectors": sectors}
    text = table(
        ["sector", "margin", "surplus_rate", "viable"],
        [[d["name"], d["margin"], "-" if d["surplus_rate"] is None else float(d["surplus_rate"]),
          "yes" if d["viable"] else "NO"] for d in sectors],
    ) + f"\nviable: {'yes' if rep.viable else 'no'}\n"
    return report, text, rep.viable


def cmd_band(ctx: Ctx):
    if ctx.economy.n != 2:
        raise click.UsageError(f"band needs a 2-sector economy, got {ctx.economy.n} sectors")
    band = two_sector_band(ctx.economy)
    report: dict = {"command": "band", "lower": band.lower, "upper": band.upper}
    text = f"admissible p2*F2/(p1*F1): [{band.lower:.12g}, {band.upper:.12g}]\n"
    ok = True
    if ctx.scenario.prices is not None:
        checks = []
        for pv in ctx.price_vectors():
            rho = dose_value_ratio(ctx.economy, pv)
            inside = band.contains(rho, ctx.tol)
            ok &= inside
            checks.append({"rho": rho, "inside": inside})
            text += f"rho = {rho:.12g}: {'inside' if inside else 'OUTSIDE'}\n"
        report["prices"] = checks
    return report, text, ok


def cmd_feasible(ctx: Ctx):
    eco = ctx.economy
    results = []
    text = ""
    ok = True
    for k, pv in enumerate(ctx.price_vectors()):
        rep = check_price_feasibility(eco, pv, ctx.tol)
        ok &= rep.feasible
        sectors = [
            {"name": nm, "price": p, "slack": sl, "min_price": mp, "status": st}
            for nm, p, sl, mp, st in zip(
                eco.names, pv.prices, rep.slack, rep.min_prices, rep.status
            )
        ]
        entry: dict = {
            "feasible": rep.feasible,
            "cost_per_worker": rep.cost_per_worker,
            "starving": rep.starving,
            "sectors": sectors,
        }
        if eco.n == 2:
            entry["rho"] = dose_value_ratio(eco, pv)
        results.append(entry)
        text += f"price vector {k + 1}: {'feasible' if rep.feasible else 'INFEASIBLE'}"
        text += f" (M = {rep.cost_per_worker:.6g})\n"
        text += table(
            ["sector", "price", "slack", "min_price", "status"],
            [[d["name"], float(d["price"]), float(d["slack"]), float(d["min_price"]), d["status"]]
             for d in sectors],
        )
        if rep.starving:
            text += f"starving: {', '.join(rep.starving)}\n"
        text += "\n"
    return {"command": "feasible", "feasible": ok, "results": results}, text, ok


def cmd_rates(ctx: Ctx):
    eco = ctx.economy
    results = []
    text = ""
    ok = True
    for k, pv in enumerate(ctx.price_vectors()):
        rates = sector_profit_rates(eco, pv)
        entry: dict = {
            "sectors": [
                {"name": nm, "r": r, "s": s, "destroyed": bool(d)}
                for nm, r, s, d in zip(eco.names, rates.r, rates.s, rates.destroyed)
            ]
        }
        if eco.full_incidence:
            entry["macro_residual"] = macro_identity_residual(eco, rates)
            entry["macro_residual_costs"] = macro_identity_residual(eco, rates, "costs")
        ok &= not rates.destroyed.any()
        results.append(entry)
        text += f"price vector {k + 1}\n" + table(
            ["sector", "r", "s", "destroyed"],
            [[d["name"], float(d["r"]), float(d["s"]), "YES" if d["destroyed"] else "no"]
             for d in entry["sectors"]],
        )
        if "macro_residual" in entry:
            text += f"macro identity residual: {entry['macro_residual']:.3g}\n"
        text += "\n"
    return {"command": "rates", "results": results}, text, ok


def _natural_report(eco: Economy, ctx: Ctx) -> tuple[dict, str, Any]:
    k = ctx.numeraire_index(eco)
    sol = natural_prices(eco, ctx.units, k)
    part = classify_basics(build_input_matrix(eco, ctx.units))
    report = {
        "method": sol.method,
        "units": ctx.units.value,
        "numeraire": eco.names[k],
        "lambda": sol.lam,
        "R": sol.R,
        "prices": dict(zip(eco.names, sol.prices)),
        "basic": [eco.names[i] for i in sorted(part.basic)],
        "non_basic": [eco.names[i] for i in sorted(part.non_basic)],
        "residual": sol.residual,
    }
    text = _kv([("method", sol.method), ("units", ctx.units.value),
                ("numeraire", eco.names[k]), ("lambda", sol.lam), ("R", sol.R)])
    text += "\n" + table(
        ["sector", "price", "class"],
        [[nm, float(p), "basic" if i in part.basic else "non-basic"]
         for i, (nm, p) in enumerate(zip(eco.names, sol.prices))],
    )
    return report, text, sol


def cmd_natural(ctx: Ctx):
    report, text, _ = _natural_report(ctx.economy, ctx)
    report["command"] = "natural"
    return report, text, True


def _parse_grid(spec: str | None, R: float) -> list[float]:
    if spec is None:
        return [float(x) for x in np.linspace(0.0, R, 5)]
    parts = spec.split(":")
    if len(parts) != 3:
        raise click.BadParameter("expected a:b:n", param_hint="--r-grid")

    def bound(s: str) -> float:
        return R if s.strip().upper() == "R" else float(s)

    try:
        a, b, n = bound(parts[0]), bound(parts[1]), int(parts[2])
    except ValueError:
        raise click.BadParameter(f"cannot parse {spec!r}", param_hint="--r-grid") from None
    if n < 1:
        raise click.BadParameter("n must be >= 1", param_hint="--r-grid")
    return [float(x) for x in np.linspace(a, b, n)] if n > 1 else [a]


def cmd_distribution(ctx: Ctx, r_grid: str | None = None, labour=None, eco=None):
    eco = eco or ctx.economy
    k = ctx.numeraire_index(eco)
    R = natural_prices(eco, ctx.units, k).R
    grid = _parse_grid(r_grid, R)
    sols = wage_profit_sweep(eco, grid, ctx.units, k, labour)
    rows = [{"r": s.r, "w": s.w, "prices": dict(zip(eco.names, s.prices))} for s in sols]
    report = {"command": "distribution", "R": R, "units": ctx.units.value,
              "numeraire": eco.names[k], "points": rows}
    text = f"R = {R:.6g}\n" + table(
        ["r", "w", *eco.names], [[s.r, s.w, *map(float, s.prices)] for s in sols]
    )
    return report, text, True


def cmd_scenario(ctx: Ctx, r_grid: str | None = None):
    base = ctx.economy
    outcome = apply_scenarios(base, ctx.scenario.scenarios)
    eco = outcome.economy
    report, text, sol = _natural_report(eco, ctx)
    inc = sector_incomes(eco, sol.prices, sol.R, ctx.units)
    report.update(
        command="scenario",
        applied=[s.kind.value for s in ctx.scenario.scenarios],
        economy=eco.to_dict(),
        incomes=[
            {"name": nm, "income": i, "per_worker": pw, "means_of_production": m}
            for nm, i, pw, m in zip(eco.names, inc.incomes, inc.per_worker,
                                    inc.means_of_production)
        ],
        net_product=dict(zip(eco.names, inc.net_product)),
        net_value=inc.net_value,
        total_income=float(inc.incomes.sum()),
    )
    text = "scenarios: " + (", ".join(report["applied"]) or "(none)") + "\n" + text
    text += "\n" + table(
        ["sector", "income", "per_worker", "net_product"],
        [[nm, float(i), float(pw), float(y)]
         for nm, i, pw, y in zip(eco.names, inc.incomes, inc.per_worker, inc.net_product)],
    )
    text += f"\nnet product value p.Y = {inc.net_value:.6g}\n"
    labour = outcome.labour(ctx.units)
    if labour is not None:
        dist, dtext, _ = cmd_distribution(ctx, r_grid, labour, eco)
        report["labour_scale"] = outcome.labour_scale
        report["distribution"] = dist["points"]
        text += "\nwith labour-saving technique\n" + dtext
    return report, text, True


def cmd_simulate(ctx: Ctx, csv_out: bool = False):
    spec = ctx.scenario.sim
    if spec is None:
        raise click.UsageError("this command needs a 'sim' block in the scenario file")
    pv = ctx.price_vectors()[0]
    traj = simulate(ctx.economy, SimConfig(spec.mode, spec.periods, spec.savings, pv, ctx.tol))
    report = {"command": "simulate", **traj.to_dict(), "viable": traj.viable,
              "note": "collapsed sectors stop trading from the next period on"}
    text = traj.to_csv()
    if not csv_out:
        text += f"\noutcome: {traj.outcome}\n"
        for e in traj.events:
            text += f"collapse: {e.sector} in period {e.period}\n"
    return report, text, traj.outcome == "steady"


def cmd_quantities(ctx: Ctx):
    eco = ctx.economy
    A = build_input_matrix(eco, ctx.units)
    if ctx.scenario.net_product is not None:
        Y = np.array(ctx.scenario.net_product)
    else:
        Q0 = eco.doses if ctx.units is Units.DOSE else eco.outputs
        Y = Q0 - A.entries @ Q0
    sol = quantity_system(A, Y)
    report = {
        "command": "quantities",
        "units": ctx.units.value,
        "net_product": dict(zip(eco.names, Y)),
        "gross_output": dict(zip(eco.names, sol.quantities)),
        "residual": sol.residual,
        "feasible": sol.feasible,
    }
    text = table(
        ["sector", "net_product", "gross_output"],
        [[nm, float(y), float(q)] for nm, y, q in zip(eco.names, Y, sol.quantities)],
    ) + f"\nresidual: {sol.residual:.3g}\n"
    return report, text, sol.feasible


# -- click wiring ---------------------------------------------------------------


def _default_tol() -> float:
    env = os.environ.get("ECON_TOL")
    if env is None:
        return FEAS_EPS
    try:
        return float(env)
    except ValueError:
        raise click.BadParameter(f"ECON_TOL={env!r} is not a number") from None


def _emit_error(as_json: bool, code: str, message: str) -> None:
    if as_json:
        click.echo(dumps({"error": {"code": code, "message": message}}), nl=False)
    else:
        click.echo(f"error: {message}", err=True)


def _run(body: Callable, path: str, as_json: bool, numeraire: str | None,
         physical: bool, tol: float | None, **extra) -> None:
    try:
        scenario = load_scenario(path)
    except ScenarioFileError as exc:
        _emit_error(as_json, type(exc).__name__, str(exc))
        sys.exit(exc.exit_code)
    ctx = Ctx(
        scenario,
        Units.PHYSICAL if physical else Units.DOSE,
        numeraire,
        _default_tol() if tol is None else tol,
        as_json,
    )
    try:
        report, text, ok = body(ctx, **extra)
    except InvalidEconomyError as exc:
        _emit_error(as_json, type(exc).__name__, str(exc))
        sys.exit(EXIT_INVARIANT)
    except EconomyError as exc:
        _emit_error(as_json, type(exc).__name__, str(exc))
        sys.exit(EXIT_VERDICT)
    click.echo(dumps(report) if as_json else text, nl=False)
    sys.exit(EXIT_OK if ok else EXIT_VERDICT)


def _common(f):
    f = click.argument("file", type=click.Path(dir_okay=False))(f)
    f = click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a table.")(f)
    f = click.option("--numeraire", default=None, metavar="SECTOR",
                     help="Sector whose price is fixed at 1.")(f)
    f = click.option("--physical", is_flag=True,
                     help="Report in physical units instead of survival doses.")(f)
    f = click.option("--tol", type=float, default=None,
                     help="Relative feasibility tolerance (env ECON_TOL).")(f)
    return f


class _Group(click.Group):
    """Maps click's usage errors (exit 2 by default) to exit code 1."""

    def main(self, args=None, prog_name=None, complete_var=None,
             standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as exc:
            exc.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


@click.group(cls=_Group, context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Analyse a pure labour production economy described by a JSON scenario file."""


def _register(name: str, body: Callable, help_text: str, extra_opts=()):
    def command(file, as_json, numeraire, physical, tol, **extra):
        _run(body, file, as_json, numeraire, physical, tol, **extra)

    command.__doc__ = help_text
    command.__name__ = f"cmd_{name}"
    for opt in extra_opts:
        command = opt(command)
    main.command(name)(_common(command))


_r_grid = click.option("--r-grid", "r_grid", default=None, metavar="a:b:n",
                       help="Profit-rate grid; 'R' stands for the maximum rate.")

_register("viability", cmd_viability, "Check that every commodity feeds all its consumers.")
_register("band", cmd_band, "Admissible dose-value price ratio for a two-sector economy.")
_register("feasible", cmd_feasible, "Test price vectors against the survival budget constraints.")
_register("rates", cmd_rates, "Sectoral profit rates under exogenous prices.")
_register("natural", cmd_natural, "Natural prices and the maximum profit rate.")
_register("distribution", cmd_distribution, "Prices and wage along the wage-profit frontier.",
          [_r_grid])
_register("scenario", cmd_scenario, "Apply scenario transforms, re-solve, report incomes.",
          [_r_grid])
_register("simulate", cmd_simulate, "Run the exchange simulation; CSV trajectory.",
          [click.option("--csv", "csv_out", is_flag=True, help="Print only the CSV ledger.")])
_register("quantities", cmd_quantities, "Gross outputs needed for a net product.")


if __name__ == "__main__":  # pragma: no cover
    main()
