"""Pure labour production economy.

Viability and price feasibility, natural prices and the maximum profit rate,
scenario transforms and a period-by-period exchange simulation.
"""

from ._kernels import BACKEND
from .economy import Economy, InputMatrix, Sector, Units, build_input_matrix, classify_basics
from .errors import (
    ConvergenceError,
    EconomyError,
    InvalidEconomyError,
    NonBasicInfeasibleError,
    NotViableError,
    ProfitRateError,
    SingularSystemError,
)
from .natural import (
    natural_prices,
    perron_left_eigen,
    quantity_system,
    solve_reducible,
    vertically_integrated_labour,
    wage_profit_prices,
)
from .policy import (
    PriceVector,
    check_price_feasibility,
    check_viability,
    macro_identity_residual,
    policy_prices_r_eq_s,
    sector_profit_rates,
    surplus_rates,
    two_sector_band,
)
from .scenario_file import load_scenario, parse_scenario
from .scenarios import NewSector, Scenario, apply_scenarios, sector_incomes
from .simulation import SimConfig, SimMode, simulate, time_to_collapse

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Economy",
    "InputMatrix",
    "Sector",
    "Units",
    "build_input_matrix",
    "classify_basics",
    "ConvergenceError",
    "EconomyError",
    "InvalidEconomyError",
    "NonBasicInfeasibleError",
    "NotViableError",
    "ProfitRateError",
    "SingularSystemError",
    "natural_prices",
    "perron_left_eigen",
    "quantity_system",
    "solve_reducible",
    "vertically_integrated_labour",
    "wage_profit_prices",
    "PriceVector",
    "check_price_feasibility",
    "check_viability",
    "macro_identity_residual",
    "policy_prices_r_eq_s",
    "sector_profit_rates",
    "surplus_rates",
    "two_sector_band",
    "load_scenario",
    "parse_scenario",
    "NewSector",
    "Scenario",
    "apply_scenarios",
    "sector_incomes",
    "SimConfig",
    "SimMode",
    "simulate",
    "time_to_collapse",
]
