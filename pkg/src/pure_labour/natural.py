"""Natural prices and the uniform profit rate.

Prices are left eigenvectors of the technical matrix,

    p . A (1 + r) = p,

so the maximum profit rate is ``R = 1/lambda - 1`` with ``lambda`` the Perron
root. With wages the system becomes ``p . A (1 + r) + a w = p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .economy import (
    Economy,
    InputMatrix,
    Units,
    build_input_matrix,
    classify_basics,
    labour_coefficients,
)
from .errors import (
    ConvergenceError,
    InvalidEconomyError,
    NonBasicInfeasibleError,
    NotViableError,
    ProfitRateError,
    SingularSystemError,
)

__all__ = [
    "EIGEN_TOL",
    "MAX_ITER",
    "SHIFT",
    "EigenSolution",
    "DistributionSolution",
    "QuantitySolution",
    "perron_left_eigen",
    "natural_prices_pure_labour",
    "solve_reducible",
    "natural_prices",
    "wage_profit_prices",
    "wage_profit_sweep",
    "vertically_integrated_labour",
    "quantity_system",
]

EIGEN_TOL = 1e-12
MAX_ITER = 1_000_000
# added to the diagonal so periodic matrices become primitive
SHIFT = 1e-3
# Leontief-type systems with a condition number beyond this are treated as singular
COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class EigenSolution:
    lam: float
    prices: np.ndarray
    R: float
    iterations: int
    residual: float
    numeraire: int = 0
    basic: tuple[int, ...] = field(default=())
    method: str = "power"

    @property
    def max_profit_rate(self) -> float:
        return self.R


@dataclass(frozen=True, eq=False)
class DistributionSolution:
    r: float
    w: float
    prices: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class QuantitySolution:
    quantities: np.ndarray
    residual: float

    @property
    def feasible(self) -> bool:
        return bool(np.all(self.quantities >= -1e-12 * max(1.0, np.abs(self.quantities).max())))


def _entries(matrix: InputMatrix | np.ndarray) -> np.ndarray:
    if isinstance(matrix, InputMatrix):
        return matrix.entries
    return InputMatrix(matrix, Units.DOSE).entries


def _eigen_residual(A: np.ndarray, p: np.ndarray, lam: float) -> float:
    return float(np.max(np.abs(p @ A - lam * p)) / np.max(np.abs(p)))


def perron_left_eigen(
    matrix: InputMatrix | np.ndarray,
    tol: float = EIGEN_TOL,
    max_iter: int = MAX_ITER,
    numeraire: int = 0,
    shift: float = SHIFT,
) -> EigenSolution:
    """Perron root and positive left eigenvector by shifted power iteration.

    Iterates ``x <- x (A + shift I)`` from the all-ones vector, renormalizing
    so ``x[numeraire] == 1``, until successive iterates differ by at most
    ``tol`` in the sup norm.
    """
    A = np.ascontiguousarray(_entries(matrix), dtype=np.float64)
    if not np.any(A > 0):
        raise InvalidEconomyError("zero matrix has no Perron eigenvector")
    n = A.shape[0]
    if not 0 <= numeraire < n:
        raise InvalidEconomyError(f"numeraire index {numeraire} out of range")
    x, iterations, converged = _kernels.power_iterate(A, shift, tol, max_iter, numeraire)
    if not converged:
        if iterations < max_iter:
            raise ConvergenceError(
                "numeraire component vanished; restrict to the basic block first"
            )
        raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")
    x = np.asarray(x, dtype=float)
    lam = float((x @ A).sum() / x.sum())
    R = 1.0 / lam - 1.0 if lam > 0 else np.inf
    return EigenSolution(
        lam, x, R, int(iterations), _eigen_residual(A, x, lam), numeraire, tuple(range(n))
    )


def natural_prices_pure_labour(
    economy: Economy, units: Units | str = Units.DOSE, numeraire: int | str = 0
) -> EigenSolution:
    """Closed form for full incidence: prices proportional to labour coefficients."""
    if not economy.full_incidence:
        raise InvalidEconomyError("closed form needs full incidence; use solve_reducible")
    units = Units.coerce(units)
    k = economy.index(numeraire)
    a = labour_coefficients(economy, units)
    if units is Units.DOSE:
        lam = float(a.sum())
    else:
        lam = float(a @ economy.survival_doses)
    if lam > 1.0 + 1e-12:
        raise NotViableError(f"Perron root {lam:.6g} exceeds 1: no nonnegative profit rate")
    p = a / a[k]
    A = build_input_matrix(economy, units).entries
    return EigenSolution(
        lam, p, 1.0 / lam - 1.0, 0, _eigen_residual(A, p, lam), k,
        tuple(range(economy.n)), "closed-form",
    )


def solve_reducible(
    economy: Economy,
    units: Units | str = Units.DOSE,
    numeraire: int | str = 0,
    tol: float = EIGEN_TOL,
    max_iter: int = MAX_ITER,
) -> EigenSolution:
    """Natural prices for a possibly reducible system.

    The profit rate and basic prices come from the basic block alone; each
    non-basic block is then priced from its own equations, suppliers first.
    """
    units = Units.coerce(units)
    k = economy.index(numeraire)
    A = build_input_matrix(economy, units).entries
    part = classify_basics(A)
    if not part.basic:
        raise InvalidEconomyError("economy has no basic commodity")
    b = part.basic_indices()
    sub = A[np.ix_(b, b)]
    k_b = b.index(k) if k in part.basic else 0
    eig = perron_left_eigen(sub, tol, max_iter, k_b)
    if eig.lam > 1.0 + 1e-12:
        raise NotViableError(
            f"Perron root {eig.lam:.6g} of the basic block exceeds 1"
        )
    R = eig.R
    p = np.zeros(economy.n)
    p[b] = eig.prices
    priced = list(b)
    for comp in part.non_basic_order:
        c = list(comp)
        rhs = (1 + R) * (p[priced] @ A[np.ix_(priced, c)])
        own = (1 + R) * A[np.ix_(c, c)]
        names = [economy.names[i] for i in c]
        if len(c) == 1:
            denom = 1.0 - own[0, 0]
            if denom <= 1e-12:
                raise NonBasicInfeasibleError(
                    names,
                    f"non-basic infeasible: {names[0]} output net of own use "
                    f"cannot cover profit rate R={R:.6g}",
                )
            pc = rhs / denom
        else:
            if np.max(np.abs(np.linalg.eigvals(own))) >= 1.0 - 1e-12:
                raise NonBasicInfeasibleError(names)
            pc = np.linalg.solve((np.eye(len(c)) - own).T, rhs)
            if np.any(pc <= 0):
                raise NonBasicInfeasibleError(names)
        p[c] = pc
        priced.extend(c)
    p = p / p[k]
    lam = eig.lam
    return EigenSolution(
        lam, p, R, eig.iterations, _eigen_residual(A, p, lam), k, tuple(b), "reducible"
    )


def natural_prices(
    economy: Economy,
    units: Units | str = Units.DOSE,
    numeraire: int | str = 0,
    tol: float = EIGEN_TOL,
    max_iter: int = MAX_ITER,
) -> EigenSolution:
    """Closed form under full incidence, the reducible solver otherwise."""
    if economy.full_incidence:
        return natural_prices_pure_labour(economy, units, numeraire)
    return solve_reducible(economy, units, numeraire, tol, max_iter)


def wage_profit_prices(
    economy: Economy,
    r: float,
    units: Units | str = Units.DOSE,
    numeraire: int | str = 0,
    labour: Sequence[float] | None = None,
    eigen: EigenSolution | None = None,
) -> DistributionSolution:
    """Prices and wage at profit rate ``r`` with the numeraire price fixed at 1.

    ``labour`` overrides the labour coefficient vector (e.g. a labour-saving
    technique); the technical matrix is unaffected.
    """
    units = Units.coerce(units)
    k = economy.index(numeraire)
    eig = eigen if eigen is not None else natural_prices(economy, units, k)
    R = eig.R
    if not (-1e-12 <= r <= R + 1e-12):
        raise ProfitRateError(f"profit rate {r:g} outside [0, R={R:.6g}]")
    A = build_input_matrix(economy, units).entries
    a = labour_coefficients(economy, units) if labour is None else np.asarray(labour, float)
    if a.shape != (economy.n,) or np.any(a < 0):
        raise InvalidEconomyError("labour vector must be nonnegative, one entry per sector")
    if abs(r - R) <= 1e-12:
        p = eig.prices / eig.prices[k]
        res = float(np.max(np.abs(p @ A * (1 + R) - p)) / np.max(np.abs(p)))
        return DistributionSolution(R, 0.0, p, res)

    n = economy.n
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = (np.eye(n) - (1 + r) * A).T
    M[:n, n] = -a
    M[n, k] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    if np.linalg.cond(M) > COND_LIMIT:
        raise SingularSystemError(f"price system singular at r={r:g}")
    sol = np.linalg.solve(M, rhs)
    p, w = sol[:n], float(sol[n])
    res = float(np.max(np.abs(p @ A * (1 + r) + a * w - p)) / np.max(np.abs(p)))
    return DistributionSolution(float(r), w, p, res)


def wage_profit_sweep(
    economy: Economy,
    rates: Sequence[float],
    units: Units | str = Units.DOSE,
    numeraire: int | str = 0,
    labour: Sequence[float] | None = None,
) -> list[DistributionSolution]:
    eig = natural_prices(economy, units, numeraire)
    return [
        wage_profit_prices(economy, r, units, numeraire, labour, eig) for r in rates
    ]


def vertically_integrated_labour(
    matrix: InputMatrix | np.ndarray, a: Sequence[float]
) -> np.ndarray:
    """Direct plus indirect labour per unit of net output, ``a (I - A)^-1``."""
    A = _entries(matrix)
    L = np.eye(A.shape[0]) - A
    if np.linalg.cond(L) > COND_LIMIT:
        raise SingularSystemError("I - A is singular (zero surplus)")
    return np.linalg.solve(L.T, np.asarray(a, dtype=float))


def quantity_system(
    matrix: InputMatrix | np.ndarray, surplus: Sequence[float]
) -> QuantitySolution:
    """Gross outputs ``Q`` with ``A Q + Y = Q`` for a net product ``Y``."""
    A = _entries(matrix)
    Y = np.asarray(surplus, dtype=float)
    if Y.shape != (A.shape[0],):
        raise InvalidEconomyError(f"net product must have {A.shape[0]} entries")
    if np.any(Y < 0):
        raise InvalidEconomyError("net product must be nonnegative")
    L = np.eye(A.shape[0]) - A
    if np.linalg.cond(L) > COND_LIMIT:
        raise SingularSystemError("I - A is singular (zero surplus)")
    Q = np.linalg.solve(L, Y)
    return QuantitySolution(Q, float(np.max(np.abs(A @ Q + Y - Q))))
