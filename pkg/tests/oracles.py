"""Independent reference computations used only by the tests.

None of these share code paths with the package: they use boolean matrix
powers, characteristic polynomials, truncated Neumann series and a plain
per-period ledger written from the rules directly.
"""

from __future__ import annotations

import math

import numpy as np


def reach_by_powers(A: np.ndarray) -> np.ndarray:
    """Reflexive reachability as OR of boolean powers A^0 .. A^n."""
    n = A.shape[0]
    adj = (np.asarray(A) > 0).astype(int)
    reach = np.eye(n, dtype=int)
    power = np.eye(n, dtype=int)
    for _ in range(n):
        power = np.minimum(power @ adj, 1)
        reach = np.maximum(reach, power)
    return reach.astype(bool)


def basics_by_powers(A: np.ndarray) -> set[int]:
    reach = reach_by_powers(A)
    return {i for i in range(A.shape[0]) if reach[i].all()}


def perron_root_charpoly(A: np.ndarray) -> float:
    """Largest real root of det(lambda I - A) for 2x2 and 3x3 matrices."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n == 2:
        tr = A[0, 0] + A[1, 1]
        det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        return (tr + math.sqrt(max(tr * tr - 4 * det, 0.0))) / 2
    if n != 3:
        raise ValueError("oracle covers 2x2 and 3x3 only")
    tr = A[0, 0] + A[1, 1] + A[2, 2]
    minors = (
        A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        + A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
        + A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
    )
    det = (
        A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
        - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
        + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
    )

    def f(x: float) -> float:
        return x**3 - tr * x**2 + minors * x - det

    # the Perron root is the largest real root; every root is <= max column sum
    hi = float(A.sum(axis=0).max()) + 1.0
    # step down from hi to bracket the largest sign change
    lo = hi
    step = hi / 4096
    while f(lo) > 0 and lo > -hi:
        lo -= step
    a, b = lo, lo + step
    for _ in range(200):
        mid = (a + b) / 2
        if f(mid) > 0:
            b = mid
        else:
            a = mid
    return (a + b) / 2


def neumann_left(A: np.ndarray, a: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """a (I + A + A^2 + ...) truncated once the term is below tol."""
    term = np.asarray(a, dtype=float).copy()
    total = term.copy()
    for _ in range(100_000):
        term = term @ A
        total += term
        if np.max(np.abs(term)) < tol:
            return total
    raise RuntimeError("series did not converge")


def neumann_right(A: np.ndarray, y: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    term = np.asarray(y, dtype=float).copy()
    total = term.copy()
    for _ in range(100_000):
        term = A @ term
        total += term
        if np.max(np.abs(term)) < tol:
            return total
    raise RuntimeError("series did not converge")


def two_sector_ledger(revenue: float, cost: float, savings: float, periods: int):
    """Savings path of a sector with a fixed per-period revenue and cost.

    Returns (savings list, collapse period or None).
    """
    path = []
    for t in range(1, periods + 1):
        budget = savings + revenue
        if budget < cost:
            return path, t
        savings = budget - cost
        path.append(savings)
    return path, None
