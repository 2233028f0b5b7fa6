from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

from pure_labour import _kernels
from pure_labour.economy import Economy

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

LUXURY_INCIDENCE = [[1, 1, 1], [1, 1, 1], [0, 0, 1]]
IRON_INCIDENCE = [[1, 1, 1], [1, 1, 1], [1, 0, 1]]


def two_peasants(X=(3.0, 2.0)) -> Economy:
    return Economy.from_doses([1, 1], X, ["farmer", "shepherd"])


def farmers_shepherd() -> Economy:
    # N = (2, 1) with surplus rates (1/2, 1/4): X_i = N (1 + s_i) = (4.5, 3.75)
    return Economy.from_doses([2, 1], [4.5, 3.75], ["bread-farmers", "cheese-shepherds"])


def luxury(X3: float, X=(4.0, 4.0)) -> Economy:
    return Economy.from_doses(
        [1, 1, 1], [*X, X3], ["bread", "cheese", "carpets"], LUXURY_INCIDENCE
    )


def iron(X3: float = 2.0) -> Economy:
    return Economy.from_doses(
        [1, 1, 1], [8.0, 3.0, X3], ["bread", "cheese", "iron"], IRON_INCIDENCE
    )


@pytest.fixture(params=sorted(_kernels.backends()))
def backend(request, monkeypatch):
    """Run a test once per available kernel implementation."""
    mod = _kernels.backends()[request.param]
    monkeypatch.setattr(_kernels, "power_iterate", mod.power_iterate)
    monkeypatch.setattr(_kernels, "run_ledger", mod.run_ledger)
    return request.param


def random_viable_economy(rng: np.random.Generator, n: int | None = None) -> Economy:
    """Full-incidence economy where every commodity feeds all N workers."""
    n = n or int(rng.integers(2, 7))
    N = rng.integers(1, 6, size=n).astype(float)
    F = rng.uniform(0.2, 3.0, size=n)
    s = rng.uniform(0.0, 1.5, size=n)
    Q = N.sum() * F * (1 + s)
    return Economy.from_arrays(N, F, Q)
