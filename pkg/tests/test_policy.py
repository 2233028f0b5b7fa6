import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from conftest import random_viable_economy, farmers_shepherd, two_peasants
from pure_labour.economy import Economy
from pure_labour.errors import InvalidEconomyError, NotViableError
from pure_labour.policy import (
    PriceVector,
    check_price_feasibility,
    check_viability,
    dose_value_ratio,
    feasibility_witness,
    macro_identity_residual,
    policy_prices_r_eq_s,
    sector_profit_rates,
    surplus_rates,
    two_sector_band,
)


def dose_prices(eco, values):
    return PriceVector.from_values(eco, values, "dose")


class TestViability:
    def test_two_peasants_viable(self):
        eco = Economy.from_arrays([1, 1], [2.0, 0.5], [6.0, 1.0])  # Q = (3F1, 2F2)
        rep = check_viability(eco)
        assert rep.viable
        np.testing.assert_allclose(rep.margins, [2.0, 0.0])  # (F1, 0)

    def test_fifty_percent_overproduction_fails(self):
        rep = check_viability(two_peasants((1.5, 1.5)))
        assert not rep.viable
        assert not rep.per_commodity.any()

    def test_zero_margin_boundary(self):
        rep = check_viability(Economy.from_doses([1, 2], [3.0, 3.0]))
        assert rep.viable
        np.testing.assert_allclose(rep.margins, 0.0)


class TestSurplusRates:
    def test_farmers_shepherd(self):
        np.testing.assert_allclose(surplus_rates(farmers_shepherd()), [0.5, 0.25], atol=1e-15)

    def test_zero_surplus(self):
        np.testing.assert_array_equal(surplus_rates(Economy.from_doses([1, 1], [2, 2])), 0.0)

    def test_two_peasants(self):
        np.testing.assert_allclose(surplus_rates(two_peasants()), [0.5, 0.0])

    def test_not_viable(self):
        with pytest.raises(NotViableError, match="farmer"):
            surplus_rates(two_peasants((1.5, 2.0)))


class TestBand:
    def test_two_peasants(self):
        band = two_sector_band(two_peasants())
        assert abs(band.lower - 1) <= 1e-12 and abs(band.upper - 2) <= 1e-12

    def test_farmers_shepherd(self):
        lo, hi = two_sector_band(farmers_shepherd())
        assert abs(lo - 4 / 11) <= 1e-12
        assert abs(hi - 5 / 4) <= 1e-12

    def test_zero_surplus_single_point(self):
        lo, hi = two_sector_band(two_peasants((2.0, 2.0)))
        assert lo == hi == 1.0

    def test_wrong_sector_count(self):
        eco = Economy.from_doses([1, 1, 1], [4, 4, 4])
        with pytest.raises(InvalidEconomyError, match="exactly 2"):
            two_sector_band(eco)

    def test_degenerate(self):
        with pytest.raises(NotViableError):
            two_sector_band(Economy.from_doses([2, 1], [2.0, 6.0]))

    def test_reduces_to_unit_population_form(self):
        # N = (1,1): [F1/(Q2 - F2), (Q1 - F1)/F2] in dose-value terms
        eco = Economy.from_arrays([1, 1], [2.0, 0.5], [7.0, 2.0])
        lo, hi = two_sector_band(eco)
        F1, F2, Q1, Q2 = 2.0, 0.5, 7.0, 2.0
        # ratio p2/p1 band times F2/F1
        assert lo == pytest.approx(F1 / (Q2 - F2) * F2 / F1)
        assert hi == pytest.approx((Q1 - F1) / F2 * F2 / F1)


class TestFeasibility:
    def test_r_eq_s_prices_feasible(self):
        eco = farmers_shepherd()
        rep = check_price_feasibility(eco, policy_prices_r_eq_s(eco))
        assert rep.feasible

    def test_rho_two_starves_farmers(self):
        eco = farmers_shepherd()
        rep = check_price_feasibility(eco, dose_prices(eco, [1, 2]))
        assert not rep.feasible
        assert rep.slack[1] >= 0 and rep.slack[0] < 0
        assert rep.starving == ["bread-farmers"]
        # hand substitution: M = 3, sigma = (4.5 - 6, 7.5 - 3)
        np.testing.assert_allclose(rep.slack, [-1.5, 4.5])
        assert rep.cost_per_worker == 3.0

    def test_zero_surplus_labour_prices_tight(self):
        eco = Economy.from_arrays([1, 2], [1.0, 2.0], [3.0, 6.0])
        p = eco.populations / eco.outputs
        rep = check_price_feasibility(eco, p)
        assert rep.feasible
        np.testing.assert_allclose(rep.slack, 0.0, atol=1e-15)
        assert rep.status == ["tight", "tight"]

    def test_min_prices_diagnostic(self):
        eco = farmers_shepherd()
        pv = dose_prices(eco, [1, 0.5])
        rep = check_price_feasibility(eco, pv)
        assert np.all(pv.prices >= rep.min_prices)
        np.testing.assert_allclose(rep.min_prices, rep.cost_per_worker * eco.populations / eco.outputs)

    def test_unit_populations_reduce_to_revenue_cost(self):
        # N_i = 1: slack_i = p_i Q_i - sum_j p_j F_j, revenue not below production cost
        eco = Economy.from_arrays([1, 1], [2.0, 0.5], [7.0, 2.0])
        p = np.array([0.7, 1.3])
        rep = check_price_feasibility(eco, p)
        cost = p @ eco.survival_doses
        np.testing.assert_allclose(rep.slack, p * eco.outputs - cost)

    @pytest.mark.parametrize("eco", [two_peasants(), farmers_shepherd(), two_peasants((5.0, 2.5))])
    def test_band_agrees_with_feasibility_on_grid(self, eco):
        band = two_sector_band(eco)
        rhos = np.concatenate([
            np.linspace(band.lower * 0.5, band.upper * 1.5, 101),
            [band.lower, band.upper, band.lower * (1 - 1e-6), band.upper * (1 + 1e-6)],
        ])
        for rho in rhos:
            feasible = check_price_feasibility(eco, dose_prices(eco, [1.0, rho])).feasible
            assert feasible == band.contains(rho), rho

    def test_endpoints_closed(self):
        eco = two_peasants()
        for rho in (1.0, 2.0):
            rep = check_price_feasibility(eco, dose_prices(eco, [1.0, rho]))
            assert rep.feasible and "tight" in rep.status


class TestProfitRates:
    def test_natural_prices_uniform(self):
        eco = farmers_shepherd()
        rates = sector_profit_rates(eco, dose_prices(eco, [1, 3 / 5]))
        np.testing.assert_allclose(rates.r, [13 / 32, 13 / 32], atol=1e-14)

    def test_r_eq_s_policy(self):
        eco = farmers_shepherd()
        rates = sector_profit_rates(eco, policy_prices_r_eq_s(eco))
        np.testing.assert_allclose(rates.r, [0.5, 0.25], atol=1e-14)
        np.testing.assert_allclose(rates.s, [0.5, 0.25], atol=1e-15)

    def test_cost_prices_zero_rates(self):
        # p_i = N_i M / Q_i is self-consistent only when sum N_i F_i / Q_i = 1
        eco = Economy.from_arrays([2, 1], [1.5, 0.4], [4.5, 1.2])
        p_cost = 7.0 * eco.populations / eco.outputs
        M = p_cost @ eco.survival_doses
        np.testing.assert_allclose(p_cost, eco.populations * M / eco.outputs)
        rates = sector_profit_rates(eco, p_cost)
        np.testing.assert_allclose(rates.r, 0.0, atol=1e-14)

    def test_destroyed_flag(self):
        eco = farmers_shepherd()
        rates = sector_profit_rates(eco, dose_prices(eco, [1, 2]))
        assert list(rates.destroyed) == [True, False]


class TestMacroIdentity:
    def test_rates_equal_surplus_rates(self):
        eco = farmers_shepherd()
        s = surplus_rates(eco)
        from pure_labour.policy import SectorRates

        assert macro_identity_residual(eco, SectorRates(s, s)) == pytest.approx(0, abs=1e-15)

    def test_uniform_rate_condition(self):
        eco = farmers_shepherd()
        s = surplus_rates(eco)
        from pure_labour.policy import SectorRates

        c = float(np.sum(eco.populations * eco.survival_doses / eco.outputs))
        R = 1 / c - 1
        assert abs(macro_identity_residual(eco, SectorRates(np.full(2, R), s))) < 1e-15
        assert abs(macro_identity_residual(eco, SectorRates(np.full(2, R + 0.1), s))) > 1e-3

    def test_sparse_incidence_rejected(self):
        from conftest import iron

        eco = iron()
        with pytest.raises(InvalidEconomyError):
            macro_identity_residual(eco, sector_profit_rates(eco, [1, 1, 1]))

    @settings(max_examples=200, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_identity_for_any_positive_prices(self, seed):
        rng = np.random.default_rng(seed)
        eco = random_viable_economy(rng)
        p = rng.uniform(0.05, 20.0, size=eco.n)
        rates = sector_profit_rates(eco, p)
        assert abs(macro_identity_residual(eco, rates)) <= 1e-12
        assert abs(macro_identity_residual(eco, rates, "costs")) <= 1e-12


class TestPolicyPrices:
    def test_farmers_shepherd_ratio(self):
        eco = farmers_shepherd()
        assert dose_value_ratio(eco, policy_prices_r_eq_s(eco)) == 0.5

    def test_equal_populations(self):
        eco = Economy.from_arrays([2, 2, 2], [1.0, 2.0, 0.5], [20.0, 15.0, 9.0])
        v = policy_prices_r_eq_s(eco).prices * eco.survival_doses
        np.testing.assert_allclose(v, v[0])

    def test_population_ratio(self):
        eco = Economy.from_arrays([3, 1], [2.0, 0.7], [20.0, 5.0])
        assert dose_value_ratio(eco, policy_prices_r_eq_s(eco)) == pytest.approx(1 / 3, abs=1e-15)

    def test_numeraire(self):
        eco = farmers_shepherd()
        pv = policy_prices_r_eq_s(eco, numeraire="cheese-shepherds")
        assert pv.prices[1] == 1.0 and pv.numeraire == 1


def _lp_feasible(eco) -> bool:
    """Is there p >= 1e-6 with N_i sum_j p_j F_j <= p_i Q_i? (scipy LP oracle)."""
    n = eco.n
    N, F, Q = eco.populations, eco.survival_doses, eco.outputs
    A_ub = np.outer(N, F) - np.diag(Q)
    res = linprog(np.zeros(n), A_ub=A_ub, b_ub=np.zeros(n),
                  A_eq=np.ones((1, n)), b_eq=[1.0], bounds=[(1e-9, None)] * n,
                  method="highs")
    return res.status == 0


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_feasible_cone_exists_iff_cost_share_below_one(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    N = rng.integers(1, 5, size=n).astype(float)
    F = rng.uniform(0.3, 2.0, size=n)
    # each sector feeds itself; the cone condition may go either way
    Q = N * F * rng.uniform(1.0, 2.5 * n, size=n)
    eco = Economy.from_arrays(N, F, Q)
    c = float(np.sum(N * F / Q))
    assume(abs(c - 1) > 1e-6)
    witness = feasibility_witness(eco)
    assert (witness is not None) == (c <= 1) == _lp_feasible(eco)
    if witness is not None:
        assert check_price_feasibility(eco, witness).feasible


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_rate_sign_matches_slack_sign(seed):
    rng = np.random.default_rng(seed)
    eco = random_viable_economy(rng)
    p = rng.uniform(0.05, 5.0, size=eco.n)
    rates = sector_profit_rates(eco, p)
    rep = check_price_feasibility(eco, p)
    for r, sl in zip(rates.r, rep.slack):
        assume(abs(sl) > 1e-9)
        assert math.copysign(1, r) == math.copysign(1, sl)


def test_price_vector_validation():
    with pytest.raises(InvalidEconomyError):
        PriceVector([1.0, 0.0])
    with pytest.raises(InvalidEconomyError):
        PriceVector([1.0, 2.0], numeraire=5)
    pv = PriceVector([2.0, 3.0], numeraire=0)
    np.testing.assert_allclose(pv.prices, [1.0, 1.5])
