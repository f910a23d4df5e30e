import math

import numpy as np
import pytest

from vmmdse.cells import CellErrorStats, InputDistribution, cell_error_stats
from vmmdse.chains import (
    DEFAULT_R_CAP,
    PRECISE_SIGMA_MAX,
    ErrorBudget,
    cell_energy,
    chain_stats,
    solve_redundancy,
    td_cell_area,
    td_latency,
    td_mac_energy,
)
from vmmdse.errors import InfeasibleError
from vmmdse.oracle import nominal_chain_delay


def brute_force_redundancy(cell, n, sigma_max, cap=DEFAULT_R_CAP):
    """Independent oracle: first r whose sigma meets the budget."""
    for r in range(1, cap + 1):
        var = n * (cell.evpv / r + cell.vhm / r**2)
        if math.sqrt(var) <= sigma_max:
            return r
    return None


class TestChainStats:
    def test_single_cell_identity(self):
        cell = CellErrorStats(mu=0.05, evpv=0.001, vhm=0.002)
        cs = chain_stats(cell, 1, 1)
        assert cs.mu == cell.mu
        assert cs.variance == pytest.approx(cell.variance, rel=1e-15)

    def test_variance_linear_in_n(self):
        cell = CellErrorStats(mu=0.0, evpv=0.006, vhm=0.004)
        cs = chain_stats(cell, 100, 1)
        assert cs.variance == pytest.approx(1.0, rel=1e-12)
        assert cs.sigma == pytest.approx(1.0, rel=1e-12)
        for n in (2, 17, 576):
            assert chain_stats(cell, n, 1).variance == pytest.approx(
                n * cell.variance, rel=1e-15
            )

    def test_sigma_is_sqrt_of_variance(self):
        cell = CellErrorStats(mu=0.01, evpv=0.003, vhm=0.001)
        cs = chain_stats(cell, 64, 3)
        assert cs.sigma == math.sqrt(cs.variance)

    def test_mean_scales_with_n_over_r(self):
        cell = CellErrorStats(mu=0.08, evpv=0.0, vhm=0.0)
        cs = chain_stats(cell, 50, 4)
        assert cs.mu == pytest.approx(50 * 0.08 / 4, rel=1e-15)


class TestSolveRedundancy:
    def test_noiseless_cell_needs_no_redundancy(self):
        cell = CellErrorStats(mu=0.1, evpv=0.0, vhm=0.0)
        assert solve_redundancy(cell, 10_000, ErrorBudget.precise()) == 1

    def test_worked_example(self):
        # evpv 0.08, no nonlinearity, precise budget: 0.08/2 > 1/36 >= 0.08/3
        cell = CellErrorStats(mu=0.0, evpv=0.08, vhm=0.0)
        budget = ErrorBudget.precise()
        assert solve_redundancy(cell, 1, budget) == 3
        assert chain_stats(cell, 1, 3).sigma <= budget.sigma_max
        assert chain_stats(cell, 1, 2).sigma > budget.sigma_max

    def test_precise_budget_constant(self):
        assert ErrorBudget.precise().sigma_max == 0.5 / 3.0 == PRECISE_SIGMA_MAX

    def test_matches_brute_force(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            cell = CellErrorStats(
                mu=0.0,
                evpv=float(10.0 ** rng.uniform(-5, -2)),
                vhm=float(10.0 ** rng.uniform(-6, -2)),
            )
            n = int(rng.integers(1, 5000))
            sigma_max = float(rng.uniform(0.05, 3.0))
            budget = ErrorBudget.relaxed(sigma_max)
            expected = brute_force_redundancy(cell, n, sigma_max)
            if expected is None:
                with pytest.raises(InfeasibleError):
                    solve_redundancy(cell, n, budget)
            else:
                assert solve_redundancy(cell, n, budget) == expected

    def test_minimality_postcondition(self):
        cell = CellErrorStats(mu=0.0, evpv=9.4e-4, vhm=1.4e-3)
        budget = ErrorBudget.relaxed(0.58)
        r = solve_redundancy(cell, 4096, budget)
        assert chain_stats(cell, 4096, r).sigma <= budget.sigma_max
        assert r == 1 or chain_stats(cell, 4096, r - 1).sigma > budget.sigma_max

    def test_relaxing_budget_never_increases_r(self):
        cell = CellErrorStats(mu=0.0, evpv=2e-3, vhm=1e-3)
        sigmas = [0.1, 0.2, 0.4, 0.8, 1.6]
        rs = [solve_redundancy(cell, 576, ErrorBudget.relaxed(s)) for s in sigmas]
        assert rs == sorted(rs, reverse=True)

    def test_infeasible_raises(self):
        cell = CellErrorStats(mu=0.0, evpv=1.0, vhm=0.0)
        with pytest.raises(InfeasibleError):
            solve_redundancy(cell, 10_000, ErrorBudget.precise(), r_cap=64)


class TestTdCosts:
    def test_energy_without_conversion(self):
        assert td_mac_energy(2.5e-15, 0.0, 64) == 2.5e-15

    def test_energy_amortization(self):
        assert td_mac_energy(1e-15, 100e-15, 100) == pytest.approx(2e-15, rel=1e-12)

    def test_energy_decreases_with_n(self):
        values = [td_mac_energy(1e-15, 80e-15, n) for n in (32, 64, 128, 256)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_cell_energy_marginal_r(self, cell_b1):
        assert cell_energy(cell_b1, 1) == cell_b1.e_op
        assert cell_energy(cell_b1, 4) == pytest.approx(
            cell_b1.e_op + 3 * cell_b1.e_op_per_r, rel=1e-15
        )

    def test_area_formula(self):
        cpp, h = 1.04e-7, 5.5e-7
        assert td_cell_area(1, 1, cpp, h) == pytest.approx(30 * cpp * h, rel=1e-12)
        assert td_cell_area(4, 2, cpp, h) == pytest.approx(470 * cpp * h, rel=1e-12)

    def test_area_strictly_increasing(self):
        grid = [(b, r) for b in range(1, 6) for r in range(1, 6)]
        for b, r in grid:
            assert td_cell_area(b + 1, r, 1e-7, 5e-7) > td_cell_area(b, r, 1e-7, 5e-7)
            assert td_cell_area(b, r + 1, 1e-7, 5e-7) > td_cell_area(b, r, 1e-7, 5e-7)

    def test_latency_base_case(self, cell_b1):
        assert td_latency(1, 1, cell_b1, 0.0) == cell_b1.d_max

    def test_latency_linear_in_nr(self, cell_b1):
        t1 = td_latency(64, 1, cell_b1, 0.0)
        assert td_latency(128, 1, cell_b1, 0.0) == pytest.approx(2 * t1, rel=1e-12)
        assert td_latency(64, 2, cell_b1, 0.0) == pytest.approx(2 * t1, rel=1e-12)

    def test_latency_matches_behavioral_worst_case(self, cell_b4):
        # full-scale inputs traverse every delay stage of every cell
        n, r = 576, 2
        x = np.full(n, 15, dtype=np.int64)
        w = np.ones(n, dtype=np.int64)
        worst = nominal_chain_delay(cell_b4, x, w, r)
        assert td_latency(n, r, cell_b4, 0.0) == pytest.approx(worst, rel=1e-12)


class TestMonteCarloAgreement:
    def test_chain_sigma_matches_oracle(self, cell_b4):
        from vmmdse.oracle import MonteCarloConfig, SampledInputs, simulate_chain

        dist = InputDistribution.default(4)
        cell = cell_error_stats(cell_b4, dist)
        pred = chain_stats(cell, 576, 2)
        cfg = MonteCarloConfig(
            trials=30_000, seed=21, n=576, r=2, input_mode=SampledInputs(dist)
        )
        emp = simulate_chain(cell_b4, cfg)
        assert emp.sigma == pytest.approx(pred.sigma, rel=0.05)
