import numpy as np
import pytest

from cmcuts.branching import (
    estimate_ds_r,
    estimate_rho_j,
    estimate_survival,
    horizon_check,
    rho_distribution,
    simulate_bp,
)
from cmcuts.generator import generate, sample_degree_sequence
from cmcuts.structure import core_degree_histogram, largest_component, two_core_decomposition
from cmcuts.theory import DegenerateDistributionError, DegreeDistribution

MIX = DegreeDistribution({1: 0.5, 3: 0.5})
SUB = DegreeDistribution({1: 0.75, 2: 0.25})
ONE = DegreeDistribution({1: 1.0})
THREE = DegreeDistribution({3: 1.0})


class TestSimulate:
    def test_degree_one(self):
        out = simulate_bp(ONE, 5, 1)
        assert out.generation_sizes == [1, 1, 0]
        assert out.extinct_at == 2 and not out.survived_horizon

    def test_three_regular(self):
        out = simulate_bp(THREE, 6, 1)
        assert out.generation_sizes == [1] + [3 * 2 ** (g - 1) for g in range(1, 7)]
        assert out.extinct_at is None and out.survived_horizon

    def test_cap(self):
        out = simulate_bp(DegreeDistribution({10: 1.0}), 30, 1)
        assert out.capped and out.survived_horizon

    def test_means(self):
        z1, z2 = [], []
        ss = np.random.SeedSequence(3).generate_state(20000, dtype=np.uint64)
        for s in ss:
            sizes = simulate_bp(MIX, 2, int(s)).generation_sizes + [0, 0]
            z1.append(sizes[1])
            z2.append(sizes[2])
        z1, z2 = np.array(z1), np.array(z2)
        assert abs(z1.mean() - 2.0) < 3 * z1.std() / np.sqrt(len(z1))
        assert abs(z2.mean() - 3.0) < 3 * z2.std() / np.sqrt(len(z2))  # mu * nu

    def test_errors(self):
        with pytest.raises(ValueError):
            simulate_bp(MIX, 0, 1)
        with pytest.raises(DegenerateDistributionError):
            simulate_bp(DegreeDistribution({0: 1.0}), 3, 1)
        with pytest.raises(TypeError):
            simulate_bp(MIX, 3, None)


class TestSurvival:
    def test_examples(self):
        assert estimate_survival(THREE, 20, 1000, 1).estimate == 1.0
        assert estimate_survival(SUB, 200, 10**5, 2).estimate < 0.01

    def test_mixture(self):
        est = estimate_survival(MIX, 50, 10**5, 3)
        assert abs(est.estimate - 22 / 27) < 0.01
        assert est.trials == 10**5

    def test_nonincreasing_in_horizon(self):
        a = estimate_survival(MIX, 5, 10**5, 4)
        b = estimate_survival(MIX, 20, 10**5, 5)
        assert b.estimate <= a.estimate + 3 * a.stderr

    def test_batches_are_deterministic(self):
        assert estimate_survival(MIX, 10, 70000, 8) == estimate_survival(MIX, 10, 70000, 8)

    def test_trials(self):
        with pytest.raises(ValueError):
            estimate_survival(MIX, 5, 0, 1)


class TestDsR:
    def test_degree_one(self):
        assert estimate_ds_r(ONE, 3, 10, 5000, 1).estimate == 0.0

    def test_monotone_in_r(self):
        ests = [estimate_ds_r(MIX, r, 30, 40000, 10 + r) for r in range(5)]
        for a, b in zip(ests, ests[1:]):
            assert b.estimate >= a.estimate - 3 * max(a.stderr, b.stderr)

    def test_limit_is_eta(self):
        est = estimate_ds_r(MIX, 10, 30, 10**4, 2)
        assert abs(est.estimate - 22 / 27) < 3 * est.stderr + 0.01

    def test_bounded_by_survival(self):
        d = estimate_ds_r(MIX, 3, 20, 40000, 3)
        s = estimate_survival(MIX, 20, 40000, 4)
        assert d.estimate <= s.estimate + 3 * max(d.stderr, s.stderr)

    def test_r_zero_regular(self):
        # every 3-regular individual has 3 surviving children
        assert estimate_ds_r(THREE, 0, 10, 1000, 1).estimate == 1.0

    def test_horizon_check(self):
        hc = horizon_check(MIX, 2, 30, 20000, 5)
        assert hc.converged

    def test_errors(self):
        with pytest.raises(ValueError):
            estimate_ds_r(MIX, -1, 5, 10, 1)
        with pytest.raises(ValueError):
            estimate_ds_r(MIX, 1, 0, 10, 1)


class TestRho:
    def test_degree_one(self):
        assert estimate_rho_j(ONE, 0, 10, 1000, 1).estimate == 1.0

    def test_sums_to_one(self):
        ests = [estimate_rho_j(MIX, j, 20, 20000, 7) for j in range(4)]
        # same seed, so the four events partition the same trials exactly
        assert sum(e.estimate for e in ests) == pytest.approx(1.0)
        ests = [estimate_rho_j(MIX, j, 20, 20000, 7 + j) for j in range(4)]
        se = np.sqrt(sum(e.stderr ** 2 for e in ests))
        assert abs(sum(e.estimate for e in ests) - 1) < 3 * se

    def test_distribution_matches_single(self):
        counts, trials = rho_distribution(MIX, 15, 5000, 3)
        assert counts.sum() == trials
        assert counts[2] / trials == estimate_rho_j(MIX, 2, 15, 5000, 3).estimate

    def test_three_survivors_closed_form(self):
        # root has 3 children w.p. 1/2, each survives w.p. 1 - xi = 2/3
        est = estimate_rho_j(MIX, 3, 30, 10**5, 9)
        assert abs(est.estimate - 0.5 * (2 / 3) ** 3) < 3 * est.stderr + 0.002

    def test_matches_graph_core_degrees(self):
        n = 10**5
        g = generate(sample_degree_sequence(MIX, n, 21), 22)
        cd = two_core_decomposition(g, largest_component(g))
        n3 = core_degree_histogram(cd, g).get(3, 0) / n
        est = estimate_rho_j(MIX, 3, 30, 10**5, 23)
        assert abs(n3 - est.estimate) < 0.02
