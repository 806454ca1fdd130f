from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from cmcuts.generator import (
    DegreeSequence,
    ParityError,
    RejectionError,
    condition_simple,
    generate,
    generate_sequential,
    matching_probability,
    odd_double_factorial,
    percolate,
    regular_sequence,
    sample_degree_sequence,
)
from cmcuts.graph import MultiGraph
from cmcuts.theory import DegreeDistribution, DomainError


def outcome(g):
    return tuple(map(tuple, g.canonical_edges().tolist()))


def law(gen, seq, samples, seed):
    ss = np.random.SeedSequence(seed).generate_state(samples, dtype=np.uint64)
    return Counter(outcome(gen(seq, int(s))) for s in ss)


class TestDegreeSequences:
    def test_deterministic(self):
        seq = sample_degree_sequence(DegreeDistribution({2: 1.0}), 5, 1)
        assert seq.degrees.tolist() == [2] * 5 and seq.parity_fix is None

    def test_parity_rule(self):
        seq = sample_degree_sequence(DegreeDistribution({1: 1.0}), 5, 1)
        assert seq.total == 6
        assert seq.degrees[seq.parity_fix] == 2

    def test_empirical_frequency(self):
        seq = sample_degree_sequence(DegreeDistribution({1: 0.5, 3: 0.5}), 10**5, 3)
        assert abs((seq.degrees == 1).mean() - 0.5) < 0.01

    def test_chi_square_sanity(self):
        d = DegreeDistribution({1: 0.2, 2: 0.3, 4: 0.5})
        seq = sample_degree_sequence(d, 20000, 11)
        obs = [(seq.degrees == k).sum() for k in (1, 2, 4)]
        obs[-1] += (seq.degrees == 5).sum()  # a parity bump may move one vertex
        assert stats.chisquare(obs, 20000 * d.probs).pvalue > 1e-3

    def test_regular_parity(self):
        assert regular_sequence(3, 5).total == 16
        assert regular_sequence(3, 4).parity_fix is None

    def test_seed_required(self):
        with pytest.raises(TypeError):
            sample_degree_sequence(DegreeDistribution({1: 1.0}), 4, None)

    def test_negative_degrees(self):
        with pytest.raises(ValueError):
            DegreeSequence([1, -1])


class TestGenerate:
    def test_forced(self):
        assert outcome(generate([1, 1], 0)) == ((0, 1),)
        assert outcome(generate([2], 0)) == ((0, 0),)

    def test_parity_error(self):
        with pytest.raises(ParityError):
            generate([1, 2], 0)
        with pytest.raises(ParityError):
            generate_sequential([1, 1, 1], 0)

    def test_reproducible(self):
        seq = regular_sequence(3, 50)
        assert generate(seq, 9).same_as(generate(seq, 9))
        assert not generate(seq, 9).same_as(generate(seq, 10))

    @pytest.mark.parametrize("gen", [generate, generate_sequential])
    def test_four_stubs_uniform(self, gen):
        counts = law(gen, [1, 1, 1, 1], 10**4, 5)
        assert len(counts) == 3
        assert stats.chisquare(list(counts.values())).pvalue > 1e-3

    @pytest.mark.parametrize("gen", [generate, generate_sequential])
    def test_two_one_one(self, gen):
        counts = law(gen, [2, 1, 1], 10**4, 6)
        loop = counts[((0, 0), (1, 2))] / 10**4
        assert abs(loop - 1 / 3) < 0.02
        assert set(counts) == {((0, 0), (1, 2)), ((0, 1), (0, 2))}

    @pytest.mark.parametrize("seq", [[2, 1, 1], [1, 1, 1, 1], [3, 2, 1, 2]])
    def test_law_equivalence(self, seq):
        a = law(generate, seq, 10**4, 7)
        b = law(generate_sequential, seq, 10**4, 8)
        keys = sorted(set(a) | set(b))
        table = np.array([[a[k] for k in keys], [b[k] for k in keys]])
        assert stats.chi2_contingency(table).pvalue > 1e-3

    def test_order_invariance(self):
        seq = [3, 2, 1, 2]
        a = law(lambda s, r: generate_sequential(s, r, order=[0, 1, 3]), seq, 5000, 1)
        b = law(lambda s, r: generate_sequential(s, r, order=[3, 1, 0]), seq, 5000, 2)
        keys = sorted(set(a) | set(b))
        assert stats.chi2_contingency(np.array([[a[k] for k in keys], [b[k] for k in keys]])).pvalue > 1e-3

    def test_bad_order(self):
        with pytest.raises(ValueError):
            generate_sequential([2, 2, 1, 1], 0, order=[0, 2])
        with pytest.raises(ValueError):
            generate_sequential([2, 2, 1, 1], 0, order=[0])

    def test_exchangeability(self):
        n = 6
        pairs = Counter()
        ss = np.random.SeedSequence(4).generate_state(10**5, dtype=np.uint64)
        for s in ss:
            e = generate([2] * n, int(s)).edges
            for u, v in e[e[:, 0] != e[:, 1]]:
                pairs[(min(u, v), max(u, v))] += 1
        assert len(pairs) == n * (n - 1) // 2
        assert stats.chisquare(list(pairs.values())).pvalue > 1e-3

    @given(st.lists(st.integers(0, 5), min_size=1, max_size=12), st.integers(0, 2**32))
    def test_degrees_preserved(self, degrees, seed):
        if sum(degrees) % 2:
            degrees[0] += 1
        for gen in (generate, generate_sequential):
            g = gen(degrees, seed)
            assert g.degrees.tolist() == degrees


class TestPercolate:
    def test_extremes(self):
        g = generate(regular_sequence(3, 20), 1)
        assert percolate(g, 1.0, 2).same_as(g)
        assert percolate(g, 0.0, 2).m == 0

    def test_domain(self):
        with pytest.raises(DomainError):
            percolate(MultiGraph(1, []), 1.5, 0)

    def test_binomial(self):
        g = generate(regular_sequence(4, 500), 3)
        kept = np.array([percolate(g, 0.3, s).m for s in range(200)])
        assert abs(kept.mean() - 300) < 3 * np.sqrt(1000 * 0.21) / np.sqrt(200) + 1

    @given(st.integers(0, 2**32), st.floats(0, 1))
    def test_degrees_never_increase(self, seed, p):
        g = generate(regular_sequence(3, 12), seed)
        assert (percolate(g, p, seed).degrees <= g.degrees).all()


class TestConditionSimple:
    def test_trivial(self):
        g, rep = condition_simple([1, 1], 0)
        assert rep.attempts == 1 and rep.simple and g.is_simple()

    def test_rejection(self):
        with pytest.raises(RejectionError) as info:
            condition_simple([2], 0, max_attempts=5)
        assert info.value.attempts == 5

    def test_acceptance_rate_stable(self):
        dist = DegreeDistribution({1: 0.5, 3: 0.5})
        rates = []
        for n, seed in ((1000, 1), (10000, 2)):
            seq = sample_degree_sequence(dist, n, seed)
            ss = np.random.SeedSequence(seed).generate_state(300, dtype=np.uint64)
            rates.append(np.mean([generate(seq, int(s)).is_simple() for s in ss]))
        # limit exp(-nu/2 - nu^2/4) = exp(-21/16) ~ 0.269
        assert all(0.18 < r < 0.36 for r in rates)


class TestMatchingProbability:
    @pytest.mark.parametrize("s,m,expected", [(2, 1, 1.0), (2, 5, 1 / 9), (4, 3, 0.2)])
    def test_examples(self, s, m, expected):
        assert matching_probability(s, m) == pytest.approx(expected)

    @given(st.integers(1, 60))
    def test_whole_set(self, m):
        assert matching_probability(2 * m, m) == 1.0

    def test_errors(self):
        with pytest.raises(DomainError):
            matching_probability(3, 5)
        with pytest.raises(DomainError):
            odd_double_factorial(4)

    def test_odd_double_factorial(self):
        assert [odd_double_factorial(j) for j in (-1, 1, 3, 5, 7)] == [1, 1, 3, 15, 105]

    def test_against_enumeration(self):
        # fraction of the 5!! = 15 matchings of 6 stubs in which stubs {0,1,2,3} pair among themselves
        def matchings(items):
            if not items:
                yield []
                return
            a = items[0]
            for i in range(1, len(items)):
                for rest in matchings(items[1:i] + items[i + 1:]):
                    yield [(a, items[i])] + rest
        ms = list(matchings(list(range(6))))
        inside = sum(all((u < 4) == (v < 4) for u, v in m) for m in ms)
        assert matching_probability(4, 3) == pytest.approx(inside / len(ms))
