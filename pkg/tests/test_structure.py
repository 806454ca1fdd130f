import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from cmcuts.cuts import distbip
from cmcuts.generator import generate, sample_degree_sequence
from cmcuts.graph import MultiGraph
from cmcuts.structure import (
    ComponentDecomposition,
    CycleLimitError,
    NoCoreError,
    components,
    core_degree_histogram,
    count_cycles,
    count_pairs,
    giant_fraction,
    intermediate_mass,
    k_core,
    largest_component,
    max_degree_check,
    measure_tc_r,
    neighborhood,
    odd_cycle_census,
    tc_r_curve,
    two_core_decomposition,
)
from cmcuts.theory import DegreeDistribution
from conftest import complete, cycle, multigraphs, path

MIX = DegreeDistribution({1: 0.5, 3: 0.5})


class TestComponents:
    def test_edgeless(self):
        cd = components(MultiGraph(3, []))
        assert [c.tolist() for c in cd.components] == [[0], [1], [2]]

    def test_path(self):
        assert [c.tolist() for c in components(path(3)).components] == [[0, 1, 2]]

    def test_tie_break(self):
        g = MultiGraph(7, [(5, 6), (1, 2), (3, 4), (4, 0)])
        cd = components(g)
        assert [c.tolist() for c in cd.components] == [[0, 3, 4], [1, 2], [5, 6]]
        assert cd.component_id.tolist() == [0, 1, 1, 0, 0, 2, 2]
        assert largest_component(g).tolist() == [0, 3, 4]

    @given(multigraphs(max_n=12))
    def test_matches_union_find(self, g):
        cd = components(g)
        expected = oracles.components(g.n, g.edges.tolist())
        assert [c.tolist() for c in cd.components] == expected
        assert cd.sizes.sum() == g.n
        assert list(cd.sizes) == sorted(cd.sizes, reverse=True)

    def test_giant_fraction_mixture(self):
        g = generate(sample_degree_sequence(MIX, 10**5, 1), 2)
        assert abs(giant_fraction(g) - 22 / 27) < 0.01


class TestCores:
    def test_tree(self):
        assert len(k_core(path(6), 2)) == 0

    def test_cycle(self):
        assert k_core(cycle(5), 2).tolist() == [0, 1, 2, 3, 4]

    def test_triangle_with_tail(self):
        g = MultiGraph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
        assert k_core(g, 2).tolist() == [0, 1, 2]

    def test_loop_counts_two(self):
        assert k_core(MultiGraph(2, [(0, 0), (0, 1)]), 2).tolist() == [0]
        assert k_core(MultiGraph(2, [(0, 1), (0, 1)]), 2).tolist() == [0, 1]

    @given(multigraphs(max_n=12, max_m=20), st.integers(1, 4))
    def test_matches_peeling_oracle_and_nests(self, g, k):
        core = k_core(g, k).tolist()
        assert core == oracles.core(g.n, g.edges.tolist(), k)
        assert set(k_core(g, k + 1).tolist()) <= set(core)

    def test_decomposition_example(self):
        g = MultiGraph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
        cd = two_core_decomposition(g, [0, 1, 2, 3, 4])
        assert cd.core_vertices.tolist() == [0, 1, 2]
        (t,) = cd.hanging_trees
        assert (t.root, t.attachment, t.size, t.depth) == (3, 2, 2, 2)

    def test_pure_cycle_and_acyclic(self):
        assert two_core_decomposition(cycle(6), range(6)).hanging_trees == []
        with pytest.raises(NoCoreError):
            two_core_decomposition(path(4), range(4))

    def test_partition_property_random(self):
        g = generate(sample_degree_sequence(MIX, 3000, 5), 6)
        giant = largest_component(g)
        cd = two_core_decomposition(g, giant)
        tree_vertices = np.concatenate([t.vertices for t in cd.hanging_trees])
        assert len(giant) == len(cd.core_vertices) + cd.tree_sizes().sum()
        assert sorted(np.concatenate([cd.core_vertices, tree_vertices]).tolist()) == giant.tolist()
        hist = core_degree_histogram(cd, g)
        assert min(hist) >= 2
        in_core = np.zeros(g.n, bool)
        in_core[cd.core_vertices] = True
        for t in cd.hanging_trees:
            sub, _ = g.subgraph(t.vertices)
            assert sub.m == sub.n - 1  # a tree
            # touches the core through exactly one edge, at its root
            e = g.edges
            touch = e[(np.isin(e[:, 0], t.vertices) & in_core[e[:, 1]]) | (np.isin(e[:, 1], t.vertices) & in_core[e[:, 0]])]
            assert len(touch) == 1 and t.root in touch[0] and t.attachment in touch[0]

    def test_core_degree_histogram_examples(self):
        assert core_degree_histogram(two_core_decomposition(cycle(5), range(5)), cycle(5)) == {2: 5}
        K4 = complete(4)
        assert core_degree_histogram(two_core_decomposition(K4, range(4)), K4) == {3: 4}


class TestNeighborhoods:
    def test_examples(self):
        assert neighborhood(path(3), [1], 0).tolist() == [1]
        assert neighborhood(path(3), [1], 1).tolist() == [0, 1, 2]
        star = MultiGraph(5, [(0, i) for i in range(1, 5)])
        assert neighborhood(star, [0], 1).tolist() == list(range(5))
        assert neighborhood(star, [0], 2).tolist() == list(range(5))

    @given(multigraphs(max_n=12), st.integers(0, 4))
    def test_recursive_definition(self, g, r):
        U = [0]
        expected = set(U)
        for _ in range(r):
            expected |= {v for u, w in g.edges.tolist() for v in (u, w) if (u in expected or w in expected)}
        assert neighborhood(g, U, r).tolist() == sorted(expected)


class TestCounts:
    def test_pairs(self):
        assert count_pairs(MultiGraph(2, [(0, 1)])) == 1
        assert count_pairs(path(3)) == 0
        assert count_pairs(MultiGraph(2, [(0, 1), (0, 1)])) == 0

    def test_cycle_examples(self):
        assert count_cycles(MultiGraph(1, [(0, 0)]), 4).counts == (1, 0, 0, 0)
        assert count_cycles(MultiGraph(2, [(0, 1), (0, 1)]), 3).counts == (0, 1, 0)
        K4 = count_cycles(complete(4), 4)
        assert K4[3] == 4 and K4[4] == 3

    def test_triple_edge_convention(self):
        assert count_cycles(MultiGraph(2, [(0, 1)] * 3), 2)[2] == 3

    def test_cap(self):
        with pytest.raises(CycleLimitError):
            count_cycles(cycle(3), 13)
        assert count_cycles(cycle(13), 13, cap=13)[13] == 1

    def test_oracle_suite(self, backend):
        rng = np.random.default_rng(12)
        for _ in range(200):
            n, e = oracles.random_multigraph(rng, 8, m_factor=1.5)
            K = 6 if len(e) > 10 else 8
            got = count_cycles(MultiGraph(n, e), K).counts
            assert list(got) == oracles.cycles(n, e, K), (n, e)


class TestOddCycles:
    def test_examples(self):
        assert odd_cycle_census(path(4), range(4)).__dict__ == dict(
            bipartite=True, excess=0, unicyclic=False, odd_unicycle=False)
        c5 = odd_cycle_census(cycle(5), range(5))
        assert (c5.bipartite, c5.excess, c5.unicyclic, c5.odd_unicycle) == (False, 1, True, True)
        c6 = odd_cycle_census(cycle(6), range(6))
        assert (c6.bipartite, c6.excess, c6.unicyclic, c6.odd_unicycle) == (True, 1, True, False)

    def test_loop_and_parallel(self):
        assert not odd_cycle_census(MultiGraph(2, [(0, 0), (0, 1)]), [0, 1]).bipartite
        assert odd_cycle_census(MultiGraph(2, [(0, 1), (0, 1)]), [0, 1]).bipartite

    def test_odd_unicycle_has_distbip_one(self):
        rng = np.random.default_rng(3)
        seen = 0
        for _ in range(400):
            n, e = oracles.random_multigraph(rng, 12, m_factor=1.0, n_min=3)
            g = MultiGraph(n, e)
            for comp in components(g).components:
                oc = odd_cycle_census(g, comp)
                if oc.odd_unicycle:
                    sub, _ = g.subgraph(comp)
                    assert sub.m - oracles.maxcut(sub.n, sub.edges.tolist()) == 1
                    seen += 1
        assert seen > 20


class TestTcR:
    def test_r_zero_and_saturation(self):
        g = MultiGraph(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (5, 6)])
        assert measure_tc_r(g, 0) == pytest.approx(3 / 7)
        assert measure_tc_r(g, 1) == pytest.approx(4 / 7)
        assert measure_tc_r(g, 10) == pytest.approx(5 / 7)
        assert tc_r_curve(g, 3) == pytest.approx([3 / 7, 4 / 7, 5 / 7, 5 / 7])

    def test_no_core(self):
        with pytest.raises(NoCoreError):
            measure_tc_r(path(5), 1)

    def test_monotone_random(self):
        g = generate(sample_degree_sequence(MIX, 2000, 8), 9)
        curve = tc_r_curve(g, 12)
        assert all(b >= a for a, b in zip(curve, curve[1:]))
        assert curve == pytest.approx([measure_tc_r(g, r) for r in range(13)])
        assert curve[-1] <= giant_fraction(g) + 1e-12


class TestIntermediate:
    def test_examples(self):
        assert intermediate_mass(components(cycle(5)), 1) == 0
        cd = ComponentDecomposition([np.arange(10), np.arange(10, 15), np.arange(15, 18)], np.zeros(18, int))
        assert intermediate_mass(cd, 4) == 5

    def test_vanishing_fraction(self):
        n = 10**5
        L = math.ceil(math.log(n))
        small = 0
        for rep in range(50):
            g = generate(sample_degree_sequence(MIX, n, 100 + rep), 200 + rep)
            small += intermediate_mass(components(g), L) / n < 0.01
        assert small >= 48


def test_max_degree_check():
    assert max_degree_check([2, 2, 2]) == (2, False)
    assert max_degree_check([3] * 100) == (3, True)
    n = 10**4
    assert max_degree_check([math.ceil(n**0.6)] + [1] * (n - 1))[1] is False


def test_distbip_agrees_with_census():
    g = MultiGraph(8, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3), (7, 7)])
    assert distbip(g).value == 2
