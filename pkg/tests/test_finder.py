import unittest
import os
import sys
import itertools
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.constructions import simple_F_construction, t2_complete_construction
from sources.core import Instance, check_certificate, edge_mask
from sources.errors import BestEffortFailed
from sources.finder import (dollar_select, find_rainbow_constructive, hall_assign, is_spread,
                            spread_decompose)
from sources.repro import random_distinct_family
from sources.search import SearchStatus

def complete_graph_pairs(n: int) -> Instance:
    """One matching per edge {a, b} of K_n, paired with the two lowest vertices outside it."""
    matchings = []
    for a, b in itertools.combinations(range(n), 2):
        rest = [v for v in range(n) if v not in (a, b)][:2]
        matchings.append([edge_mask([a, b]), edge_mask(rest)])
    return Instance.create(2, 2, n, matchings)

class TestSpreadDecomposition(unittest.TestCase):
    def setUp(self):
        self.inst = complete_graph_pairs(10)

    def test_small_family_has_no_steps(self):
        inst = simple_F_construction(2, 3)
        decomposition = spread_decompose(inst)
        self.assertEqual(decomposition.steps, ())
        self.assertEqual(set(decomposition.residual), set(inst.distinct_edges()))
        self.assertEqual(decomposition.threshold, 81)

    def test_large_family_is_peeled(self):
        decomposition = spread_decompose(self.inst)
        self.assertGreaterEqual(len(decomposition.steps), 1)
        self.assertLessEqual(len(decomposition.residual), decomposition.threshold)
        for step in decomposition.steps:
            self.assertGreaterEqual(step.core_size, 1)
            self.assertLessEqual(step.core_size, self.inst.r - 1)
            self.assertGreaterEqual(len(step.petals) * decomposition.base ** step.core_size, step.family_size)
            for e in step.petals:
                self.assertEqual(e & step.core, step.core)
            for v in range(self.inst.num_vertices):
                if step.core >> v & 1:
                    continue
                extended = [e for e in step.petals if e >> v & 1]
                self.assertFalse(is_spread(len(extended), step.family_size, decomposition.base, step.core_size + 1))

    def test_partition_of_edges(self):
        decomposition = spread_decompose(self.inst)
        pieces = [e for step in decomposition.steps for e in step.petals] + list(decomposition.residual)
        self.assertEqual(len(pieces), len(set(pieces)))
        self.assertEqual(set(pieces), set(self.inst.distinct_edges()))
        self.assertEqual(decomposition.stats()["extracted"] + len(decomposition.residual), 45)

class TestDollar(unittest.TestCase):
    def setUp(self):
        self.inst = Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]], [[0, 1], [2, 3]],
                                                         [[0, 2], [1, 3]], [[0, 3], [1, 2]]])

    def test_shares(self):
        report = dollar_select(self.inst.distinct_edges(), self.inst)
        self.assertEqual(report.money, (Fraction(1), Fraction(1), Fraction(2), Fraction(2)))
        self.assertEqual(report.color, 0)
        self.assertEqual(report.m, 2)

    def test_quarter_share(self):
        inst = Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]]] * 4 + [[[0, 2], [1, 3]]])
        report = dollar_select([edge_mask([0, 1])], inst)
        self.assertEqual(report.money[:4], (Fraction(1, 4),) * 4)
        self.assertEqual(report.money[4], 0)
        self.assertEqual(report.m, 1)
        self.assertEqual(report.edges[0], edge_mask([0, 1]))
        self.assertEqual(report.jsonify()["money"][0], "1/4")
        assignment = hall_assign(report, inst)
        self.assertEqual(len(assignment), 1)
        self.assertIn(assignment[0], range(4))

    def test_nothing_residual(self):
        report = dollar_select([], self.inst)
        self.assertEqual(report.m, 0)
        self.assertEqual(hall_assign(report, self.inst), [])

    def test_every_color_overpaid(self):
        inst = Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]])
        with self.assertRaises(BestEffortFailed) as ctx:
            dollar_select(inst.distinct_edges(), inst)
        self.assertEqual(ctx.exception.stage, "dollar")

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(2, 8), st.data())
    def test_hall_assignment_matches_brute_force(self, seed, N, data):
        inst = random_distinct_family(np.random.default_rng(seed), 2, 2, 5, min(N, 15))
        edges = inst.distinct_edges()
        residual = data.draw(st.lists(st.sampled_from(edges), unique=True, max_size=len(edges)))
        try:
            report = dollar_select(residual, inst)
        except BestEffortFailed:
            self.assertGreater(len(residual), inst.N)
            return
        assignment = hall_assign(report, inst)
        self.assertEqual(len(set(assignment)), report.m)
        for color, e in zip(assignment, report.edges[:report.m]):
            self.assertIn(e, inst.matchings[color])
        colors_of = inst.colors_of_edge()
        exists = report.m == 0 or any(
            len(set(choice)) == report.m
            for choice in itertools.product(*(colors_of[e] for e in report.edges[:report.m])))
        self.assertTrue(exists)

class TestConstructiveFinder(unittest.TestCase):
    def test_above_threshold_is_constructive(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            inst = random_distinct_family(rng, 2, 2, 6, 36)
            outcome = find_rainbow_constructive(inst)
            self.assertEqual(outcome.status, SearchStatus.FOUND)
            self.assertEqual(outcome.path, "constructive")
            self.assertTrue(check_certificate(inst, outcome.certificate))
            self.assertEqual(outcome.stats["threshold"], 36)
            self.assertEqual(outcome.stats["meets_threshold"], 1)

    def test_peeled_family_is_constructive(self):
        inst = complete_graph_pairs(10)
        outcome = find_rainbow_constructive(inst)
        self.assertTrue(outcome.found)
        self.assertTrue(check_certificate(inst, outcome.certificate))

    def test_falls_back_on_constructions(self):
        for inst in (simple_F_construction(2, 3), t2_complete_construction(3)):
            outcome = find_rainbow_constructive(inst)
            self.assertEqual(outcome.status, SearchStatus.NONE_EXISTS)
            self.assertEqual(outcome.path, "fallback")

    def test_too_few_matchings(self):
        inst = Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]]])
        outcome = find_rainbow_constructive(inst)
        self.assertEqual(outcome.path, "fallback")
        self.assertEqual(outcome.status, SearchStatus.NONE_EXISTS)

if __name__ == "__main__":
    unittest.main()
