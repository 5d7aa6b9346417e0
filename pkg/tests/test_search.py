import unittest
import os
import sys
import itertools
from unittest.mock import patch

from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.constructions import simple_F_construction
from sources.core import Instance, check_certificate, edge_mask, k22_instance, k4_instance
from sources.errors import ParameterDomainError
from sources.search import (SearchBudget, SearchStatus, StrongStatus, check_strong_property,
                            enumerate_matchings, exact_value_search, find_rainbow, max_rainbow_size,
                            naive_rainbow_exists)

@st.composite
def instances(draw):
    """Small random instances, partite or not."""
    r = draw(st.integers(2, 3))
    t = draw(st.integers(1, 3))
    n = draw(st.integers(r * t, min(r * t + 4, 10)))
    N = draw(st.integers(1, 5))
    matchings = []
    for _ in range(N):
        order = draw(st.permutations(list(range(n))))
        matchings.append([edge_mask(order[i * r:(i + 1) * r]) for i in range(t)])
    return Instance.create(r, t, n, matchings)

class TestFindRainbow(unittest.TestCase):
    def setUp(self):
        self.k4 = k4_instance()
        self.repeated = Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]], [[0, 1], [2, 3]]])

    def test_k4_has_none(self):
        outcome = find_rainbow(self.k4, 2)
        self.assertEqual(outcome.status, SearchStatus.NONE_EXISTS)
        self.assertIsNone(outcome.certificate)

    def test_k22_has_none(self):
        self.assertEqual(find_rainbow(k22_instance(), 2).status, SearchStatus.NONE_EXISTS)

    def test_repeated_matching_found(self):
        outcome = find_rainbow(self.repeated, 2)
        self.assertTrue(outcome.found)
        self.assertTrue(check_certificate(self.repeated, outcome.certificate))
        self.assertEqual(sorted(outcome.certificate.colors()), [0, 1])

    def test_size_one_always_found(self):
        self.assertTrue(find_rainbow(self.k4, 1).found)

    def test_fewer_matchings_than_size(self):
        inst = Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]]])
        self.assertEqual(find_rainbow(inst, 2).status, SearchStatus.NONE_EXISTS)

    def test_size_out_of_range(self):
        with self.assertRaises(ParameterDomainError):
            find_rainbow(self.k4, 3)

    def test_budget_gives_indeterminate(self):
        outcome = find_rainbow(simple_F_construction(2, 3), 3, SearchBudget(max_nodes=1, max_millis=10000))
        self.assertEqual(outcome.status, SearchStatus.INDETERMINATE)

    def test_deadline_gives_indeterminate(self):
        with patch("sources.search.time") as clock:
            clock.monotonic.side_effect = itertools.chain([0.0], itertools.repeat(1e9))
            outcome = find_rainbow(simple_F_construction(2, 3), 3, SearchBudget(max_nodes=50000, max_millis=1000))
        self.assertEqual(outcome.status, SearchStatus.INDETERMINATE)

    def test_threads_agree(self):
        budget = SearchBudget(max_nodes=10 ** 6, max_millis=60000, threads=4)
        self.assertEqual(find_rainbow(simple_F_construction(2, 3), 3, budget).status, SearchStatus.NONE_EXISTS)
        self.assertTrue(find_rainbow(self.repeated, 2, budget).found)

    def test_max_rainbow_size(self):
        size, cert, exact = max_rainbow_size(self.k4)
        self.assertEqual(size, 1)
        self.assertTrue(exact)
        self.assertEqual(cert.size, 1)

    def test_report(self):
        data = find_rainbow(self.repeated, 2).jsonify()
        self.assertEqual(data["status"], "Found")
        self.assertEqual(data["path"], "exhaustive")

    @settings(max_examples=80, deadline=None)
    @given(instances(), st.data())
    def test_agrees_with_naive_enumeration(self, inst, data):
        s = data.draw(st.integers(1, inst.t))
        outcome = find_rainbow(inst, s)
        naive = naive_rainbow_exists(inst, s)
        self.assertEqual(outcome.found, naive is not None)
        if outcome.found:
            self.assertTrue(check_certificate(inst, outcome.certificate))

    @settings(max_examples=50, deadline=None)
    @given(instances(), st.data())
    def test_extra_matchings_keep_certificate(self, inst, data):
        s = data.draw(st.integers(1, inst.t))
        outcome = find_rainbow(inst, s)
        extra = []
        for _ in range(data.draw(st.integers(1, 3))):
            order = data.draw(st.permutations(list(range(inst.num_vertices))))
            extra.append([edge_mask(order[i * inst.r:(i + 1) * inst.r]) for i in range(inst.t)])
        extended = inst.with_matchings(list(inst.matchings) + extra)
        self.assertEqual(extended.N, inst.N + len(extra))
        if outcome.found:
            self.assertTrue(check_certificate(extended, outcome.certificate))
            self.assertTrue(find_rainbow(extended, s).found)

    @settings(max_examples=50, deadline=None)
    @given(instances())
    def test_found_is_monotone_in_size(self, inst):
        found = [find_rainbow(inst, s).found for s in range(1, inst.t + 1)]
        self.assertTrue(found[0])
        for smaller, larger in zip(found, found[1:]):
            if larger:
                self.assertTrue(smaller)

class TestStrongProperty(unittest.TestCase):
    def test_k4_holds(self):
        self.assertEqual(check_strong_property(k4_instance()).status, StrongStatus.HOLDS)

    def test_repeated_matching_fails(self):
        inst = Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]], [[0, 1], [2, 3]]])
        outcome = check_strong_property(inst)
        self.assertEqual(outcome.status, StrongStatus.FAILS)
        self.assertEqual(len({c for c, _ in outcome.witness}), 2)

    def test_mixed_union_fails(self):
        inst = Instance.from_vertex_lists(2, 2, 6, [[[0, 1], [2, 3]], [[4, 5], [2, 3]]])
        self.assertEqual(check_strong_property(inst).status, StrongStatus.FAILS)

class TestExactValue(unittest.TestCase):
    def test_matching_pool(self):
        pool, partition = enumerate_matchings(2, 2, 4, False)
        self.assertEqual(len(pool), 3)
        self.assertIsNone(partition)
        pool, partition = enumerate_matchings(2, 2, 6, True)
        self.assertEqual(len(pool), 18)
        self.assertEqual(partition, [[0, 1, 2], [3, 4, 5]])

    def test_partite_k22(self):
        n_max, witness = exact_value_search(2, 2, 4, True)
        self.assertEqual(n_max, 2)
        self.assertEqual(witness.N, 2)
        self.assertEqual(find_rainbow(witness, 2).status, SearchStatus.NONE_EXISTS)

    def test_complete_k4(self):
        result = exact_value_search(2, 2, 4, False)
        self.assertTrue(result.complete)
        self.assertEqual(result.n_max, 3)
        self.assertEqual(result.report().status, "Complete")

    def test_universe_too_small(self):
        with self.assertRaises(ParameterDomainError):
            exact_value_search(2, 3, 4, False)

    def test_multiplicity_cap_range(self):
        with self.assertRaises(ParameterDomainError):
            exact_value_search(2, 2, 4, False, multiplicity_cap=2)

if __name__ == "__main__":
    unittest.main()
