import unittest
import os
import sys

import numpy as np

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.core import validate_instance
from sources.errors import ParameterDomainError
from sources.repro import (bounds_table, construction_counts, exact_small_value, finder_never_false,
                           multilinear_tightness, random_distinct_family, random_instance, run_suite)

class TestRandomInstances(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_random_instance_valid(self):
        for partite in (False, True):
            inst = random_instance(self.rng, 3, 2, 9, 5, partite)
            self.assertTrue(validate_instance(inst).ok)
            self.assertEqual(inst.N, 5)
            self.assertEqual(inst.is_partite, partite)

    def test_distinct_family(self):
        inst = random_distinct_family(self.rng, 2, 2, 6, 20)
        self.assertEqual(len(set(inst.matchings)), 20)
        with self.assertRaises(ParameterDomainError):
            random_distinct_family(self.rng, 2, 2, 4, 5)

class TestCriteria(unittest.TestCase):
    def test_fast_criteria(self):
        for criterion in (construction_counts, exact_small_value, bounds_table,
                          finder_never_false, multilinear_tightness):
            with self.subTest(criterion=criterion.__name__):
                result = criterion()
                self.assertTrue(result.passed, result.detail)

    def test_probes_suite(self):
        result = run_suite("probes", progress=False)
        self.assertTrue(result.all_passed, result.failing())
        self.assertEqual(result.jsonify()["suite"], "probes")

    def test_unknown_suite(self):
        with self.assertRaises(ParameterDomainError):
            run_suite("nope", progress=False)

if __name__ == "__main__":
    unittest.main()
