import unittest
import os
import sys
import math

import numpy as np

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.core import validate_instance
from sources.errors import (BudgetExceeded, InternalInvariantError, ParameterDomainError,
                            PrimeCapExceeded)
from sources.probfield import (TupleLattice, behrend_from_base_set, behrend_system,
                               build_partite_family, choose_prime, component_graph, counting_probe,
                               factorial_inequality_holds, family_report, is_centroid_free,
                               paper_prime_range, probabilistic_f_construction, probability_probe,
                               sample_functional, span_dimension, span_suite)
from sources.search import SearchStatus, StrongStatus, check_strong_property, find_rainbow

class TestPrime(unittest.TestCase):
    def test_paper_range(self):
        self.assertEqual(paper_prime_range(5, 3), (2592, 5184))

    def test_smallest_admissible_prime(self):
        modulus = choose_prime(5, 3)
        self.assertEqual(modulus.P, 2593)
        self.assertEqual(modulus.provenance, "paper-range")
        self.assertLessEqual(modulus.lower, modulus.P)
        self.assertLessEqual(modulus.P, modulus.upper)

    def test_named_modes(self):
        self.assertEqual(choose_prime(5, 3, "paper"), choose_prime(5, 3))
        with self.assertRaises(ParameterDomainError):
            choose_prime(5, 3, "admissible")

    def test_cap(self):
        with self.assertRaises(PrimeCapExceeded):
            choose_prime(40, 3)

    def test_relaxed(self):
        self.assertEqual(choose_prime(3, 3, "relaxed", 7).provenance, "user-supplied")
        with self.assertRaises(ParameterDomainError):
            choose_prime(3, 3, "relaxed", 9)
        with self.assertRaises(ParameterDomainError):
            choose_prime(3, 3, "relaxed", 2)

    def test_t_too_small(self):
        with self.assertRaises(ParameterDomainError):
            choose_prime(3, 2)

class TestBehrend(unittest.TestCase):
    def test_centroid_free(self):
        self.assertTrue(is_centroid_free([0, 1, 3], 3))
        self.assertFalse(is_centroid_free([0, 1, 2], 3))
        self.assertFalse(is_centroid_free([0, 1, 2], 4))
        self.assertTrue(is_centroid_free([0, 1, 5], 4))

    def test_exhaustive(self):
        system = behrend_system(7, 3, "exhaustive")
        self.assertEqual(system.base_set, (0, 1, 3))
        self.assertEqual(system.verified_by, "exhaustive")
        self.assertEqual(system.Y(2), (0, 5, 1))

    def test_sphere(self):
        system = behrend_system(101, 3, "sphere", d=10, k=2)
        self.assertGreaterEqual(system.R, 3)
        self.assertTrue(system.method.startswith("sphere"))
        self.assertTrue(is_centroid_free(system.base_set, 3))

    def test_greedy(self):
        system = behrend_system(31, 4, "greedy")
        self.assertLessEqual(3 * max(system.base_set), 30)
        self.assertTrue(is_centroid_free(system.base_set, 4))

    def test_bad_base_sets(self):
        with self.assertRaises(InternalInvariantError):
            behrend_from_base_set(7, 3, [0, 1, 2])
        with self.assertRaises(ParameterDomainError):
            behrend_from_base_set(7, 3, [0, 4])
        with self.assertRaises(ParameterDomainError):
            behrend_system(9, 3)

    def test_report(self):
        data = behrend_system(7, 3, "exhaustive").report().jsonify()
        self.assertEqual(data["R"], 3)
        self.assertEqual(data["base_set"], [0, 1, 3])
        exact, approx = data["asymptotic_floor"].split(" ≈ ")
        self.assertTrue(exact.startswith("7*exp(-12*sqrt("))
        expected = 7 * math.exp(-12 * math.sqrt(math.log(7) * math.log(3)))
        self.assertAlmostEqual(float(approx), expected, delta=expected * 1e-5)

class TestFamily(unittest.TestCase):
    def setUp(self):
        self.system = behrend_system(7, 3, "exhaustive")

    def test_functional_on_hyperplane(self):
        functional = sample_functional(7, 9, seed=3)
        self.assertEqual(len(functional.coefficients), 9)
        self.assertEqual(sum(functional.coefficients) % 7, 0)
        self.assertEqual(functional, sample_functional(7, 9, seed=3))

    def test_lattice(self):
        lattice = TupleLattice(3, 3)
        self.assertEqual(lattice.size, 36)
        self.assertEqual(lattice.z_count, 27)
        self.assertEqual(len(lattice.slice(0)), 9)
        self.assertTrue(np.all(lattice.tuples % 3 == np.arange(3)[None, :]))
        for k in (0, 17, 35):
            masks = lattice.tuple_masks(k)
            union = 0
            for m in masks:
                self.assertEqual(m & union, 0)
                union |= m
            self.assertEqual(union, (1 << 9) - 1)

    def test_lattice_cap(self):
        with self.assertRaises(BudgetExceeded):
            TupleLattice(3, 4, cap=10)

    def test_family_has_strong_property(self):
        for seed in range(5):
            with self.subTest(seed=seed):
                inst = build_partite_family(3, 3, self.system, sample_functional(7, 9, seed))
                self.assertTrue(validate_instance(inst).ok)
                self.assertEqual(int(inst.metadata["N"]), inst.N)
                self.assertEqual(check_strong_property(inst).status, StrongStatus.HOLDS)
                if inst.N >= inst.t:
                    self.assertEqual(find_rainbow(inst, 3).status, SearchStatus.NONE_EXISTS)

    def test_mismatched_modulus(self):
        with self.assertRaises(ParameterDomainError):
            build_partite_family(3, 3, self.system, sample_functional(11, 9, 0))

    def test_end_to_end(self):
        inst, system = probabilistic_f_construction(3, 3, prime=7, method="exhaustive", seed=1)
        self.assertEqual(inst.metadata["prime_provenance"], "user-supplied")
        report = family_report(inst)
        self.assertEqual(report.N, inst.N)
        self.assertEqual(report.lattice_size, 36)
        self.assertEqual(report.seed, 1)
        self.assertLessEqual(report.N, report.candidates)

class TestProbes(unittest.TestCase):
    def test_candidate_probability_is_exact(self):
        report = probability_probe(2, 3, 7, behrend_from_base_set(7, 3, [0, 1]))
        self.assertEqual(report.hyperplane_size, 7 ** 5)
        self.assertEqual(report.candidate_count, 686)
        self.assertGreaterEqual(report.isolated_count, 343)
        self.assertTrue(report.passed())

    def test_single_element_base(self):
        report = probability_probe(2, 3, 7, behrend_from_base_set(7, 3, [0]))
        self.assertEqual(report.candidate_count, 343)
        self.assertTrue(report.passed())

    def test_probe_cap(self):
        with self.assertRaises(BudgetExceeded):
            probability_probe(3, 3, 7, behrend_from_base_set(7, 3, [0, 1]), cap=1000)

    def test_span_of_identical_tuples(self):
        masks = TupleLattice(3, 3).tuple_masks(4)
        self.assertEqual(span_dimension(masks, masks), 3)
        self.assertEqual(component_graph(masks, masks).count, 3)

    def test_span_suite(self):
        report = span_suite(3, 3)
        self.assertTrue(report.passed())
        self.assertTrue(set(report.d_histogram) <= {"4", "5"})
        self.assertGreater(report.pairs_checked, 0)

    def test_counting(self):
        self.assertTrue(counting_probe(3, 3).passed())
        self.assertTrue(factorial_inequality_holds())
        with self.assertRaises(ParameterDomainError):
            counting_probe(2, 3)

if __name__ == "__main__":
    unittest.main()
