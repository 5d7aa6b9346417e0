import unittest
import os
import sys
import itertools

import numpy as np

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.constructions import t2_partite_construction
from sources.core import Instance, check_certificate, edge_mask, k22_instance, k4_instance
from sources.errors import GeneralPositionError, ParameterDomainError
from sources.fieldmath import det_mod_p, in_span_mod_p, rank_mod_p
from sources.multilinear import (FIELD_PRIME, FieldVector, TupleFamily, ambient_dimension,
                                 diagonal_phi, general_position_vectors, multilinear_rainbow_find,
                                 rainbow_via_multilinear, random_family, tensor_phi,
                                 tightness_family, wedge_phi_matching)
from sources.repro import random_distinct_family
from sources.search import SearchStatus

class TestFieldMath(unittest.TestCase):
    def test_rank_and_det(self):
        self.assertEqual(rank_mod_p([[1, 2], [2, 4]], 7), 1)
        self.assertEqual(det_mod_p([[1, 2], [3, 4]], 7), 5)
        self.assertEqual(det_mod_p([[1, 2], [2, 4]], 7), 0)

    def test_span(self):
        self.assertTrue(in_span_mod_p([2, 4], [[1, 2]], 7))
        self.assertFalse(in_span_mod_p([0, 1], [[1, 2]], 7))
        self.assertTrue(in_span_mod_p([0, 0], [], 7))

class TestMultilinearFind(unittest.TestCase):
    def test_tightness_families_exhausted(self):
        for t in (2, 3):
            for dim in (2, 3, 4):
                with self.subTest(t=t, dim=dim):
                    fam, phi = tightness_family(t, dim)
                    self.assertEqual(fam.N, fam.threshold)
                    result = multilinear_rainbow_find(fam, phi)
                    self.assertFalse(result.found)
                    self.assertEqual(result.status, "Exhausted")

    def test_one_more_tuple_is_found(self):
        fam, phi = tightness_family(2, 2)
        v = FieldVector((1, 1))
        bigger = TupleFamily.create(list(fam.tuples) + [(v, v)], 2, phi)
        result = multilinear_rainbow_find(bigger, phi)
        self.assertTrue(result.found)
        self.assertEqual(len(set(result.indices)), 2)
        self.assertNotEqual(phi(result.values(bigger)), 0)

    def test_single_tuple(self):
        phi = diagonal_phi(2)
        v = FieldVector((1, 0))
        fam = TupleFamily.create([(v, v)], 2, phi)
        self.assertEqual(multilinear_rainbow_find(fam, phi).status, "Exhausted")

    def test_random_families_above_threshold(self):
        for seed in range(6):
            t, dim = 2 + seed % 2, 2 + seed % 3
            with self.subTest(seed=seed, t=t, dim=dim):
                phi = tensor_phi(dim, t, seed)
                fam = random_family((t - 1) * dim + 1, t, dim, phi, seed)
                self.assertEqual(fam.N, fam.threshold + 1)
                result = multilinear_rainbow_find(fam, phi)
                self.assertTrue(result.found)
                self.assertEqual(len(set(result.indices)), t)
                self.assertNotEqual(phi(result.values(fam)), 0)

    def test_evaluation_cap(self):
        phi = tensor_phi(2, 2, 0)
        fam = random_family(3, 2, 2, phi, 0)
        self.assertEqual(multilinear_rainbow_find(fam, phi, max_evaluations=0).status, "Exhausted")

    def test_vanishing_tuple_rejected(self):
        phi = diagonal_phi(2)
        with self.assertRaises(ParameterDomainError):
            TupleFamily.create([(FieldVector.basis(0, 2), FieldVector.basis(1, 2))], 2, phi)

    def test_spot_check(self):
        phi = tensor_phi(3, 2, seed=1)
        fam = random_family(5, 2, 3, phi, seed=2)
        self.assertTrue(phi.spot_check(fam, seed=3))
        fam, phi = tightness_family(3, 3)
        self.assertTrue(phi.spot_check(fam, seed=4))

class TestGeneralPosition(unittest.TestCase):
    def test_all_minors_nonzero(self):
        vectors = general_position_vectors(8, 4, seed=0)
        self.assertEqual(len(vectors), 8)
        for subset in itertools.combinations(range(8), 4):
            self.assertNotEqual(det_mod_p([vectors[i].coords for i in subset], FIELD_PRIME), 0)

    def test_binary_field_fails(self):
        with self.assertRaises(GeneralPositionError):
            general_position_vectors(8, 4, seed=0, q=2, max_retries=3)

    def test_too_few_vectors(self):
        with self.assertRaises(ParameterDomainError):
            general_position_vectors(3, 4, seed=0)

class TestWedge(unittest.TestCase):
    def test_disjoint_edges_nonzero(self):
        inst = k4_instance()
        oracle, family = wedge_phi_matching(inst, seed=0)
        self.assertEqual(family.N, 3)
        self.assertEqual(family.dim, 6)
        for m in inst.matchings:
            self.assertNotEqual(oracle(list(m)), 0)
        self.assertEqual(oracle([edge_mask([0, 1]), edge_mask([0, 2])]), 0)
        self.assertTrue(oracle.spot_check(family, seed=1))

    def test_ambient_dimension(self):
        self.assertEqual(ambient_dimension(k4_instance()), 6)
        self.assertEqual(ambient_dimension(k22_instance()), 4)

class TestAlgebraicPath(unittest.TestCase):
    def test_no_rainbow_is_indeterminate(self):
        for inst in (t2_partite_construction(3), k22_instance()):
            outcome = rainbow_via_multilinear(inst, seed=0)
            self.assertEqual(outcome.status, SearchStatus.INDETERMINATE)
            self.assertEqual(outcome.path, "algebraic")

    def test_above_partite_threshold(self):
        inst = random_distinct_family(np.random.default_rng(0), 2, 2, 6, 9, partite=True)
        outcome = rainbow_via_multilinear(inst, seed=0)
        self.assertEqual(outcome.status, SearchStatus.FOUND)
        self.assertTrue(check_certificate(inst, outcome.certificate))
        self.assertEqual(outcome.stats["threshold_partite"], 4)

    def test_empty_instance(self):
        inst = Instance.create(2, 2, 4, [])
        self.assertEqual(rainbow_via_multilinear(inst).status, SearchStatus.INDETERMINATE)

if __name__ == "__main__":
    unittest.main()
