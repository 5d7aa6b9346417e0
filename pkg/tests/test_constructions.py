import unittest
import os
import sys
from math import comb

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))  # Add project root to Python path
from sources.constructions import (GENERATORS, ShiftTuple, SumTupleSystem, construction_formula,
                                   fixed_r_blocks, fixed_r_construction, fixed_r_tuples,
                                   generate_sum_tuples, lift_uniformity, simple_F_construction,
                                   simple_f_construction, symbol_occurrence_check,
                                   t2_complete_construction, t2_partite_construction,
                                   tuples_to_matchings_F, verify_sum_tuples)
from sources.core import Instance, k4_instance, validate_instance
from sources.errors import InvalidTupleSystem, ParameterDomainError
from sources.search import SearchStatus, StrongStatus, check_strong_property, find_rainbow

class TestCounts(unittest.TestCase):
    def test_fixed_r(self):
        inst = fixed_r_construction(3, 12)
        self.assertEqual(inst.N, 27)
        self.assertTrue(validate_instance(inst).ok)
        self.assertTrue(inst.is_partite)

    def test_simple_F(self):
        self.assertEqual(simple_F_construction(2, 3).N, 4)
        self.assertEqual(simple_F_construction(4, 2).N, 8)
        for r, t in ((2, 3), (3, 2), (3, 3), (4, 2)):
            inst = simple_F_construction(r, t)
            self.assertEqual(inst.N, construction_formula("simple-F", r, t))
            self.assertTrue(validate_instance(inst).ok)
            self.assertFalse(inst.is_partite)

    def test_simple_f(self):
        self.assertEqual(simple_f_construction(3, 3).N, 6)
        for r, t in ((3, 2), (3, 3), (4, 3)):
            inst = simple_f_construction(r, t)
            self.assertEqual(inst.N, construction_formula("simple-f", r, t))
            self.assertTrue(validate_instance(inst).ok)

    def test_t2_families(self):
        for r in range(2, 7):
            self.assertEqual(t2_complete_construction(r).N, comb(2 * r, r) // 2)
        for r in range(2, 9):
            inst = t2_partite_construction(r)
            self.assertEqual(inst.N, 2 ** (r - 1))
            self.assertTrue(validate_instance(inst).ok)

    def test_parameter_domain(self):
        with self.assertRaises(ParameterDomainError):
            fixed_r_construction(3, 5)
        with self.assertRaises(ParameterDomainError):
            simple_f_construction(2, 3)
        with self.assertRaises(ParameterDomainError):
            construction_formula("nope", 2, 2)

    def test_generator_table(self):
        self.assertEqual(GENERATORS["t2-complete"](3, 2).N, 10)

class TestNoRainbow(unittest.TestCase):
    def test_small_constructions(self):
        for inst in (simple_F_construction(2, 3), simple_F_construction(4, 2),
                     simple_f_construction(3, 3), simple_f_construction(3, 2),
                     t2_complete_construction(3), t2_partite_construction(4)):
            with self.subTest(generator=inst.metadata["generator"], r=inst.r, t=inst.t):
                self.assertEqual(find_rainbow(inst, inst.t).status, SearchStatus.NONE_EXISTS)

    def test_fixed_r_has_none(self):
        inst = fixed_r_construction(3, 12)
        self.assertEqual(find_rainbow(inst, inst.t).status, SearchStatus.NONE_EXISTS)

    def test_t2_strong_property(self):
        self.assertEqual(check_strong_property(t2_complete_construction(3)).status, StrongStatus.HOLDS)
        self.assertEqual(check_strong_property(t2_partite_construction(3)).status, StrongStatus.HOLDS)

class TestFixedRTuples(unittest.TestCase):
    def setUp(self):
        self.r, self.t = 3, 12
        self.blocks = fixed_r_blocks(self.r, self.t)

    def test_blocks(self):
        self.assertEqual(self.blocks, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])

    def test_every_symbol_once_per_position(self):
        tuples = fixed_r_tuples((2, 4, 9), self.r, self.t)
        self.assertEqual(len(tuples), self.t)
        self.assertTrue(symbol_occurrence_check(tuples, self.r, self.t))

    def test_shift(self):
        tup = ShiftTuple((1, "a2", 3))
        self.assertEqual(tup.shift().entries, ("a2", 3, 1))
        self.assertEqual(tup.shift(3), tup)

class TestLift(unittest.TestCase):
    def test_lift_keeps_non_existence(self):
        base = simple_F_construction(2, 3)
        lifted = lift_uniformity(base, 3)
        self.assertEqual(lifted.r, 3)
        self.assertEqual(lifted.num_vertices, 9)
        self.assertEqual(lifted.N, base.N)
        self.assertTrue(validate_instance(lifted).ok)
        self.assertEqual(find_rainbow(lifted, 3).status, SearchStatus.NONE_EXISTS)

    def test_lift_extends_partition(self):
        lifted = lift_uniformity(t2_partite_construction(2), 3)
        self.assertEqual(len(lifted.partition), 3)
        self.assertTrue(validate_instance(lifted).ok)

    def test_lift_rejects(self):
        with self.assertRaises(ParameterDomainError):
            lift_uniformity(k4_instance(), 4)
        not_perfect = Instance.from_vertex_lists(2, 2, 5, [[[0, 1], [2, 3]]])
        with self.assertRaises(ParameterDomainError):
            lift_uniformity(not_perfect, 3)

class TestSumTuples(unittest.TestCase):
    def test_generated_system(self):
        system = generate_sum_tuples(3, 6)
        self.assertGreaterEqual(system.size, 1)
        verify_sum_tuples(system)
        inst = tuples_to_matchings_F(system)
        self.assertEqual((inst.r, inst.t, inst.num_vertices), (3, 3, 9))
        self.assertTrue(validate_instance(inst).ok)
        self.assertEqual(find_rainbow(inst, 3).status, SearchStatus.NONE_EXISTS)

    def test_mixed_sum_rejected(self):
        a, b, c = 0b000011, 0b001100, 0b110000
        with self.assertRaises(InvalidTupleSystem):
            verify_sum_tuples(SumTupleSystem(n=6, t=3, tuples=((a, b, c), (a, c, b))))

    def test_weight_rejected(self):
        with self.assertRaises(InvalidTupleSystem):
            verify_sum_tuples(SumTupleSystem(n=6, t=3, tuples=((0b1, 0b111110, 0),)))

    def test_parameters(self):
        with self.assertRaises(ParameterDomainError):
            generate_sum_tuples(2, 4)
        with self.assertRaises(ParameterDomainError):
            generate_sum_tuples(3, 7)

if __name__ == "__main__":
    unittest.main()
