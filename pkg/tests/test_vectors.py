import math
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.tsirelson_lab.schema import Explicit, FinVector, Interval
from src.tsirelson_lab.schema.exceptions import DomainError, InputParseError, PreconditionError
from src.tsirelson_lab.vectors import (Saturation, compact, decreasing_rearrange, disjoint_sum, hierarchy_g,
                                       interleaved_targets, iter_exp, iter_log, kwapien_count, l1_norm, l2_norm,
                                       linear_combination, linf_norm, map_indices, pairing, permute_values,
                                       place_values, restrict, restrict_range, scale, spread, supports_disjoint,
                                       vector_from_json, vector_to_json)


class TestFinVector(unittest.TestCase):
    def test_from_pairs_sorts_and_drops_zeros(self):
        x = FinVector.from_pairs([(5, 2.0), (1, -1.0), (3, 0.0)])
        print(f"x: {x.coords}")
        self.assertEqual(((1, -1.0), (5, 2.0)), x.coords)
        self.assertEqual(2, x.support_size)

    def test_from_pairs_rejects_repeated_index(self):
        with self.assertRaises(ValueError):
            FinVector.from_pairs([(2, 1.0), (2, 3.0)])

    def test_validated_constructor_rejects_bad_coords(self):
        for coords in (((0, 1.0),), ((2, 1.0), (1, 1.0)), ((1, 0.0),), ((1, math.inf),)):
            with self.assertRaises(ValueError):
                FinVector(coords=coords)

    def test_get_and_zero(self):
        x = FinVector.from_pairs([(2, 3.0), (7, -1.5)])
        self.assertEqual(3.0, x.get(2))
        self.assertEqual(0.0, x.get(3))
        self.assertTrue(FinVector.zero().is_zero())
        self.assertFalse(x.is_zero())


class TestRestrictionAndRearrangement(unittest.TestCase):
    def setUp(self):
        self.x = FinVector.from_pairs([(1, 0.5), (3, -2.0), (4, 1.0), (9, 2.0)])

    def test_restrict_to_interval_and_explicit(self):
        self.assertEqual(((3, -2.0), (4, 1.0)), restrict(self.x, Interval(lo=2, hi=5)).coords)
        self.assertEqual(((1, 0.5), (9, 2.0)), restrict(self.x, Explicit(indices=(1, 9, 12))).coords)
        self.assertTrue(restrict(self.x, Interval(lo=10, hi=20)).is_zero())
        self.assertEqual(((3, -2.0), (4, 1.0)), restrict_range(self.x, 3, 8).coords)

    def test_decreasing_rearrange_keeps_signs_and_tie_order(self):
        d = decreasing_rearrange(self.x)
        print(f"Dx: {d.coords}")
        # |-2| at index 3 precedes |2| at index 9.
        self.assertEqual(((1, -2.0), (2, 2.0), (3, 1.0), (4, 0.5)), d.coords)
        self.assertEqual(d, decreasing_rearrange(d))

    def test_compact_and_permute(self):
        self.assertEqual(((1, 0.5), (2, -2.0), (3, 1.0), (4, 2.0)), compact(self.x).coords)
        p = permute_values(self.x, [3, 2, 1, 0])
        self.assertEqual(((1, 2.0), (3, 1.0), (4, -2.0), (9, 0.5)), p.coords)
        with self.assertRaises(PreconditionError):
            permute_values(self.x, [0, 0, 1, 2])

    def test_place_values(self):
        self.assertEqual(((2, 1.0), (5, -1.0)), place_values([1.0, -1.0], [2, 5]).coords)


class TestSpreadsAndSums(unittest.TestCase):
    def test_spread(self):
        x = FinVector.from_pairs([(1, 1.0), (2, -3.0)])
        self.assertEqual(((3, 1.0), (6, -3.0)), spread(x, 3).coords)
        self.assertEqual(((4, 1.0), (7, -3.0)), spread(x, 3, 1).coords)
        self.assertEqual(x, spread(x, 1))

    def test_spread_rejects_bad_arguments(self):
        x = FinVector.basis_sum([1])
        for k, j in ((0, 0), (2, 2), (2, -1)):
            with self.assertRaises(PreconditionError):
                spread(x, k, j)

    def test_map_indices(self):
        x = FinVector.from_pairs([(1, 1.0), (2, 2.0), (3, 3.0)])
        self.assertEqual(((1, 1.0), (4, 2.0), (9, 3.0)), map_indices(x, lambda j: j * j).coords)
        with self.assertRaises(PreconditionError) as ctx:
            map_indices(x, lambda j: 5)
        print(f"Witness: {ctx.exception.witness}")
        self.assertEqual([5, 5, 5], ctx.exception.witness)
        with self.assertRaises(PreconditionError):
            map_indices(x, lambda j: j - 1)

    def test_disjoint_sum_consecutive_keeps_gaps(self):
        a = FinVector.from_pairs([(2, 1.0), (4, 2.0)])
        b = FinVector.from_pairs([(1, 3.0), (2, 4.0)])
        total = disjoint_sum([a, b])
        print(f"Consecutive: {total.coords}")
        self.assertEqual(((1, 1.0), (3, 2.0), (4, 3.0), (5, 4.0)), total.coords)

    def test_disjoint_sum_interleaved(self):
        a = FinVector.from_pairs([(1, 1.0), (2, 2.0)])
        b = FinVector.from_pairs([(1, 3.0), (2, 4.0), (3, 5.0)])
        total = disjoint_sum([a, b], layout="interleaved")
        self.assertEqual(((1, 1.0), (2, 3.0), (3, 2.0), (4, 4.0), (6, 5.0)), total.coords)
        self.assertEqual([[1, 3], [2, 4, 6]], interleaved_targets([2, 3]))
        with self.assertRaises(PreconditionError):
            disjoint_sum([a], layout="diagonal")


class TestArithmetic(unittest.TestCase):
    def test_norms_and_pairing(self):
        x = FinVector.from_pairs([(1, 3.0), (4, -4.0)])
        y = FinVector.from_pairs([(4, 0.5), (6, 1.0)])
        self.assertEqual(7.0, l1_norm(x))
        self.assertEqual(5.0, l2_norm(x))
        self.assertEqual(4.0, linf_norm(x))
        self.assertEqual(-2.0, pairing(x, y))
        self.assertEqual(0.0, linf_norm(FinVector.zero()))

    def test_linear_combination_cancels(self):
        x = FinVector.from_pairs([(1, 1.0), (2, 2.0)])
        total = linear_combination([x, scale(x, -1.0)], [1.0, 1.0])
        self.assertTrue(total.is_zero())
        self.assertTrue(scale(x, 0.0).is_zero())

    def test_supports_disjoint(self):
        a, b = FinVector.basis_sum([1, 2]), FinVector.basis_sum([3])
        self.assertTrue(supports_disjoint([a, b]))
        self.assertFalse(supports_disjoint([a, b, FinVector.basis_sum([2])]))


class TestCountingFunctions(unittest.TestCase):
    def test_hierarchy_small_values(self):
        self.assertEqual(4, hierarchy_g(0, 3))
        self.assertEqual(6, hierarchy_g(1, 3))
        self.assertEqual(24, hierarchy_g(2, 3))
        self.assertEqual(2, hierarchy_g(3, 1))
        self.assertEqual(2048, hierarchy_g(3, 2))

    def test_hierarchy_saturates(self):
        value = hierarchy_g(3, 3)
        print(f"g_3(3): {value!r}")
        self.assertIs(Saturation.SATURATED, value)
        self.assertIs(Saturation.SATURATED, hierarchy_g(2, 10, cap=1000))
        with self.assertRaises(PreconditionError):
            hierarchy_g(-1, 3)
        with self.assertRaises(PreconditionError):
            hierarchy_g(1, 0)

    def test_iterated_exp_and_log(self):
        self.assertEqual(16.0, iter_exp(2, 2))
        self.assertEqual(2.0 ** 256, iter_exp(3, 3))
        self.assertEqual(math.inf, iter_exp(4, 3))
        self.assertEqual(2.0, iter_log(2, 16))
        self.assertEqual(0.0, iter_log(4, 16))
        with self.assertRaises(DomainError):
            iter_log(5, 16)

    def test_kwapien_count(self):
        self.assertEqual(4, kwapien_count(1, 0.5))
        self.assertEqual(256, kwapien_count(2, 0.5))
        self.assertIs(Saturation.SATURATED, kwapien_count(20, 0.1))
        for eps in (0.0, 1.0, -0.5):
            with self.assertRaises(PreconditionError):
                kwapien_count(2, eps)


class TestVectorLiteral(unittest.TestCase):
    def test_round_trip(self):
        rng = np.random.Generator(np.random.Philox(key=3))
        x = place_values(rng.uniform(-2, 2, 5), [1, 4, 5, 11, 30])
        text = vector_to_json(x)
        print(f"Literal: {text}")
        self.assertEqual(x, vector_from_json(text))

    def test_malformed_json_reports_position(self):
        with self.assertRaises(InputParseError) as ctx:
            vector_from_json('{"coords": [[1, 2.0],\n  [2, ]]}', source="v.json")
        print(f"Error: {ctx.exception}")
        self.assertEqual(2, ctx.exception.line)
        self.assertIsNotNone(ctx.exception.column)
        self.assertIn("v.json", str(ctx.exception))

    def test_invalid_literal(self):
        for text in ('[1, 2]', '{"coords": [[0, 1.0]]}', '{"coords": [[2, 1.0], [1, 1.0]]}'):
            with self.assertRaises(InputParseError):
                vector_from_json(text)


if __name__ == "__main__":
    unittest.main()
