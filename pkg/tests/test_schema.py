import os
import sys
import unittest

from pydantic import ValidationError

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.tsirelson_lab import config
from src.tsirelson_lab.schema import (AdmissiblePartition, BoundPair, Command, Explicit, FinVector, GaussianConfig,
                                      Interval, ProbeReport, ProbeRow, RunConfig, Space, VectorFamily,
                                      is_admissible)
from src.tsirelson_lab.schema.exceptions import (PreconditionError, SizeError, TsirelsonError)


class TestExceptions(unittest.TestCase):
    def test_codes(self):
        self.assertEqual("boom (code: 3)", str(TsirelsonError("boom", code=3)))
        self.assertEqual("Tsirelson error", str(TsirelsonError()))
        self.assertEqual(1, PreconditionError("bad").code)
        error = SizeError("too big", cap=4)
        print(f"Error: {error}")
        self.assertEqual(2, error.code)
        self.assertEqual(4, error.cap)
        self.assertTrue(isinstance(error, TsirelsonError))


class TestIndexSets(unittest.TestCase):
    def test_interval(self):
        e = Interval(lo=3, hi=5)
        self.assertTrue(e.contains(4))
        self.assertFalse(e.contains(6))
        self.assertTrue(e.lt(Interval(lo=6, hi=9)))
        self.assertFalse(e.lt(Explicit(indices=(5, 8))))
        self.assertTrue(Explicit(indices=(3, 5)).issubset(e))
        with self.assertRaises(ValidationError):
            Interval(lo=5, hi=3)

    def test_explicit(self):
        with self.assertRaises(ValidationError):
            Explicit(indices=(3, 2))
        with self.assertRaises(ValidationError):
            Explicit(indices=())

    def test_admissibility(self):
        self.assertTrue(is_admissible([Interval(lo=2, hi=2), Interval(lo=3, hi=7)]))
        self.assertFalse(is_admissible([Interval(lo=1, hi=1), Interval(lo=2, hi=2)]))
        self.assertFalse(is_admissible([Interval(lo=3, hi=4), Interval(lo=4, hi=5)]))
        self.assertFalse(is_admissible([]))
        self.assertEqual(2, AdmissiblePartition((Interval(lo=2, hi=2), Explicit(indices=(4, 9)))).k)
        with self.assertRaises(ValidationError):
            AdmissiblePartition((Interval(lo=1, hi=1), Interval(lo=2, hi=2)))
        loaded = AdmissiblePartition.model_validate([{"kind": "interval", "lo": 3, "hi": 4},
                                                     {"kind": "explicit", "indices": [6, 9]}])
        self.assertEqual(2, len(loaded))
        self.assertEqual([{"kind": "interval", "lo": 3, "hi": 4}, {"kind": "explicit", "indices": [6, 9]}],
                         loaded.model_dump(mode="json"))


class TestModels(unittest.TestCase):
    def test_bound_pair(self):
        pair = BoundPair(lower=1.0, upper=1.5, witness=FinVector.from_pairs([(1, 0.5)]))
        self.assertEqual(0.5, pair.gap)
        flipped = pair.scaled(-2.0)
        self.assertEqual((2.0, 3.0), (flipped.lower, flipped.upper))
        self.assertEqual(((1, -0.5),), flipped.witness.coords)
        self.assertIn("gap", pair.model_dump())

    def test_space_parse(self):
        self.assertEqual(Space.ST2, Space.parse(" ST2 "))
        with self.assertRaises(ValueError):
            Space.parse("l2")

    def test_family_and_gaussian_config(self):
        with self.assertRaises(ValidationError):
            VectorFamily(members=())
        with self.assertRaises(ValidationError):
            VectorFamily(members=(FinVector.basis_sum([1]),), space=Space.T)
        with self.assertRaises(ValidationError):
            GaussianConfig(samples=0)
        with self.assertRaises(ValidationError):
            GaussianConfig(seed=2 ** 64)

    def test_probe_report_columns(self):
        report = ProbeReport(probe="upper-h", space="st2",
                             rows=[ProbeRow(n=4, estimate=1.0, ratio=0.5, extras={"M": 1.2}),
                                   ProbeRow(n=4, estimate=1.0, ratio=0.5, extras={"alpha": 0.5})])
        self.assertEqual(["M", "alpha"], report.extra_columns)
        self.assertEqual([0.5, 0.5], report.column("ratio"))
        self.assertEqual(1.2, report.column("M")[0])
        self.assertEqual(4, len(report.merged(report).rows))


class TestRunConfig(unittest.TestCase):
    def test_defaults(self):
        run = RunConfig(command=Command.NORM, inputs=["v.json"])
        self.assertEqual(Space.T2, run.space)
        self.assertEqual(2000, run.samples)
        self.assertEqual(1e-9, run.tol)

    def test_rejections(self):
        for kwargs in ({"command": Command.NORM},
                       {"command": Command.NORM, "inputs": ["v"], "space": Space.ST2},
                       {"command": Command.DUALNORM, "inputs": ["v"], "space": Space.T},
                       {"command": Command.PROBE},
                       {"command": Command.NORM, "inputs": ["v"], "tol": 0.0},
                       {"command": Command.NORM, "inputs": ["v"], "samples": 0},
                       {"command": Command.NORM, "inputs": ["v"], "max_support": 1 << 21}):
            with self.assertRaises(ValidationError, msg=str(kwargs)):
                RunConfig(**kwargs)


class TestCaps(unittest.TestCase):
    def setUp(self):
        self.saved = {k: os.environ.get(k) for k in ("TSL_MAX_SUPPORT", "TSL_BRUTE_FORCE_SUPPORT", "TSL_NORM_TOL")}

    def tearDown(self):
        for key, value in self.saved.items():
            if value is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = value

    def test_defaults_and_overrides(self):
        os.environ.pop("TSL_MAX_SUPPORT", None)
        self.assertEqual(1024, config.max_support())
        os.environ["TSL_MAX_SUPPORT"] = "100"
        self.assertEqual(100, config.max_support())
        os.environ["TSL_MAX_SUPPORT"] = "many"
        self.assertEqual(1024, config.max_support())
        os.environ["TSL_MAX_SUPPORT"] = "-3"
        self.assertEqual(1024, config.max_support())

    def test_norm_tolerance(self):
        os.environ.pop("TSL_NORM_TOL", None)
        self.assertEqual(1e-9, config.norm_tolerance())
        os.environ["TSL_NORM_TOL"] = "1e-6"
        self.assertEqual(1e-6, config.norm_tolerance())
        for raw in ("loose", "0", "-1e-3", "inf", "nan"):
            os.environ["TSL_NORM_TOL"] = raw
            self.assertEqual(1e-9, config.norm_tolerance(), msg=raw)

    def test_hard_limit_clamps(self):
        os.environ["TSL_BRUTE_FORCE_SUPPORT"] = "20"
        self.assertEqual(8, config.brute_force_support())


if __name__ == "__main__":
    unittest.main()
