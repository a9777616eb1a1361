import io
import json
import math
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.tsirelson_lab import main
from src.tsirelson_lab.cli import _overrides, emit_plot_data, read_report_csv, report_to_csv, run, write_report_csv
from src.tsirelson_lab.config import max_support, norm_tolerance
from src.tsirelson_lab.norm_engine import verify_certificate
from src.tsirelson_lab.schema import (Command, FinVector, NormCertificate, ProbeReport, ProbeRow, RunConfig,
                                      Space)
from src.tsirelson_lab.schema.exceptions import PreconditionError
from src.tsirelson_lab.vectors import vector_from_json, vector_to_json


class TestCli(unittest.TestCase):
    def setUp(self):
        """Set up a scratch directory with a few vector literals."""
        self.test_dir = tempfile.TemporaryDirectory()
        self.block = self._write("block.json", vector_to_json(FinVector.basis_sum(range(4, 8))))
        self.single = self._write("single.json", vector_to_json(FinVector.basis_sum([1])))
        self.mixed = self._write("mixed.json", vector_to_json(FinVector.from_pairs([(2, 0.5), (5, -2.0), (9, 1.0)])))

    def tearDown(self):
        self.test_dir.cleanup()

    def _path(self, name: str) -> str:
        return os.path.join(self.test_dir.name, name)

    def _write(self, name: str, text: str) -> str:
        path = self._path(name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def _read(self, path: str) -> str:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()

    def _main(self, *argv: str) -> tuple[int, str, str]:
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        print(f"{' '.join(argv)} -> {code}\nstdout: {out.getvalue()}stderr: {err.getvalue()}")
        return code, out.getvalue(), err.getvalue()

    def test_norm_single_coordinate(self):
        code, out, _ = self._main("norm", "--space", "t2", "--input", self.single)
        self.assertEqual(0, code)
        payload = json.loads(out)
        self.assertEqual(1.0, payload["value"])
        self.assertEqual("t2", payload["space"])

    def test_norm_writes_replayable_certificate(self):
        certificate = self._path("tree.json")
        code, out, _ = self._main("norm", "--input", self.block, "--certificate", certificate)
        self.assertEqual(0, code)
        value = json.loads(out)["value"]
        self.assertAlmostEqual(math.sqrt(2.0), value, delta=1e-9)
        cert = NormCertificate.model_validate(json.loads(self._read(certificate)))
        self.assertAlmostEqual(value, verify_certificate(FinVector.basis_sum(range(4, 8)), cert), delta=1e-9)

    def test_norm_in_t(self):
        code, out, _ = self._main("norm", "--space", "t", "--input", self.block)
        self.assertEqual(0, code)
        self.assertAlmostEqual(2.0, json.loads(out)["value"], delta=1e-9)

    def test_snorm_and_dualnorm(self):
        code, out, _ = self._main("snorm", "--input", self.block)
        self.assertEqual(0, code)
        self.assertAlmostEqual(1.0, json.loads(out)["value"], delta=1e-9)

        code, out, _ = self._main("dualnorm", "--space", "t2", "--input", self.single)
        self.assertEqual(0, code)
        payload = json.loads(out)
        self.assertEqual(1.0, payload["lower"])
        self.assertEqual(1.0, payload["upper"])

        code, out, _ = self._main("dualnorm", "--space", "st2", "--input", self.mixed)
        self.assertEqual(0, code)
        payload = json.loads(out)
        self.assertLessEqual(payload["lower"], payload["upper"])

    def test_rearrange_and_spread_round_trip(self):
        target = self._path("d.json")
        code, _, _ = self._main("rearrange", "--input", self.mixed, "--out", target)
        self.assertEqual(0, code)
        self.assertEqual(((1, -2.0), (2, 1.0), (3, 0.5)), vector_from_json(self._read(target)).coords)

        code, out, _ = self._main("spread", "--input", self.mixed, "--k", "2", "--j", "1")
        self.assertEqual(0, code)
        self.assertEqual(((5, 0.5), (11, -2.0), (19, 1.0)), vector_from_json(out).coords)

        code, _, err = self._main("spread", "--input", self.mixed, "--k", "2", "--j", "2")
        self.assertEqual(1, code)
        self.assertIn("offset", err)

    def test_hierarchy(self):
        code, out, _ = self._main("hierarchy", "g", "--i", "2", "--n", "3")
        self.assertEqual(0, code)
        self.assertEqual(24, json.loads(out)["value"])

        code, out, _ = self._main("hierarchy", "g", "--i", "3", "--n", "3")
        self.assertEqual("saturated", json.loads(out)["value"])

        code, out, _ = self._main("hierarchy", "exp", "--i", "4", "--n", "3")
        self.assertEqual("inf", json.loads(out)["value"])

        code, out, _ = self._main("hierarchy", "kwapien", "--k", "2", "--eps", "0.5")
        self.assertEqual(256, json.loads(out)["value"])

        code, _, err = self._main("hierarchy", "log", "--i", "5", "--n", "16")
        self.assertEqual(1, code)
        self.assertIn("undefined", err)

    def test_support_cap_exit_code(self):
        big = self._write("big.json", vector_to_json(FinVector.basis_sum(range(1, 11))))
        code, out, err = self._main("norm", "--input", big, "--max-support", "4")
        self.assertEqual(2, code)
        self.assertEqual("", out)
        self.assertIn("cap 4", err)

    def test_malformed_input(self):
        bad = self._write("bad.json", '{"coords": [[1, 1.0]\n  [2, 2.0]]}')
        code, _, err = self._main("norm", "--input", bad)
        self.assertEqual(1, code)
        self.assertIn("line 2", err)

        code, _, err = self._main("norm", "--input", self._path("missing.json"))
        self.assertEqual(1, code)

    def test_invalid_arguments(self):
        code, _, err = self._main("norm", "--space", "st2", "--input", self.single)
        self.assertEqual(1, code)
        code, _, _ = self._main("norm")
        self.assertEqual(1, code)
        code, _, _ = self._main("norm", "--space", "q", "--input", self.single)
        self.assertEqual(1, code)
        code, _, _ = self._main("probe", "nonsense")
        self.assertEqual(1, code)

    def test_malformed_flag_value_exits_one(self):
        code, out, err = self._main("norm", "--input", self.single, "--seed", "abc")
        self.assertEqual(1, code)
        self.assertEqual("", out)
        self.assertIn("--seed", err)
        code, _, _ = self._main("norm", "--input", self.single, "--tol", "tight")
        self.assertEqual(1, code)
        code, _, _ = self._main("norm", "--input", self.single, "--no-such-flag")
        self.assertEqual(1, code)
        code, _, _ = self._main("--help")
        self.assertEqual(0, code)

    def test_failed_result_write_leaves_no_certificate(self):
        certificate = self._path("tree.json")
        taken = self._path("taken")
        os.mkdir(taken)
        code, _, _ = self._main("norm", "--input", self.block, "--out", taken, "--certificate", certificate)
        self.assertEqual(1, code)
        self.assertFalse(os.path.exists(certificate))
        self.assertEqual([], [name for name in os.listdir(self.test_dir.name) if name.endswith(".tmp")])

    def test_norm_reports_replayed_value(self):
        code, out, _ = self._main("norm", "--input", self.mixed, "--tol", "1e-12")
        self.assertEqual(0, code)
        payload = json.loads(out)
        self.assertAlmostEqual(payload["value"], payload["replayed"], delta=1e-12 * max(1.0, payload["value"]))
        code, out, _ = self._main("snorm", "--input", self.mixed, "--tol", "1e-12")
        self.assertEqual(0, code)
        payload = json.loads(out)
        self.assertAlmostEqual(payload["value"], payload["replayed"], delta=1e-12 * max(1.0, payload["value"]))

    def test_tolerance_and_cap_reach_the_engines(self):
        saved = {name: os.environ.get(name) for name in ("TSL_NORM_TOL", "TSL_MAX_SUPPORT")}
        run_config = RunConfig(command=Command.NORM, inputs=["v.json"], tol=0.25, max_support=16)
        with _overrides(run_config):
            self.assertEqual(0.25, norm_tolerance())
            self.assertEqual(16, max_support())
        self.assertEqual(saved, {name: os.environ.get(name) for name in saved})

    def test_failed_run_leaves_no_output_file(self):
        target = self._path("never.json")
        big = self._write("big.json", vector_to_json(FinVector.basis_sum(range(1, 11))))
        code, _, _ = self._main("norm", "--input", big, "--max-support", "4", "--out", target)
        self.assertEqual(2, code)
        self.assertFalse(os.path.exists(target))
        self.assertEqual(["big.json", "block.json", "mixed.json", "single.json"],
                         sorted(os.listdir(self.test_dir.name)))

    def test_probe_upper_h_is_byte_identical(self):
        first, second = self._path("a.csv"), self._path("b.csv")
        for target in (first, second):
            code, _, _ = self._main("probe", "upper-h", "--block-len", "2", "4", "--copies", "2", "--seed", "7",
                                    "--out", target)
            self.assertEqual(0, code)
        text = self._read(first)
        self.assertEqual(text, self._read(second))
        header = text.splitlines()[0]
        self.assertEqual("probe,space,n,estimate,stderr,ratio,seed,samples,block_len,M,alpha,replayed", header)
        self.assertEqual(3, len(text.splitlines()))

    def test_probe_cotype_report(self):
        target = self._path("cotype.csv")
        code, _, _ = self._main("probe", "cotype", "--space", "st2", "--n", "1", "2", "--samples", "100",
                                "--seed", "3", "--out", target)
        self.assertEqual(0, code)
        report = read_report_csv(target)
        self.assertEqual("cotype", report.probe)
        self.assertEqual([1, 2], [row.n for row in report.rows])
        self.assertTrue(all(row.samples == 100 and row.seed == 3 for row in report.rows))

    def test_plot_data_from_saved_report(self):
        report_path, plot_path = self._path("upper.csv"), self._path("plot.csv")
        self.assertEqual(0, self._main("probe", "upper-h", "--block-len", "2", "4", "--copies", "2",
                                       "--out", report_path)[0])
        code, _, _ = self._main("plot-data", "--input", report_path, "--out", plot_path)
        self.assertEqual(0, code)
        lines = self._read(plot_path).splitlines()
        self.assertEqual("block_len,M", lines[0])
        self.assertEqual(3, len(lines))
        ms = [float(line.split(",")[1]) for line in lines[1:]]
        self.assertLess(ms[0], ms[1])
        self.assertTrue(os.path.exists(self._path("plot_block_len_ratio.csv")))


class TestReports(unittest.TestCase):
    def setUp(self):
        self.test_dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.test_dir.cleanup()

    def test_one_row_report_gives_two_lines(self):
        report = ProbeReport(probe="h-growth", space="st2", rows=[ProbeRow(n=4, estimate=2.0, ratio=0.5)])
        path = os.path.join(self.test_dir.name, "plot.csv")
        written = emit_plot_data(report, path)
        self.assertEqual([path], written)
        with open(path, "r", encoding="utf-8") as f:
            self.assertEqual("n,ratio\n4,0.5\n", f.read())

    def test_empty_report_rejected(self):
        with self.assertRaises(PreconditionError):
            emit_plot_data(ProbeReport(probe="cotype", space="st2"), os.path.join(self.test_dir.name, "x.csv"))

    def test_csv_round_trip_keeps_extras(self):
        report = ProbeReport(probe="upper-h", space="st2",
                             rows=[ProbeRow(n=2, estimate=1.25, ratio=0.1 + 0.2, extras={"M": 1.5, "alpha": 0.5}),
                                   ProbeRow(n=2, estimate=2.0, ratio=1.0, extras={"M": 1.75})])
        path = os.path.join(self.test_dir.name, "r.csv")
        write_report_csv(report, path)
        loaded = read_report_csv(path)
        print(f"CSV:\n{report_to_csv(report)}")
        self.assertEqual(report.rows, loaded.rows)
        self.assertEqual([("block_len", "M"), ("block_len", "ratio")], loaded.series)

    def test_run_returns_exit_codes(self):
        config = RunConfig(command=Command.PROBE, space=Space.T2, probe="h-growth", params={"ns": [1, 4]})
        out = io.StringIO()
        with redirect_stdout(out):
            self.assertEqual(0, run(config))
        self.assertTrue(out.getvalue().startswith("probe,space,n,"))
        with redirect_stderr(io.StringIO()):
            self.assertEqual(1, run(RunConfig(command=Command.PROBE, probe="h-growth", space=Space.T)))


if __name__ == "__main__":
    unittest.main()
