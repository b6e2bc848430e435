"""Integration tests for the command-line flows."""

import io
import json
import math
import os
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from src.app import main
from src.utils.error_handlers import EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_PARSE_ERROR
from src.utils.formatters import format_float17


class CliTestCase(unittest.TestCase):
    """Runs main() with captured streams."""

    @classmethod
    def setUpClass(cls):
        cls.fixtures_dir = Path(__file__).parent.parent / "fixtures"

    def run_cli(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        code = main(list(argv), stdout=stdout, stderr=stderr)
        return code, stdout.getvalue(), stderr.getvalue()


class TestEvalFlow(CliTestCase):
    """Integration tests for eval: parse, evaluate, print canonically."""

    def test_documented_examples(self):
        """
        Test complete flow: expression text → element → canonical text.

        Covers the swap phase, the Neumann inverse and conjugation.
        """
        for expression, expected in (
            ("e[2]*e[1]", "(w^2)*e[1]*e[2]"),
            ("inv(1 + e[1])", "1 + (-1)*e[1] + e[1]^2"),
            ("grade(0, conj(e[1])*e[1])", "0"),
        ):
            code, out, _ = self.run_cli("eval", expression)
            self.assertEqual(code, EXIT_OK, expression)
            self.assertEqual(out, expected + "\n")

    def test_file_input_round_trips(self):
        code, out, _ = self.run_cli("eval", f"@{self.fixtures_dir / 'element.txt'}")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "2 + (w^2)*e[1]*e[2] + (1/2 - 3*i)*e[3]^2")

    def test_json_output_reloads(self):
        code, out, _ = self.run_cli("eval", "--json", "(w^2)*e[1]*e[2] + 1/2")
        self.assertEqual(code, EXIT_OK)
        record = json.loads(out)
        self.assertEqual(len(record["terms"]), 2)
        code, again, _ = self.run_cli("eval", out.strip())
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(again, "1/2 + (w^2)*e[1]*e[2]\n")

    def test_float_mode(self):
        code, out, _ = self.run_cli("--float", "eval", "1/2 + e[1]")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "0.5 + e[1]\n")

    def test_parse_error_exit_code(self):
        code, out, err = self.run_cli("eval", "e[1] + * e[2]")
        self.assertEqual(code, EXIT_PARSE_ERROR)
        self.assertEqual(out, "")
        self.assertIn("position 7", err)
        self.assertIn("\n  e[1] + * e[2]\n         ^", err)

    def test_domain_error_exit_code(self):
        code, _, err = self.run_cli("eval", "inv(e[1])")
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("NotInvertible", err)

    def test_inverse_floor_from_config(self):
        expression = "inv(1e-13 + e[1])"
        code, _, err = self.run_cli("--float", "eval", expression)
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("NotInvertible", err)
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "floor.conf")
            with open(path, "w", encoding="utf-8") as f:
                f.write("inverse_floor = 1e-15\n")
            code, out, _ = self.run_cli("--config", path, "--float", "eval", expression)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("e[1]", out)

    def test_missing_file(self):
        code, _, err = self.run_cli("eval", "@/no/such/element.txt")
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("File not found", err)

    def test_usage_error(self):
        code, _, _ = self.run_cli("frobnicate")
        self.assertEqual(code, 2)


class TestLawsFlow(CliTestCase):
    """Integration tests for the law suite command."""

    def test_passes_and_is_deterministic(self):
        first = self.run_cli("laws", "--seed", "1", "--trials", "20")
        second = self.run_cli("laws", "--seed", "1", "--trials", "20")
        self.assertEqual(first[0], EXIT_OK)
        self.assertEqual(first[1], second[1])
        lines = first[1].splitlines()
        self.assertEqual(lines[0], "law\tchecked\tfailures")
        self.assertEqual(lines[-1], "all laws hold")

    def test_injected_bug(self):
        code, out, _ = self.run_cli("laws", "--trials", "5", "--inject-sigma-bug")
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("counterexample: associativity:", out)

    def test_table_to_file(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "laws.tsv")
            code, out, _ = self.run_cli("laws", "--trials", "3", "--out", path)
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(out, "all laws hold\n")
            frame = pd.read_csv(path, sep="\t")
            self.assertEqual((frame["failures"] == 0).all(), True)

    def test_negative_trials(self):
        code, _, err = self.run_cli("laws", "--trials", "-1")
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("Invalid argument", err)


class TestNormFlow(CliTestCase):
    """Integration tests for norm and vage-check."""

    def test_default_scale(self):
        code, out, _ = self.run_cli("norm", "e[1]")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, f"H_-1\t{format_float17(math.exp(-1))}\n")

    def test_p_norms_and_levels(self):
        code, out, _ = self.run_cli("norm", "3 + 4*e[2]", "--p", "1", "--p", "2", "--scale", "0")
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(lines[:2], ["p-norm(1)\t7", "p-norm(2)\t5"])
        label, value = lines[2].split("\t")
        self.assertEqual(label, "H_0")
        self.assertAlmostEqual(float(value), 5.0, places=12)

    def test_vage_check(self):
        code, out, _ = self.run_cli("vage-check", "--p", "2", "--q", "1", "--trials", "30")
        self.assertEqual(code, EXIT_OK)
        frame = pd.read_csv(io.StringIO(out), sep="\t")
        self.assertEqual(len(frame), 30)
        self.assertTrue(frame["holds"].all())

    def test_vage_check_rejects_levels(self):
        code, _, err = self.run_cli("vage-check", "--p", "1", "--q", "1")
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("p must exceed q", err)


class TestBerezinFlow(CliTestCase):
    """Integration tests for the berezin command."""

    def test_index_forms(self):
        self.assertEqual(self.run_cli("berezin", "--index", "e[1]", "--input", "3*e[1] + e[2]")[1], "3\n")
        self.assertEqual(self.run_cli("berezin", "--index", "0,1", "--input", "e[1]*e[2]")[1], "(w)*e[1]\n")

    def test_full_adjoint(self):
        code, out, _ = self.run_cli("berezin", "--by", "1 + i*e[1]", "--input", "e[1]")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "(-i) + e[1]\n")

    def test_index_must_be_unit_monomial(self):
        code, _, _ = self.run_cli("berezin", "--index", "2*e[1]", "--input", "e[1]")
        self.assertEqual(code, EXIT_PARSE_ERROR)


class TestKernelFlows(CliTestCase):
    """Integration tests for covariance and diff-check."""

    def read_grid(self, text):
        return pd.read_csv(io.StringIO(text), sep="\t", index_col=0)

    def test_brownian_covariance(self):
        code, out, _ = self.run_cli("covariance", "--density", "bm", "--t", "0.25,0.5,1", "--workers", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("s\t0.25\t0.5\t1\n"))
        grid = self.read_grid(out)
        times = np.array([0.25, 0.5, 1.0])
        self.assertLess(np.abs(grid.to_numpy() - np.minimum.outer(times, times)).max(), 1e-5)

    def test_half_hurst_is_brownian(self):
        bm = self.run_cli("covariance", "--density", "bm", "--t", "0.3,0.9")
        fbm = self.run_cli("covariance", "--density", "fbm:H=0.5", "--t", "0.3,0.9")
        self.assertEqual(bm, fbm)

    def test_tabulated_density(self):
        spec = f"table:{self.fixtures_dir / 'density_table.csv'}"
        code, out, _ = self.run_cli("covariance", "--density", spec, "--t", "0.5,1")
        self.assertEqual(code, EXIT_OK)
        values = self.read_grid(out).to_numpy()
        self.assertEqual(values.shape, (2, 2))
        self.assertAlmostEqual(values[0, 1], values[1, 0], places=8)
        self.assertGreater(values[1, 1], values[0, 0])

    def test_series_mode_with_config(self):
        code, out, _ = self.run_cli(
            "--config", str(self.fixtures_dir / "engine.conf"),
            "covariance", "--density", "bm", "--t", "0.5", "--mode", "series", "--N", "200",
        )
        self.assertEqual(code, EXIT_OK)
        self.assertLess(abs(self.read_grid(out).iloc[0, 0] - 0.5), 5e-2)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "k.tsv")
            code, out, _ = self.run_cli("covariance", "--density", "bm", "--t", "0.5", "--s", "0.25,1", "--out", path)
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(out, "")
            grid = pd.read_csv(path, sep="\t", index_col=0)
            self.assertEqual(grid.shape, (2, 1))

    def test_invalid_density(self):
        code, _, err = self.run_cli("covariance", "--density", "fbm:H=1.5", "--t", "0.5")
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("Hurst", err)

    def test_bad_config(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "bad.conf")
            with open(path, "w", encoding="utf-8") as f:
                f.write("grid_points = 1\n")
            code, _, err = self.run_cli("--config", path, "covariance", "--density", "bm", "--t", "0.5")
        self.assertEqual(code, EXIT_DOMAIN_ERROR)
        self.assertIn("ConfigError", err)

    def test_diff_check(self):
        code, out, _ = self.run_cli("diff-check", "--density", "bm", "--N", "100")
        self.assertEqual(code, EXIT_OK)
        report = pd.read_csv(io.StringIO(out), sep="\t")
        self.assertEqual(list(report.columns), ["h", "error", "ratio"])
        self.assertTrue((report["ratio"].iloc[1:] >= 5).all())


if __name__ == '__main__':
    unittest.main()
