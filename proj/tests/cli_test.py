"""End-to-end checks of the carleson_kit command line.

usage: cli_test.py <binary> <source dir>
"""

import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BIN = None
SRC = None


def data(name):
    return os.path.join(SRC, "tests", "data", name)


def schema(name):
    with open(os.path.join(SRC, "docs", "schema", name)) as f:
        return json.load(f)


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.report = schema("report.schema.json")
        cls.inputs = schema("input.schema.json")
        cls.config = schema("config.schema.json")
        cls.tmp = tempfile.TemporaryDirectory()

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def run_cli(self, *args):
        p = subprocess.run([BIN, *args], capture_output=True, text=True, timeout=120)
        doc = json.loads(p.stdout) if p.stdout.strip() else None
        if doc is not None:
            jsonschema.validate(doc, self.report)
        return p.returncode, doc

    def check_input(self, command, name):
        with open(data(name)) as f:
            doc = json.load(f)
        sub = dict(self.inputs)
        sub["$ref"] = "#/$defs/" + command
        jsonschema.validate(doc, sub)

    def test_every_command_passes_on_sample_input(self):
        cases = [
            ("sequence", "sequence.json"),
            ("carleson", "carleson_atoms.json"),
            ("carleson", "carleson_curve.json"),
            ("contour", "contour_z.json"),
            ("embedding", "embedding.json"),
            ("system", "system_orthogonal.json"),
            ("construct", "construct_scalar.json"),
            ("weight", "weight_one.json"),
            ("weight", "weight_cos.json"),
        ]
        for command, name in cases:
            with self.subTest(command=command, input=name):
                self.check_input(command, name)
                code, doc = self.run_cli(command, "--input", data(name))
                self.assertEqual(code, 0, doc)
                self.assertEqual(doc["status"], "pass")
                self.assertEqual(doc["command"], command)
                self.assertTrue(all(c["pass"] for c in doc["checks"]))

    def test_weight_one(self):
        code, doc = self.run_cli("weight", "--input", data("weight_one.json"))
        self.assertEqual(code, 0)
        self.assertEqual(doc["results"]["level"], 5)

    def test_weight_cosine_p0(self):
        code, doc = self.run_cli("weight", "--input", data("weight_cos.json"), "--section", "32")
        self.assertEqual(code, 0)
        p0 = doc["results"]["p0"]
        self.assertAlmostEqual(p0["rhs"], 2 / math.sqrt(3), places=8)
        self.assertLessEqual(p0["lhs"], p0["rhs"] + 1e-8)

    def test_system_orthogonal(self):
        code, doc = self.run_cli("system", "--input", data("system_orthogonal.json"))
        self.assertEqual(code, 0)
        self.assertAlmostEqual(doc["results"]["uniform_minimality"], 1.0, places=12)
        self.assertAlmostEqual(doc["results"]["orthogonalizer_condition"], 1.0, places=12)

    def test_contour_identity_writes_svg(self):
        svg = os.path.join(self.tmp.name, "z.svg")
        code, doc = self.run_cli("contour", "--input", data("contour_z.json"), "--epsilon", "0.1", "--svg", svg)
        self.assertEqual(code, 0)
        names = {c["name"]: c for c in doc["checks"]}
        self.assertTrue(names["sandwich"]["pass"])
        self.assertIn("contour_carleson_norm", doc["results"])
        self.assertLessEqual(doc["results"]["contour_carleson_norm"], 10.0)
        with open(svg) as f:
            text = f.read()
        self.assertTrue(text.lstrip().startswith("<svg") or text.lstrip().startswith("<?xml"))
        self.assertIn("</svg>", text)

    def test_failed_check_exits_one(self):
        code, doc = self.run_cli("embedding", "--input", data("embedding_noncontractive.json"))
        self.assertEqual(code, 1)
        self.assertEqual(doc["status"], "fail")

    def test_input_errors_exit_two(self):
        for args in (
            ["sequence", "--input", data("bad_duplicate.json")],
            ["sequence", "--input", data("bad_parse.json")],
            ["sequence", "--input", data("missing.json")],
            ["contour", "--input", data("contour_z.json"), "--epsilon", "1.5"],
        ):
            with self.subTest(args=args):
                code, doc = self.run_cli(*args)
                self.assertEqual(code, 2)
                if doc is not None:
                    self.assertEqual(doc["status"], "input_error")
        p = subprocess.run([BIN, "weight", "--no-such-flag"], capture_output=True, text=True)
        self.assertEqual(p.returncode, 2)

    def test_config_file_and_override(self):
        with open(data("config_weight.json")) as f:
            jsonschema.validate(json.load(f), self.config)
        out = os.path.join(self.tmp.name, "cfg.json")
        code, doc = self.run_cli("--config", data("config_weight.json"), "weight")
        self.assertEqual(code, 0)
        self.assertEqual(doc["inputs"]["depth"], 10)
        code, _ = self.run_cli("--config", data("config_weight.json"), "weight", "--depth", "8", "--out", out)
        self.assertEqual(code, 0)
        with open(out) as f:
            written = json.load(f)
        jsonschema.validate(written, self.report)
        self.assertEqual(written["inputs"]["depth"], 8)

    def test_deterministic_output(self):
        a = subprocess.run([BIN, "construct", "--input", data("construct_scalar.json"), "--seed", "3"], capture_output=True)
        b = subprocess.run([BIN, "construct", "--input", data("construct_scalar.json"), "--seed", "3"], capture_output=True)
        self.assertEqual(a.returncode, 0)
        self.assertEqual(a.stdout, b.stdout)


if __name__ == "__main__":
    BIN, SRC = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
