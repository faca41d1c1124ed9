import contextlib
import io
import os
import tempfile
import unittest

import yaml

from toric_residues.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, main

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def run_cli(*argv):
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout):
        code = main(list(argv))
    return code, yaml.safe_load(stdout.getvalue())


class ParserTestCase(unittest.TestCase):
    def test_options(self):
        args = build_parser().parse_args(["series", "p.yaml", "--bound", "6", "--v0", "1,-4", "--seed", "3"])
        self.assertEqual(args.command, "series")
        self.assertEqual(args.bound, 6)
        self.assertEqual(args.v0, (1, -4))
        self.assertEqual(args.seed, 3)
        self.assertEqual(args.format, "report")

    def test_bad_vector(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(["series", "p.yaml", "--v0", "a,b"])


class CommandTestCase(unittest.TestCase):
    def test_validate(self):
        code, document = run_cli("validate", os.path.join(FIXTURES, "p1.yaml"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(document["status"], "pass")
        self.assertIn("coherence", [check["check"] for check in document["checks"]])

    def test_validate_overlap(self):
        """ The failed check and the offending pair are reported """
        code, document = run_cli("validate", os.path.join(FIXTURES, "p1_overlap.yaml"))
        self.assertEqual(code, EXIT_FAILURE)
        (check,) = document["checks"]
        self.assertEqual(check["check"], "triangulation-overlap")
        self.assertEqual(check["status"], "fail")
        self.assertEqual(check["witnesses"]["pair"], [0, 1])

    def test_validate_empty_part(self):
        code, document = run_cli("validate", os.path.join(FIXTURES, "p1_empty_part.yaml"))
        self.assertEqual(code, EXIT_FAILURE)
        self.assertEqual(document["checks"][0]["check"], "empty-part")

    def test_malformed_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "broken.yaml")
            with open(path, "wt", encoding="utf8") as f:
                f.write("dimension: [1\n")
            code, document = run_cli("series", path)
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(document["checks"][0]["check"], "problem-file")

    def test_series(self):
        code, document = run_cli("series", os.path.join(FIXTURES, "p1.yaml"))
        self.assertEqual(code, EXIT_OK)
        records = document["tables"]["residue-series"]
        self.assertEqual([r["beta"] for r in records], [[0, 0], [1, 1], [2, 2]])
        self.assertEqual([r["value"] for r in records], ["1", "4", "16"])

    def test_series_plane(self):
        code, document = run_cli("series", os.path.join(FIXTURES, "p2.yaml"))
        self.assertEqual(code, EXIT_OK)
        records = document["tables"]["residue-series"]
        self.assertEqual([(r["beta"], r["value"]) for r in records], [([0, 0, 0], "1"), ([1, 1, 1], "-27")])

    def test_series_hypersurface(self):
        """ Coefficients 4^k of the hypersurface series """
        code, document = run_cli("series", os.path.join(FIXTURES, "p1_hypersurface.yaml"), "--format", "table")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual([r["value"] for r in document], ["1", "4", "16", "64"])
        self.assertEqual([r["coordinates"] for r in document], [[0], [1], [2], [3]])

    def test_series_bound(self):
        code, document = run_cli("series", os.path.join(FIXTURES, "p1.yaml"), "--bound", "2")
        self.assertEqual(len(document["tables"]["residue-series"]), 2)

    def test_series_square(self):
        code, document = run_cli("series", os.path.join(FIXTURES, "square.yaml"), "--bound", "2")
        self.assertEqual(code, EXIT_OK)
        records = document["tables"]["complete-intersection"]
        self.assertEqual(records[0]["beta"], [0, 0, 0, 0])
        self.assertEqual(records[0]["value"], "1")

    def test_mixed_volume(self):
        code, document = run_cli("mixed-volume", os.path.join(FIXTURES, "square.yaml"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(
            document["mixed_volumes"],
            [
                {"k_bar": [0, 2], "value": "0"},
                {"k_bar": [1, 1], "value": "4"},
                {"k_bar": [2, 0], "value": "0"},
            ],
        )

    def test_mixed_volume_without_partition(self):
        code, document = run_cli("mixed-volume", os.path.join(FIXTURES, "triangle.yaml"))
        self.assertEqual(code, EXIT_FAILURE)
        self.assertEqual(document["error"]["check"], "nef-partition")

    def test_verify(self):
        code, document = run_cli("verify", os.path.join(FIXTURES, "p1.yaml"), "--seed", "5")
        self.assertEqual(code, EXIT_OK)
        names = {check["check"] for check in document["checks"]}
        self.assertTrue({"jk-seeds", "morrison-plesser", "substitution", "mixed-volume-theorem"} <= names)


if __name__ == "__main__":
    unittest.main()
