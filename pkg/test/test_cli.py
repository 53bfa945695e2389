""" Test the charvar command line: output formats and exit status """

import contextlib
import io
import json
import sys
import tempfile
import unittest
from pathlib import Path

libpath = str(Path(__file__).resolve().parents[1])
if libpath not in sys.path:
    sys.path.append(libpath)

import config  # noqa: F401
from charvartools.cli import EXIT_OK, EXIT_STAGE_FAILURE, EXIT_USAGE, build_parser, main
from helper import N2_F_TILDE


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        status = main(list(argv) + ["--verbosity", "0"])
    return status, out.getvalue()


class TestCommandLine(unittest.TestCase):
    def test_polynomial_json(self):
        status, out = run("--poly", N2_F_TILDE, "--no-cache", "--samples", "20")
        self.assertEqual(status, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data["outcome"], "complete")
        self.assertEqual(data["components"][0]["geometry"]["classification"]["verdict"], "P2 blown up at 7 points")

    def test_text_output(self):
        status, out = run("--word", "b", "--format", "text", "--no-cache")
        self.assertEqual(status, EXIT_OK)
        self.assertIn("outcome: no nonabelian component", out)

    def test_n_with_cache_dir(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            status, out = run("--n", "1", "--cache-dir", tmpdir, "--samples", "20")
            self.assertEqual(status, EXIT_OK)
            self.assertTrue((Path(tmpdir) / "intermediates.h5").exists())
            self.assertEqual(json.loads(out)["label"], "M_br(1/1)")

    def test_stage_failure(self):
        status, out = run("--poly", "z^2 - 2*x*z + x^2", "--no-cache")
        self.assertEqual(status, EXIT_STAGE_FAILURE)
        self.assertEqual(json.loads(out)["outcome"], "partial")

    def test_usage_errors(self):
        self.assertEqual(run("--n", "0", "--no-cache")[0], EXIT_USAGE)
        self.assertEqual(run("--poly", "x + q", "--no-cache")[0], EXIT_USAGE)
        self.assertEqual(run("--n", "1", "--radicands", "two", "--no-cache")[0], EXIT_USAGE)
        self.assertEqual(run("--tables", "--max-n", "0", "--no-cache")[0], EXIT_USAGE)
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["--n", "1", "--poly", "z"])
        self.assertEqual(ctx.exception.code, EXIT_USAGE)

    def test_tables(self):
        status, out = run("--tables", "--max-n", "1", "--no-cache", "--samples", "20")
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(json.loads(out)["mismatches"], 0)

    def test_parser_defaults(self):
        args = build_parser().parse_args(["--n", "2"])
        self.assertEqual((args.format, args.max_n, args.processes, args.seed), ("json", 4, 1, 0))


if __name__ == "__main__":
    unittest.main(argv=["first-arg-is-ignored"], exit=False, verbosity=3)
