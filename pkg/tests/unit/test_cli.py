import io
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from pcqo import __version__
from pcqo.bench.cli import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_ORACLE_MISMATCH,
    build_parser,
    cmd_oracle,
    cmd_pool,
    main,
)
from pcqo.exceptions import ConfigError

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


class TestPool(unittest.TestCase):

    def test_fock_pool_listing(self):
        out = io.StringIO()
        code = cmd_pool(CONFIG_DIR / "ukp3.conf", stream=out)
        self.assertEqual(code, EXIT_OK)
        text = out.getvalue()
        self.assertIn("[x_i]", text)
        self.assertIn("[x_i x_j]", text)
        self.assertIn("Q=5", text)

    def test_phase_space_pool_listing(self):
        out = io.StringIO()
        cmd_pool(CONFIG_DIR / "rosenbrock4.conf", stream=out)
        text = out.getvalue()
        for label in ("[p_i]", "[x_i p_j]", "[x_i^3]"):
            self.assertIn(label, text)
        self.assertIn("Q=11", text)

    def test_listing_is_stable(self):
        first, second = io.StringIO(), io.StringIO()
        cmd_pool(CONFIG_DIR / "ukp3.conf", stream=first)
        cmd_pool(CONFIG_DIR / "ukp3.conf", stream=second)
        self.assertEqual(first.getvalue(), second.getvalue())


class TestOracle(unittest.TestCase):

    def test_tabulated_knapsacks(self):
        for name, expected in (("ukp3.conf", "F_min = -8"), ("ukp4.conf", "F_min = -15")):
            with self.subTest(config=name):
                out = io.StringIO()
                self.assertEqual(cmd_oracle(CONFIG_DIR / name, stream=out), EXIT_OK)
                self.assertIn(expected, out.getvalue())

    def test_maxclique_minimizers(self):
        out = io.StringIO()
        self.assertEqual(cmd_oracle(CONFIG_DIR / "maxclique5.conf", stream=out), EXIT_OK)
        self.assertIn("(1, 0, 1, 1, 0)", out.getvalue())
        self.assertIn("(1, 1, 0, 1, 0)", out.getvalue())

    def test_mismatch_exit_code(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "wrong.conf"
            path.write_text(
                "problem.kind = ukp\nproblem.instance = 1\nproblem.bound = 3\nproblem.known_min = -9\n"
                "ansatz.kind = pcqo-fock\n",
                encoding="utf-8",
            )
            out = io.StringIO()
            self.assertEqual(cmd_oracle(path, stream=out), EXIT_ORACLE_MISMATCH)
            self.assertIn("mismatch", out.getvalue())

    def test_bound_is_required(self):
        with self.assertRaises(ConfigError):
            cmd_oracle(CONFIG_DIR / "rosenbrock4.conf", stream=io.StringIO())


class TestMain(unittest.TestCase):

    def test_parser_requires_config(self):
        with self.assertRaises(SystemExit):
            build_parser().parse_args(["run"])

    @patch('sys.stdout', new_callable=io.StringIO)
    def test_version(self, mock_stdout):
        with self.assertRaises(SystemExit):
            main(["--version"])
        self.assertIn(__version__, mock_stdout.getvalue())

    @patch('sys.stderr', new_callable=io.StringIO)
    def test_errors_exit_with_one(self, mock_stderr):
        code = main(["oracle", "--config", str(CONFIG_DIR / "rosenbrock4.conf"), "--log-level", "ERROR"])
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("problem.bound", mock_stderr.getvalue())

    @patch('sys.stderr', new_callable=io.StringIO)
    def test_invalid_settings(self, mock_stderr):
        code = main(["oracle", "--config", str(CONFIG_DIR / "ukp3.conf"), "--threads", "0"])
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("invalid settings", mock_stderr.getvalue())

    @patch('sys.stdout', new_callable=io.StringIO)
    def test_oracle_through_main(self, mock_stdout):
        code = main(["oracle", "--config", str(CONFIG_DIR / "ukp3.conf"), "--log-level", "WARNING"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("(0, 2, 0)", mock_stdout.getvalue())


if __name__ == '__main__':
    unittest.main()
