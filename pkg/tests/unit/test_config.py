import tempfile
import textwrap
import unittest
from pathlib import Path

from pcqo.bench.config import (
    build_problem,
    build_scenario,
    comparison_scenarios,
    load_config,
    pool_whitelist,
    scan_lines,
)
from pcqo.engine.models import OptimizerMethod
from pcqo.exceptions import ConfigError

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"

UKP_CONFIG = """\
# first tabulated knapsack
problem.kind = ukp
problem.instance = 1

ansatz.kind = pcqo-fock
simulation.cutoff = 4
optimizer.max_iterations = 20
optimizer.restarts = 2
"""


class ConfigTestCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.tmp = Path(self._tmp.name)

    def write(self, text: str, name: str = "scenario.conf") -> Path:
        path = self.tmp / name
        path.write_text(textwrap.dedent(text), encoding="utf-8")
        return path


class TestLoadConfig(ConfigTestCase):

    def test_valid_file(self):
        config = load_config(self.write(UKP_CONFIG))
        self.assertEqual(config.problem.kind, "ukp")
        self.assertEqual(config.simulation.cutoff, 4)
        self.assertEqual(config.optimizer.method, OptimizerMethod.ADAM)
        self.assertEqual(config.optimizer.max_iterations, 20)
        scenario = build_scenario(config)
        self.assertEqual(scenario.n_params, 5)
        self.assertEqual(scenario.circuit.cutoff, 4)

    def test_cutoff_too_small_names_the_line(self):
        path = self.write(UKP_CONFIG.replace("simulation.cutoff = 4", "simulation.cutoff = 2"))
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        lines = [line for line, _ in context.exception.problems]
        self.assertEqual(lines, [6])
        self.assertIn("line 6", str(context.exception))

    def test_unknown_key(self):
        path = self.write(UKP_CONFIG + "problem.colour = blue\n")
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertEqual(context.exception.problems[0][0], 9)
        self.assertIn("problem.colour", context.exception.problems[0][1])

    def test_unknown_section_and_malformed_line(self):
        path = self.write(UKP_CONFIG + "network.port = 80\nnot an assignment\n")
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertEqual([line for line, _ in context.exception.problems], [9, 10])

    def test_duplicate_key(self):
        path = self.write(UKP_CONFIG + "simulation.cutoff = 6\n")
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertIn("already set on line 6", context.exception.problems[0][1])

    def test_encoding_mismatch(self):
        path = self.write(UKP_CONFIG.replace("pcqo-fock", "pcqo-phase"))
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertIn("phase-space", str(context.exception))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(self.tmp / "absent.conf")

    def test_ukp_without_data(self):
        path = self.write("problem.kind = ukp\nansatz.kind = pcqo-fock\n")
        with self.assertRaises(ConfigError):
            load_config(path)

    def test_seed_override_and_echo(self):
        config = load_config(self.write(UKP_CONFIG)).with_overrides(seed=42)
        self.assertEqual(config.optimizer.seed, 42)
        echo = config.echo()
        self.assertEqual(echo["optimizer"]["seed"], 42)
        self.assertEqual(echo["simulation"]["hbar"], 2.0)
        self.assertEqual(echo["output"]["trace"], "trace.csv")


class TestFactories(ConfigTestCase):

    def test_maxclique_from_edges(self):
        path = self.write(
            """\
            problem.kind = maxclique
            problem.edges = 0-1, 1-2, 0-2
            ansatz.kind = pcqo-fock
            """
        )
        problem = build_problem(load_config(path))
        self.assertEqual(problem.n_vars, 3)
        self.assertEqual(problem.known_optimum.value, -3.0)

    def test_bad_edge(self):
        path = self.write("problem.kind = maxclique\nproblem.edges = 0:1\nansatz.kind = pcqo-fock\n")
        with self.assertRaises(ConfigError) as context:
            load_config(path)
        self.assertEqual(context.exception.problems[0][0], 2)

    def test_pool_ansatz_from_whitelist(self):
        path = self.write(
            """\
            problem.kind = ukp
            problem.instance = 1
            ansatz.kind = pcqo-pool
            ansatz.whitelist = X, CZ
            ansatz.connectivity = all-to-all
            simulation.cutoff = 4
            """
        )
        config = load_config(path)
        self.assertEqual(pool_whitelist(config, build_problem(config)), ["X", "CZ"])
        self.assertEqual(build_scenario(config).n_params, 6)

    def test_default_whitelists(self):
        config = load_config(self.write(UKP_CONFIG))
        self.assertEqual(pool_whitelist(config, build_problem(config)), ["X", "CZ"])

    def test_comparison_scenarios(self):
        config = load_config(self.write(UKP_CONFIG))
        scenarios = comparison_scenarios(config)
        self.assertEqual(list(scenarios), ["pcqo", "cvqaoa-shared", "cvqaoa-multi"])
        self.assertEqual([s.n_params for s in scenarios.values()], [5, 2, 10])

    def test_cvqaoa_ansatz(self):
        path = self.write(UKP_CONFIG.replace("pcqo-fock", "cvqaoa") + "ansatz.variant = multi-angle\n")
        self.assertEqual(build_scenario(load_config(path)).n_params, 10)


class TestBundledConfigs(unittest.TestCase):

    def test_every_bundled_config_builds(self):
        paths = sorted(CONFIG_DIR.glob("*.conf"))
        self.assertGreaterEqual(len(paths), 8)
        for path in paths:
            with self.subTest(config=path.name):
                config = load_config(path)
                scenario = build_scenario(config)
                self.assertGreater(scenario.n_params, 0)

    def test_scan_lines_skips_comments(self):
        lines, problems = scan_lines("# comment\n\nproblem.kind = ukp\n")
        self.assertEqual(lines, {"problem.kind": 3})
        self.assertEqual(problems, [])


if __name__ == '__main__':
    unittest.main()
