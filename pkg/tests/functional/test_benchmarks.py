"""End-to-end bench runs on the bundled scenarios. Run with ``pytest -m slow``."""

import io
import json
from pathlib import Path

import numpy as np
import pytest

from pcqo.bench.cli import EXIT_OK, EXIT_TRUNCATION_UNSAFE, cmd_compare, cmd_oracle, cmd_run
from pcqo.bench.config import build_scenario, load_config
from pcqo.bench.settings import PcqoSettings
from pcqo.engine.analytics import pattern_mass

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"
ENERGY_TOL = 1e-2
EDGE_LIMIT = 0.05
# the D=3 experiment circuits populate the top level by construction
SMALL_CUTOFF = (EXIT_OK, EXIT_TRUNCATION_UNSAFE)

pytestmark = pytest.mark.slow


def run_config(name: str, out: Path, allowed=(EXIT_OK,)) -> dict:
    code = cmd_run(CONFIG_DIR / name, PcqoSettings(out_dir=str(out)), stream=io.StringIO())
    assert code in allowed
    config = load_config(CONFIG_DIR / name)
    return json.loads((out / config.output.summary).read_text(encoding="utf-8"))


def best_state(name: str, summary: dict):
    scenario = build_scenario(load_config(CONFIG_DIR / name))
    params = summary["restarts"][summary["best_restart"]]["best_params"]
    return scenario.final_state(np.asarray(params))


@pytest.mark.parametrize(("name", "expected"), [("ukp3.conf", "F_min = -8"), ("ukp4.conf", "F_min = -15")])
def test_oracle_certifies_knapsacks(name, expected):
    out = io.StringIO()
    assert cmd_oracle(CONFIG_DIR / name, stream=out) == EXIT_OK
    assert expected in out.getvalue()


@pytest.mark.parametrize(
    ("name", "optimum", "patterns", "min_mass"),
    [
        ("ukp3.conf", -8.0, [(0, 1, 0), (0, 2, 0), (0, 3, 0)], 0.60),
        ("ukp4.conf", -15.0, [(4, 0, 0, 0), (5, 0, 0, 0), (6, 0, 0, 0)], 0.35),
    ],
)
def test_knapsack_convergence(tmp_path, name, optimum, patterns, min_mass):
    summary = run_config(name, tmp_path)
    assert summary["best_energy"] <= optimum + ENERGY_TOL
    assert summary["diagnostics"]["edge_population"] < EDGE_LIMIT
    assert pattern_mass(best_state(name, summary), patterns) >= min_mass


@pytest.mark.parametrize("name", ["maxclique5.conf", "maxclique6.conf"])
def test_maxclique_every_restart(tmp_path, name):
    summary = run_config(name, tmp_path)
    cliques = {(1, 0, 1, 1, 0), (1, 1, 0, 1, 0)}
    scenario = build_scenario(load_config(CONFIG_DIR / name))
    for restart in summary["restarts"]:
        assert restart["best_energy"] == pytest.approx(-3.0, abs=ENERGY_TOL)
        rounded = scenario.diagnose(np.asarray(restart["best_params"])).rounded
        assert tuple(rounded[:5]) in cliques
        assert all(n == 0 for n in rounded[5:])


def test_rosenbrock(tmp_path):
    summary = run_config("rosenbrock4.conf", tmp_path)
    assert summary["best_energy"] <= 0.1
    finals = [r["final_energy"] for r in summary["restarts"]]
    assert np.mean(finals) <= 3.0


def test_toy_sixth(tmp_path):
    summary = run_config("toy_sixth.conf", tmp_path)
    assert summary["best_energy"] <= -0.020


def test_pcqo_beats_cvqaoa(tmp_path):
    out = io.StringIO()
    cmd_compare(CONFIG_DIR / "compare_ukp3.conf", PcqoSettings(out_dir=str(tmp_path)), stream=out)
    summary = json.loads((tmp_path / "compare_ukp3_summary.json").read_text(encoding="utf-8"))
    finals = {name: record["best_energy"] for name, record in summary["algorithms"].items()}
    assert finals["pcqo"] <= -8.0 + ENERGY_TOL
    assert finals["pcqo"] < finals["cvqaoa-shared"]
    assert finals["pcqo"] < finals["cvqaoa-multi"]
    assert "pcqo outperforms" in out.getvalue()


def test_experiment_reduction(tmp_path):
    summary = run_config("experiment.conf", tmp_path, SMALL_CUTOFF)
    assert summary["circuit"]["n_params"] == 7
    assert summary["best_energy"] <= 2.5e-3
    means = summary["diagnostics"]["means"]
    assert means[0] + means[2] == pytest.approx(0.75, abs=0.05)


def test_experiment_full_chip(tmp_path):
    summary = run_config("experiment_chip.conf", tmp_path, SMALL_CUTOFF)
    state = best_state("experiment_chip.conf", summary)
    probs = state.probabilities()
    for mode in range(4):
        left = probs.sum(axis=tuple(m for m in range(8) if m != mode))
        right = probs.sum(axis=tuple(m for m in range(8) if m != mode + 4))
        assert np.max(np.abs(left - right)) < 1e-9
    assert summary["best_energy"] <= 2.5e-3
