"""``pcqo`` command line: run, pool, compare and oracle."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Union

from pcqo import __version__
from pcqo.algebra.pool import nested_pool, select_ansatz
from pcqo.core.gates import GATE_CACHE, Circuit
from pcqo.engine.ansatz import repeat_layers
from pcqo.engine.models import RunRecord
from pcqo.engine.service import multi_start
from pcqo.exceptions import ConfigError, OptimizationDivergedError, PcqoError
from pcqo.problems.encodings import Encoding
from pcqo.problems.oracle import brute_force_integer_min, maximum_cliques
from pcqo.bench.config import (
    build_problem,
    build_scenario,
    comparison_scenarios,
    load_config,
    pool_whitelist,
)
from pcqo.bench.report import (
    COMPARISON_COLUMNS,
    TraceWriter,
    comparison_verdict,
    distribution_table,
    render_pool,
    summary_payload,
    write_distribution,
    write_json,
)
from pcqo.bench.settings import PcqoSettings, configure_logging

LOGGER = logging.getLogger("pcqo.bench")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TRUNCATION_UNSAFE = 2
EXIT_ORACLE_MISMATCH = 3

ORACLE_TOL = 1e-9

PathLike = Union[str, Path]


def _settings(settings: Optional[PcqoSettings]) -> PcqoSettings:
    return settings if settings is not None else PcqoSettings()


def _require_best(record: RunRecord) -> None:
    if record.best is None:
        raise OptimizationDivergedError(f"Every restart of {record.scenario} failed: {record.failed}")


def cmd_run(
    config_path: PathLike,
    settings: Optional[PcqoSettings] = None,
    seed: Optional[int] = None,
    stream: Optional[TextIO] = None,
) -> int:
    """Optimize one scenario and write its trace, summary and distribution."""
    stream = stream if stream is not None else sys.stdout
    settings = _settings(settings)
    config = load_config(config_path).with_overrides(seed)
    problem = build_problem(config)
    scenario = build_scenario(config, problem)
    out = settings.output_path

    with TraceWriter(out / config.output.trace, label=scenario.name) as writer:
        record = multi_start(
            scenario,
            config.optimizer,
            settings.threads,
            settings.progress,
            settings.edge_threshold,
            on_restart=writer.write_restart,
        )
    _require_best(record)

    write_json(out / config.output.summary, summary_payload(record, scenario, config.echo()))
    if problem.encoding is Encoding.FOCK_SPACE:
        table = distribution_table(scenario, record.best.best_params)
        write_distribution(out / config.output.distribution, table)

    diagnostics = record.diagnostics
    stream.write(
        f"{scenario.name}: best energy {record.best_energy:.6f} (restart {record.best_restart}, "
        f"Q={scenario.n_params}, edge population {diagnostics.edge_population:.3g})\n"
    )
    if diagnostics.rounded is not None:
        stream.write(f"rounded <n>: {tuple(diagnostics.rounded)}\n")
    if record.truncation_unsafe:
        stream.write("truncation-unsafe: increase simulation.cutoff\n")
        return EXIT_TRUNCATION_UNSAFE
    return EXIT_OK


def cmd_pool(
    config_path: PathLike,
    settings: Optional[PcqoSettings] = None,
    seed: Optional[int] = None,
    stream: Optional[TextIO] = None,
) -> int:
    """Print the counterdiabatic pool and the ansatz selected from it."""
    stream = stream if stream is not None else sys.stdout
    config = load_config(config_path)
    problem = build_problem(config)
    ansatz = config.ansatz
    pool = nested_pool(problem.mixer(ansatz.mixer_x0, ansatz.mixer_p0), problem.hamiltonian, ansatz.order)
    templates = select_ansatz(
        pool,
        pool_whitelist(config, problem),
        ansatz.connectivity,
        problem.n_vars,
        ansatz.single_mode_squeeze,
    )
    gates = repeat_layers(templates, ansatz.layers)
    circuit = Circuit.build(problem.n_vars, config.simulation.cutoff, gates, problem.hbar)
    stream.write(render_pool(problem.name, ansatz.order, pool, circuit.gates, circuit.n_params))
    return EXIT_OK


def cmd_compare(
    config_path: PathLike,
    settings: Optional[PcqoSettings] = None,
    seed: Optional[int] = None,
    stream: Optional[TextIO] = None,
) -> int:
    """PCQO against both CV-QAOA variants under the same budget."""
    stream = stream if stream is not None else sys.stdout
    settings = _settings(settings)
    config = load_config(config_path).with_overrides(seed)
    problem = build_problem(config)
    scenarios = comparison_scenarios(config, problem)
    out = settings.output_path

    records: Dict[str, RunRecord] = {}
    with TraceWriter(out / config.output.comparison, COMPARISON_COLUMNS, label="compare") as writer:
        for name, scenario in scenarios.items():
            LOGGER.info("Comparison: %s with Q=%d", name, scenario.n_params)
            records[name] = multi_start(
                scenario,
                config.optimizer,
                settings.threads,
                settings.progress,
                settings.edge_threshold,
                on_restart=lambda result, name=name: writer.write_restart(result, algorithm=name),
            )

    finals = {name: record.best_energy for name, record in records.items()}
    verdict = comparison_verdict(finals)
    payload = {
        "version": __version__,
        "config": config.echo(),
        "problem": problem.to_dict(),
        "algorithms": {
            name: {"n_params": scenarios[name].n_params, **record.to_dict()} for name, record in records.items()
        },
        "verdict": verdict.strip().splitlines()[-1],
    }
    write_json(out / config.output.summary, payload)
    stream.write(verdict)
    if any(record.truncation_unsafe for record in records.values()):
        return EXIT_TRUNCATION_UNSAFE
    return EXIT_OK


def cmd_oracle(
    config_path: PathLike,
    settings: Optional[PcqoSettings] = None,
    seed: Optional[int] = None,
    stream: Optional[TextIO] = None,
) -> int:
    """Exhaustive integer minimum; exit 3 when it disagrees with the expected optimum."""
    stream = stream if stream is not None else sys.stdout
    config = load_config(config_path)
    bound = config.problem.bound
    if bound is None:
        raise ConfigError(str(config_path), [(None, "problem.bound: required by the oracle")])
    problem = build_problem(config)
    f_min, minimizers = brute_force_integer_min(problem, bound)
    stream.write(f"{problem.name}: F_min = {f_min:g} over {{0..{bound}}}^{problem.n_vars}\n")
    for point in minimizers:
        stream.write(f"  {point}\n")

    expected = config.problem.known_min
    known = problem.known_optimum
    if expected is None and known is not None and all(max(o) <= bound for o in known.optimizers):
        expected = known.value
    mismatches: List[str] = []
    if expected is not None and abs(f_min - expected) > ORACLE_TOL:
        mismatches.append(f"F_min {f_min:g} differs from the expected {expected:g}")
    if problem.graph is not None and bound >= 1:
        cliques = maximum_cliques(problem.graph)
        if cliques != minimizers:
            mismatches.append(f"minimizers {minimizers} differ from the maximum cliques {cliques}")
    for mismatch in mismatches:
        LOGGER.error("Oracle mismatch for %s: %s", problem.name, mismatch)
        stream.write(f"mismatch: {mismatch}\n")
    return EXIT_ORACLE_MISMATCH if mismatches else EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "pool": cmd_pool,
    "compare": cmd_compare,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcqo", description="Photonic counterdiabatic optimization bench")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, handler in COMMANDS.items():
        sub = subparsers.add_parser(name, help=handler.__doc__)
        sub.add_argument("--config", required=True, type=Path, help="Scenario file")
        sub.add_argument("--seed", type=int, default=None, help="Override optimizer.seed")
        sub.add_argument("--threads", type=int, default=None, help="Concurrent restarts")
        sub.add_argument("--out", type=str, default=None, help="Output directory")
        sub.add_argument("--log-level", type=str, default=None, help="Logging level")
        sub.add_argument("--progress", action="store_true", default=None, help="Show a progress bar")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "threads": args.threads,
        "out_dir": args.out,
        "log_level": args.log_level,
        "progress": args.progress,
    }
    try:
        settings = PcqoSettings(**{key: value for key, value in overrides.items() if value is not None})
    except ValueError as exc:
        sys.stderr.write(f"Error: invalid settings\n{exc}\n")
        return EXIT_ERROR
    configure_logging(settings)
    GATE_CACHE.resize(settings.gate_cache_size)

    try:
        return COMMANDS[args.command](args.config, settings, args.seed)
    except PcqoError as exc:
        LOGGER.debug("%s failed", args.command, exc_info=True)
        sys.stderr.write(f"{exc}\n")
        return EXIT_ERROR


__all__ = [
    "EXIT_OK",
    "EXIT_ERROR",
    "EXIT_TRUNCATION_UNSAFE",
    "EXIT_ORACLE_MISMATCH",
    "cmd_run",
    "cmd_pool",
    "cmd_compare",
    "cmd_oracle",
    "build_parser",
    "main",
]
