"""Multi-restart runner for one scenario."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import numpy as np
from tqdm import tqdm

from pcqo.engine.analytics import aggregate_traces, first_hit_iteration
from pcqo.engine.ansatz import EDGE_THRESHOLD, Scenario
from pcqo.engine.models import OptimizerConfig, RestartResult, RestartStatus, RunRecord
from pcqo.engine.optimizers import optimize
from pcqo.exceptions import ContractViolationError, PcqoError

LOGGER = logging.getLogger("pcqo.engine")

RestartCallback = Callable[[RestartResult], None]


class RestartRunner:
    """Runs the seeded restarts of a scenario and reduces them to a RunRecord."""

    def __init__(
        self,
        scenario: Scenario,
        config: OptimizerConfig,
        threads: int = 1,
        progress: bool = False,
        edge_threshold: float = EDGE_THRESHOLD,
    ) -> None:
        if threads < 1:
            raise ContractViolationError(f"threads must be >= 1, got {threads}")
        self.scenario = scenario
        self.config = config
        self.threads = threads
        self.progress = progress
        self.edge_threshold = edge_threshold

    # ------------------------------------------------------------------
    # Single restart
    # ------------------------------------------------------------------
    def run_restart(self, restart: int) -> RestartResult:
        """Optimize from the seed of ``restart``; failures become a FAILED record."""

        seed = self.config.restart_seed(restart)
        LOGGER.info("Restart %d of %s started with seed %d", restart, self.scenario.name, seed)
        try:
            result = optimize(self.scenario, self.config, self.scenario.n_params, seed, restart)
        except (PcqoError, ArithmeticError, ValueError) as exc:
            LOGGER.error("Restart %d of %s failed: %s", restart, self.scenario.name, exc)
            empty = np.zeros(self.scenario.n_params)
            return RestartResult(
                restart=restart,
                seed=seed,
                method=self.config.method.value,
                trace=np.zeros(0),
                initial_energy=float("nan"),
                best_energy=float("nan"),
                best_params=empty,
                initial_params=empty,
                final_params=empty,
                evaluations=0,
                status=RestartStatus.FAILED,
                message=str(exc),
            )
        LOGGER.info(
            "Restart %d of %s finished: best energy %.6g after %d iterations",
            restart,
            self.scenario.name,
            result.best_energy,
            len(result.trace),
        )
        return result

    # ------------------------------------------------------------------
    # All restarts
    # ------------------------------------------------------------------
    def run(self, on_restart: Optional[RestartCallback] = None) -> RunRecord:
        """Run every restart; callbacks fire in restart order whatever the completion order."""

        indices = range(self.config.restarts)
        results: List[RestartResult] = []
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            futures = [executor.submit(self.run_restart, r) for r in indices]
            bar = tqdm(futures, desc=self.scenario.name, unit="restart", disable=not self.progress)
            for future in bar:
                result = future.result()
                results.append(result)
                if on_restart is not None:
                    on_restart(result)
        return self.reduce(results)

    def reduce(self, results: List[RestartResult]) -> RunRecord:
        """Aggregate successful restarts and diagnose the best one."""

        usable = [r for r in results if r.ok]
        for result in results:
            if not result.ok:
                LOGGER.warning(
                    "Restart %d excluded from aggregates (%s): %s",
                    result.restart,
                    result.status.value,
                    result.message,
                )
        record = RunRecord(
            scenario=self.scenario.name,
            restarts=results,
            aggregate=aggregate_traces(usable),
            best_restart=None,
        )
        if not usable:
            LOGGER.error("No restart of %s completed", self.scenario.name)
            return record

        best = min(usable, key=lambda r: (r.best_energy, r.restart))
        record.best_restart = results.index(best)
        record.diagnostics = self.scenario.diagnose(best.best_params, edge_threshold=self.edge_threshold)
        if not record.diagnostics.truncation_safe:
            LOGGER.warning(
                "%s is truncation-unsafe: edge population %.3g >= %g",
                self.scenario.name,
                record.diagnostics.edge_population,
                self.edge_threshold,
            )
        known = self.scenario.problem.known_optimum
        if known is not None:
            record.first_hit = first_hit_iteration(best.trace, known.value)
        return record


def multi_start(
    scenario: Scenario,
    config: OptimizerConfig,
    threads: int = 1,
    progress: bool = False,
    edge_threshold: float = EDGE_THRESHOLD,
    on_restart: Optional[RestartCallback] = None,
) -> RunRecord:
    """Run ``config.restarts`` seeded restarts (seeds ``seed + r``) and aggregate them."""
    runner = RestartRunner(scenario, config, threads, progress, edge_threshold)
    return runner.run(on_restart)


__all__ = ["RestartRunner", "multi_start"]
