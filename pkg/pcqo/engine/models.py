"""Configuration and result models of the variational engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field


class OptimizerMethod(str, Enum):
    ADAM = "adam"
    DERIVATIVE_FREE = "derivative-free"


class DerivativeFreeMethod(str, Enum):
    COBYLA = "COBYLA"
    NELDER_MEAD = "Nelder-Mead"


class RestartStatus(str, Enum):
    OK = "ok"
    DIVERGED = "diverged"
    FAILED = "failed"


class OptimizerConfig(BaseModel):
    """Hyperparameters shared by every restart of a run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    method: OptimizerMethod = Field(OptimizerMethod.ADAM, description="Optimization loop to use.")
    learning_rate: float = Field(0.05, gt=0, description="Adam step size.")
    beta1: float = Field(0.9, gt=0, lt=1, description="Adam first-moment decay.")
    beta2: float = Field(0.999, gt=0, lt=1, description="Adam second-moment decay.")
    eps: float = Field(1e-8, gt=0, description="Adam denominator regularizer.")
    fd_step: float = Field(1e-3, gt=0, description="Central-difference step.")
    max_iterations: int = Field(200, ge=0, description="Iterations (Adam) or energy evaluations (derivative-free).")
    init_scale: float = Field(0.1, ge=0, description="Half-width of the uniform parameter initialization.")
    seed: int = Field(0, ge=0, lt=2**64, description="Seed of restart 0; restart r uses seed + r.")
    restarts: int = Field(5, ge=1, description="Number of independent restarts.")
    derivative_free_method: DerivativeFreeMethod = Field(
        DerivativeFreeMethod.COBYLA,
        description="scipy method used by the derivative-free optimizer.",
    )
    rhobeg: float = Field(0.5, gt=0, description="Initial trust-region radius for COBYLA.")
    tolerance: float = Field(1e-10, gt=0, description="Termination tolerance of the derivative-free optimizer.")
    divergence_factor: float = Field(10.0, gt=1, description="Abort when energy exceeds this multiple of max(|E0|, 1).")
    divergence_patience: int = Field(50, ge=1, description="Consecutive iterations above the divergence limit.")

    def restart_seed(self, restart: int) -> int:
        return (self.seed + restart) % 2**64


@dataclass
class RestartResult:
    """Outcome of one seeded optimization."""

    restart: int
    seed: int
    method: str
    trace: np.ndarray
    initial_energy: float
    best_energy: float
    best_params: np.ndarray
    initial_params: np.ndarray
    final_params: np.ndarray
    evaluations: int
    status: RestartStatus = RestartStatus.OK
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status is RestartStatus.OK

    def to_dict(self) -> dict[str, Any]:
        return {
            "restart": self.restart,
            "seed": self.seed,
            "method": self.method,
            "status": self.status.value,
            "message": self.message,
            "initial_energy": self.initial_energy,
            "best_energy": self.best_energy,
            "final_energy": float(self.trace[-1]) if len(self.trace) else self.initial_energy,
            "iterations": int(len(self.trace)),
            "evaluations": self.evaluations,
            "best_params": self.best_params.tolist(),
        }


@dataclass
class FinalDiagnostics:
    """Readout of the best final state."""

    readout: str
    energy: float
    means: List[float]
    readout_values: List[float]
    rounded: Optional[List[int]]
    distribution: Dict[Tuple[int, ...], float]
    edge_population: float
    truncation_safe: bool
    pair_averaged: Optional[List[float]] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "readout": self.readout,
            "energy": self.energy,
            "means": self.means,
            "readout_values": self.readout_values,
            "rounded_means": self.rounded,
            "edge_population": self.edge_population,
            "truncation_safe": self.truncation_safe,
            "pair_averaged": self.pair_averaged,
            "distribution": [
                {"pattern": list(pattern), "probability": prob} for pattern, prob in self.distribution.items()
            ],
        }


@dataclass
class RunRecord:
    """All restarts of one scenario plus their aggregate."""

    scenario: str
    restarts: List[RestartResult]
    aggregate: pd.DataFrame
    best_restart: Optional[int]
    diagnostics: Optional[FinalDiagnostics] = None
    first_hit: Optional[int] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> List[int]:
        return [r.restart for r in self.restarts if not r.ok]

    @property
    def best(self) -> Optional[RestartResult]:
        if self.best_restart is None:
            return None
        return self.restarts[self.best_restart]

    @property
    def best_energy(self) -> float:
        best = self.best
        return best.best_energy if best is not None else float("nan")

    @property
    def truncation_unsafe(self) -> bool:
        return self.diagnostics is not None and not self.diagnostics.truncation_safe

    def trace_frame(self) -> pd.DataFrame:
        from pcqo.engine.analytics import traces_frame

        return traces_frame(self.restarts)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "best_restart": self.best_restart,
            "best_energy": self.best_energy,
            "first_hit_iteration": self.first_hit,
            "failed_restarts": self.failed,
            "truncation_unsafe": self.truncation_unsafe,
            "restarts": [r.to_dict() for r in self.restarts],
            "diagnostics": self.diagnostics.to_dict() if self.diagnostics else None,
            **self.extras,
        }


__all__ = [
    "OptimizerMethod",
    "DerivativeFreeMethod",
    "RestartStatus",
    "OptimizerConfig",
    "RestartResult",
    "FinalDiagnostics",
    "RunRecord",
]
