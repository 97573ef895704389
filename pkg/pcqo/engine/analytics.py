"""Trace aggregation and Fock-distribution tables for run reports."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
import pandas as pd

from pcqo.core.fock import ModeState, fock_probabilities
from pcqo.engine.models import RestartResult
from pcqo.exceptions import ContractViolationError

TRACE_COLUMNS = ["restart", "iteration", "energy"]
AGGREGATE_COLUMNS = ["mean", "sem", "min", "max", "best"]
FIRST_HIT_TOL = 1e-2


def traces_frame(restarts: Sequence[RestartResult]) -> pd.DataFrame:
    """Long-format ``restart, iteration, energy`` rows in restart order."""
    frames = [
        pd.DataFrame(
            {
                "restart": result.restart,
                "iteration": np.arange(len(result.trace), dtype=int),
                "energy": result.trace,
            }
        )
        for result in restarts
        if len(result.trace)
    ]
    if not frames:
        return pd.DataFrame(
            {
                "restart": pd.Series(dtype=int),
                "iteration": pd.Series(dtype=int),
                "energy": pd.Series(dtype=float),
            }
        )
    return pd.concat(frames, ignore_index=True)[TRACE_COLUMNS]


def _padded(restarts: Sequence[RestartResult]) -> pd.DataFrame:
    length = max(len(r.trace) for r in restarts)
    padded = []
    for result in restarts:
        trace = np.asarray(result.trace, dtype=float)
        tail = np.full(length - trace.size, trace[-1])
        energy = np.concatenate([trace, tail])
        padded.append(pd.DataFrame({"restart": result.restart, "iteration": np.arange(length), "energy": energy}))
    return pd.concat(padded, ignore_index=True)


def aggregate_traces(restarts: Sequence[RestartResult]) -> pd.DataFrame:
    """Per-iteration mean, standard error, min, max and the trace of the best restart.

    Shorter traces are padded with their final energy. The standard error is
    ``std(ddof=1) / sqrt(restarts)`` and is zero for a single restart.
    """
    usable = [r for r in restarts if len(r.trace)]
    if not usable:
        return pd.DataFrame(columns=AGGREGATE_COLUMNS, index=pd.Index([], name="iteration"), dtype=float)
    frame = _padded(usable)
    stats = frame.groupby("iteration")["energy"].agg(["mean", "sem", "min", "max"])
    stats["sem"] = stats["sem"].fillna(0.0)
    best = min(usable, key=lambda r: (r.best_energy, r.restart))
    stats["best"] = frame.loc[frame["restart"] == best.restart].set_index("iteration")["energy"]
    return stats[AGGREGATE_COLUMNS]


def first_hit_iteration(trace: Sequence[float], target: float, tol: float = FIRST_HIT_TOL) -> Optional[int]:
    """First iteration whose energy is within ``tol`` above ``target``."""
    hits = np.flatnonzero(np.asarray(trace, dtype=float) <= target + tol)
    return int(hits[0]) if hits.size else None


def distribution_frame(state: ModeState, threshold: float = 1e-3) -> pd.DataFrame:
    """Fock patterns above ``threshold``, most probable first."""
    distribution = fock_probabilities(state, threshold)
    return pd.DataFrame({"pattern": list(distribution), "probability": list(distribution.values())})


def solution_mode_scan(state: ModeState, optimum: Sequence[float], top: int = 20) -> pd.DataFrame:
    """Patterns along the solution-carrying mode plus the global ``top`` patterns.

    The solution-carrying mode is the one with the largest optimal occupation; the
    scan varies it from 0 to D-1 with every other mode held at its optimal value.
    """
    probs = state.probabilities()
    fixed = [int(round(v)) for v in optimum]
    if len(fixed) > state.modes:
        raise ContractViolationError(f"Optimum has {len(fixed)} entries for a {state.modes}-mode state")
    fixed += [0] * (state.modes - len(fixed))
    carrier = int(np.argmax(fixed[: len(optimum)]))
    rows = []
    for n in range(state.cutoff):
        pattern = list(fixed)
        pattern[carrier] = n
        if any(v >= state.cutoff for v in pattern):
            continue
        rows.append({"group": "scan", "pattern": tuple(pattern), "probability": float(probs[tuple(pattern)])})
    for pattern, prob in distribution_frame(state, 0.0).head(top).itertuples(index=False):
        rows.append({"group": "top", "pattern": pattern, "probability": float(prob)})
    return pd.DataFrame(rows, columns=["group", "pattern", "probability"])


def pattern_mass(state: ModeState, patterns: Sequence[Sequence[int]]) -> float:
    probs = state.probabilities()
    return float(sum(probs[tuple(p)] for p in patterns))


__all__ = [
    "traces_frame",
    "aggregate_traces",
    "first_hit_iteration",
    "distribution_frame",
    "solution_mode_scan",
    "pattern_mass",
]
