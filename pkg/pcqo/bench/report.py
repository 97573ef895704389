"""Trace CSV, JSON summary, distribution table and text reports."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO, Union

import jinja2
import numpy as np
import pandas as pd

from pcqo import __version__
from pcqo.algebra.pool import PoolOperator, format_pool, pool_labels
from pcqo.core.gates import GateSpec
from pcqo.engine.analytics import TRACE_COLUMNS, distribution_frame, solution_mode_scan, traces_frame
from pcqo.engine.ansatz import DISTRIBUTION_THRESHOLD, Scenario
from pcqo.engine.models import RestartResult, RunRecord
from pcqo.exceptions import ContractViolationError

LOGGER = logging.getLogger("pcqo.bench")

ABORTED = "aborted"
COMPARISON_COLUMNS = ["algorithm"] + TRACE_COLUMNS

POOL_TEMPLATE = jinja2.Template(
    """\
Pool of order {{ order }} for {{ problem }}: {{ pool | length }} operators in {{ families | length }} families
Families: {{ families | join(", ") }}
{{ listing }}
{% if gates %}
Selected ansatz ({{ gates | length }} gates, Q={{ n_params }}):
{% for gate in gates %}  {{ gate.describe() }}
{% endfor %}{% endif %}""",
    keep_trailing_newline=True,
)

VERDICT_TEMPLATE = jinja2.Template(
    """\
{% for name, energy in finals %}{{ "%-14s" | format(name) }} best final {{ "%.6f" | format(energy) }}
{% endfor %}verdict: {{ verdict }}
""",
    keep_trailing_newline=True,
)


def version_stamp(label: str = "") -> str:
    return f"# pcqo {__version__}" + (f" {label}" if label else "")


class TraceWriter:
    """Append-only trace CSV; an aborted run ends with a sentinel row."""

    def __init__(self, path: Union[str, Path], columns: Sequence[str] = TRACE_COLUMNS, label: str = "") -> None:
        self.path = Path(path)
        self.columns = list(columns)
        self.label = label
        self.rows = 0
        self._handle: Optional[TextIO] = None

    def __enter__(self) -> "TraceWriter":
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = self.path.open("w", encoding="utf-8", newline="")
        self._handle.write(version_stamp(self.label) + "\n")
        self._handle.write(",".join(self.columns) + "\n")
        self._handle.flush()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        assert self._handle is not None
        if exc_type is not None:
            self._handle.write(",".join([ABORTED] + [""] * (len(self.columns) - 1)) + "\n")
            LOGGER.error("Trace %s aborted after %d rows", self.path, self.rows)
        self._handle.close()
        self._handle = None

    def write_restart(self, result: RestartResult, **prefix: Any) -> None:
        frame = traces_frame([result])
        for position, (name, value) in enumerate(prefix.items()):
            frame.insert(position, name, value)
        self.write_frame(frame)

    def write_frame(self, frame: pd.DataFrame) -> None:
        assert self._handle is not None, "TraceWriter used outside its context"
        if frame.empty:
            return
        frame[self.columns].to_csv(self._handle, header=False, index=False, lineterminator="\n")
        self._handle.flush()
        self.rows += len(frame)


def read_trace(path: Union[str, Path]) -> pd.DataFrame:
    """Trace rows without the version line; raises if the run was aborted."""
    frame = pd.read_csv(path, comment="#")
    first = frame.columns[0]
    if (frame[first].astype(str) == ABORTED).any():
        raise ContractViolationError(f"{path} ends with the aborted sentinel")
    return frame


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def summary_payload(record: RunRecord, scenario: Scenario, config_echo: Dict[str, Any]) -> Dict[str, Any]:
    problem = scenario.problem
    return {
        "version": __version__,
        "config": config_echo,
        "problem": problem.to_dict(),
        "circuit": {
            "modes": scenario.circuit.modes,
            "cutoff": scenario.circuit.cutoff,
            "n_params": scenario.n_params,
            "gates": scenario.circuit.describe(),
        },
        "seeds": [r.seed for r in record.restarts],
        **record.to_dict(),
    }


def write_json(path: Union[str, Path], payload: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, default=_json_default) + "\n", encoding="utf-8")
    return path


def distribution_table(scenario: Scenario, params: np.ndarray, threshold: float = DISTRIBUTION_THRESHOLD) -> pd.DataFrame:
    """Patterns above ``threshold`` plus, with a known optimum, the solution-mode scan and top patterns."""
    state = scenario.final_state(params)
    table = distribution_frame(state, threshold)
    table.insert(0, "group", "threshold")
    known = scenario.problem.known_optimum
    if known is not None and known.optimizers:
        table = pd.concat([table, solution_mode_scan(state, known.optimizers[0])], ignore_index=True)
    table["pattern"] = [" ".join(str(n) for n in pattern) for pattern in table["pattern"]]
    return table


def write_distribution(path: Union[str, Path], table: pd.DataFrame) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(version_stamp("distribution") + "\n")
        table.to_csv(handle, index=False, lineterminator="\n")
    return path


def render_pool(
    problem_name: str,
    order: int,
    pool: Sequence[PoolOperator],
    gates: Sequence[GateSpec] = (),
    n_params: int = 0,
) -> str:
    return POOL_TEMPLATE.render(
        problem=problem_name,
        order=order,
        pool=pool,
        families=pool_labels(pool),
        listing=format_pool(pool),
        gates=list(gates),
        n_params=n_params,
    )


def comparison_verdict(finals: Dict[str, float], reference: str = "pcqo") -> str:
    others = {name: energy for name, energy in finals.items() if name != reference}
    ref = finals.get(reference, float("nan"))
    if not np.isfinite(ref):
        verdict = f"{reference} produced no result"
    elif all(ref < energy for energy in others.values()):
        verdict = f"{reference} outperforms " + ", ".join(others)
    else:
        beaten_by = [name for name, energy in others.items() if energy <= ref]
        verdict = f"{reference} does not outperform " + ", ".join(beaten_by)
    return VERDICT_TEMPLATE.render(finals=list(finals.items()), verdict=verdict)


__all__ = [
    "ABORTED",
    "COMPARISON_COLUMNS",
    "version_stamp",
    "TraceWriter",
    "read_trace",
    "summary_payload",
    "write_json",
    "distribution_table",
    "write_distribution",
    "render_pool",
    "comparison_verdict",
]
