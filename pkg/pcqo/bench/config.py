"""Scenario configuration files.

A scenario file holds one ``section.key = value`` assignment per line::

    # UKP, first tabulated instance
    problem.kind = ukp
    problem.instance = 1
    ansatz.kind = pcqo-fock
    simulation.cutoff = 10
    optimizer.max_iterations = 200

Blank lines and ``#`` comments are ignored. Lists are comma separated, graph edges
are written ``0-1, 1-3`` and booleans ``true``/``false``. Sections are ``problem``,
``ansatz``, ``simulation``, ``optimizer`` and ``output``.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from pcqo.algebra.pool import Connectivity
from pcqo.core.fock import DEFAULT_HBAR, vacuum
from pcqo.engine.ansatz import (
    EXPERIMENT_WHITELIST,
    FOCK_WHITELIST,
    PHASE_WHITELIST,
    Scenario,
    experiment_scenario,
    pcqo_scenario,
    pool_ansatz,
)
from pcqo.engine.models import OptimizerConfig
from pcqo.exceptions import ConfigError
from pcqo.problems.encodings import (
    Encoding,
    ProblemSpec,
    maxclique,
    number_offset,
    rosenbrock,
    toy_sixth,
    two_mode_toy,
    ukp,
)
from pcqo.problems.instances import (
    UKP_INSTANCES,
    adjacency_matrix,
    canonical_maxclique_graph,
    clique_graph,
    ukp_instance,
)
from pcqo.qaoa import QaoaMode, QaoaVariant, cvqaoa_scenario

LOGGER = logging.getLogger("pcqo.bench")

LINE_PATTERN = re.compile(r"^(?P<section>[A-Za-z_]+)\.(?P<key>[A-Za-z_][A-Za-z_0-9]*)\s*=\s*(?P<value>.*)$")
SECTIONS = ("problem", "ansatz", "simulation", "optimizer", "output")

ProblemKind = Literal["ukp", "maxclique", "rosenbrock", "toy-sixth", "two-mode-toy", "number-offset"]
AnsatzKind = Literal["pcqo-phase", "pcqo-fock", "pcqo-pool", "experiment", "cvqaoa"]

PHASE_SPACE_KINDS = {"rosenbrock", "toy-sixth"}


def _split(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ProblemBlock(_Block):
    kind: ProblemKind
    instance: Optional[int] = Field(None, ge=1, le=len(UKP_INSTANCES), description="Tabulated UKP row.")
    values: Optional[List[float]] = None
    weights: Optional[List[float]] = None
    capacity: Optional[float] = None
    penalty: float = Field(4.0, gt=0, description="UKP constraint penalty.")
    nodes: Optional[int] = Field(None, ge=1, description="Maxclique node count.")
    edges: Optional[List[Tuple[int, int]]] = None
    penalty_edge: float = Field(10.0, gt=0)
    penalty_degree: float = Field(1.0, gt=0)
    size: int = Field(4, ge=2, description="Rosenbrock dimension.")
    target: float = Field(1.0, description="Photon-number target of number-offset.")
    bound: Optional[int] = Field(None, ge=0, description="Per-variable bound of the oracle search.")
    known_min: Optional[float] = Field(None, description="Expected F_min checked by the oracle.")

    @field_validator("values", "weights", mode="before")
    @classmethod
    def _split_lists(cls, value):
        return _split(value)

    @field_validator("edges", mode="before")
    @classmethod
    def _parse_edges(cls, value):
        if not isinstance(value, str):
            return value
        edges = []
        for item in _split(value):
            left, sep, right = item.partition("-")
            if not sep:
                raise ValueError(f"edge {item!r} is not written as i-j")
            edges.append((int(left), int(right)))
        return edges

    @model_validator(mode="after")
    def _check_data(self) -> "ProblemBlock":
        if self.kind == "ukp" and self.instance is None:
            missing = [name for name in ("values", "weights", "capacity") if getattr(self, name) is None]
            if missing:
                raise ValueError(f"ukp needs problem.instance or problem.{', problem.'.join(missing)}")
        if self.kind == "maxclique" and self.edges is None and self.nodes not in (5, 6):
            raise ValueError("maxclique needs problem.edges or problem.nodes = 5 or 6")
        return self

    @property
    def encoding(self) -> Encoding:
        return Encoding.PHASE_SPACE if self.kind in PHASE_SPACE_KINDS else Encoding.FOCK_SPACE


class AnsatzBlock(_Block):
    kind: AnsatzKind
    layers: int = Field(1, ge=1)
    variant: QaoaMode = QaoaMode.SHARED_ANGLE
    squeeze_r: float = Field(1.0, ge=0)
    full_chip: bool = False
    whitelist: Optional[List[str]] = None
    connectivity: Connectivity = Connectivity.NEAREST_NEIGHBOR
    order: int = Field(2, ge=1, description="Nested-commutator expansion order.")
    single_mode_squeeze: bool = False
    mixer_x0: Optional[float] = None
    mixer_p0: Optional[float] = None

    @field_validator("whitelist", mode="before")
    @classmethod
    def _split_whitelist(cls, value):
        return _split(value)


class SimulationBlock(_Block):
    cutoff: int = Field(10, ge=3, description="Fock cutoff D per mode.")
    hbar: float = Field(DEFAULT_HBAR, gt=0)


class OutputBlock(_Block):
    trace: str = "trace.csv"
    summary: str = "summary.json"
    distribution: str = "distribution.csv"
    comparison: str = "comparison.csv"


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    problem: ProblemBlock
    ansatz: AnsatzBlock
    simulation: SimulationBlock = SimulationBlock()
    optimizer: OptimizerConfig = OptimizerConfig()
    output: OutputBlock = OutputBlock()

    @model_validator(mode="after")
    def _check_encoding(self) -> "ScenarioConfig":
        wanted = {
            "pcqo-phase": Encoding.PHASE_SPACE,
            "pcqo-fock": Encoding.FOCK_SPACE,
            "experiment": Encoding.FOCK_SPACE,
            "cvqaoa": Encoding.FOCK_SPACE,
        }.get(self.ansatz.kind)
        if wanted is not None and wanted is not self.problem.encoding:
            raise ValueError(
                f"ansatz {self.ansatz.kind} needs a {wanted.value} problem, "
                f"{self.problem.kind} is {self.problem.encoding.value}"
            )
        return self

    def with_overrides(self, seed: Optional[int] = None) -> "ScenarioConfig":
        if seed is None:
            return self
        optimizer = OptimizerConfig.model_validate({**self.optimizer.model_dump(), "seed": seed})
        return self.model_copy(update={"optimizer": optimizer})

    def echo(self) -> dict:
        """Every resolved setting, defaults included."""
        return self.model_dump(mode="json")


# ---- Loading ----


def scan_lines(text: str) -> Tuple[Dict[str, int], List[Tuple[Optional[int], str]]]:
    """Map each dotted key to its line number and collect malformed lines."""
    lines: Dict[str, int] = {}
    problems: List[Tuple[Optional[int], str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = LINE_PATTERN.match(stripped)
        if match is None:
            problems.append((number, f"expected 'section.key = value', got {stripped!r}"))
            continue
        section, key = match["section"], match["key"]
        dotted = f"{section}.{key}"
        if section not in SECTIONS:
            problems.append((number, f"unknown section {section!r}; expected one of {', '.join(SECTIONS)}"))
        elif dotted in lines:
            problems.append((number, f"{dotted} already set on line {lines[dotted]}"))
        else:
            lines[dotted] = number
    return lines, problems


def _nest(values: Dict[str, Optional[str]]) -> Dict[str, Dict[str, str]]:
    nested: Dict[str, Dict[str, str]] = {}
    for dotted, value in values.items():
        section, _, key = dotted.partition(".")
        nested.setdefault(section, {})[key] = "" if value is None else value
    return nested


def _validation_problems(exc: ValidationError, lines: Dict[str, int]) -> List[Tuple[Optional[int], str]]:
    problems = []
    for error in exc.errors():
        loc = [str(part) for part in error["loc"]]
        dotted = ".".join(loc[:2])
        label = ".".join(loc) if loc else "config"
        problems.append((lines.get(dotted), f"{label}: {error['msg']}"))
    return problems


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Parse and validate ``path``; every problem is reported in one ConfigError."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), [(None, f"cannot read file: {exc}")]) from exc
    lines, problems = scan_lines(text)
    if problems:
        raise ConfigError(str(path), problems)
    values = {key: value for key, value in dotenv_values(path).items() if key in lines}
    try:
        config = ScenarioConfig.model_validate(_nest(values))
    except ValidationError as exc:
        raise ConfigError(str(path), _validation_problems(exc, lines)) from exc
    LOGGER.debug("Loaded %s: problem=%s ansatz=%s", path, config.problem.kind, config.ansatz.kind)
    return config


# ---- Factories ----


def build_problem(config: ScenarioConfig) -> ProblemSpec:
    block, hbar = config.problem, config.simulation.hbar
    if block.kind == "ukp":
        if block.instance is not None:
            row = ukp_instance(block.instance)
            return ukp(row.values, row.weights, row.capacity, block.penalty, hbar)
        return ukp(block.values, block.weights, block.capacity, block.penalty, hbar)
    if block.kind == "maxclique":
        if block.edges is not None:
            graph = clique_graph(block.edges, block.nodes)
        else:
            graph = canonical_maxclique_graph(block.nodes)
        return maxclique(adjacency_matrix(graph), block.penalty_edge, block.penalty_degree, hbar)
    if block.kind == "rosenbrock":
        return rosenbrock(block.size, hbar)
    if block.kind == "toy-sixth":
        return toy_sixth(hbar)
    if block.kind == "two-mode-toy":
        return two_mode_toy(hbar)
    return number_offset(block.target, hbar)


def qaoa_variant(config: ScenarioConfig, mode: Optional[QaoaMode] = None) -> QaoaVariant:
    return QaoaVariant(mode or config.ansatz.variant, config.ansatz.layers, config.ansatz.squeeze_r)


def build_scenario(config: ScenarioConfig, problem: Optional[ProblemSpec] = None) -> Scenario:
    problem = problem if problem is not None else build_problem(config)
    ansatz, cutoff = config.ansatz, config.simulation.cutoff
    if ansatz.kind in ("pcqo-phase", "pcqo-fock"):
        return pcqo_scenario(problem, ansatz.layers, cutoff)
    if ansatz.kind == "pcqo-pool":
        circuit = pool_ansatz(
            problem,
            pool_whitelist(config, problem),
            ansatz.connectivity,
            ansatz.layers,
            cutoff,
            ansatz.order,
            ansatz.single_mode_squeeze,
            ansatz.mixer_x0,
            ansatz.mixer_p0,
        )
        return Scenario(f"pool/{problem.name}", circuit, vacuum(problem.n_vars, cutoff), problem)
    if ansatz.kind == "experiment":
        return experiment_scenario(problem, cutoff, ansatz.squeeze_r, ansatz.full_chip)
    return cvqaoa_scenario(problem, qaoa_variant(config), cutoff)


def pool_whitelist(config: ScenarioConfig, problem: ProblemSpec) -> List[str]:
    if config.ansatz.whitelist:
        return list(config.ansatz.whitelist)
    if config.ansatz.kind == "experiment":
        defaults = EXPERIMENT_WHITELIST
    elif problem.encoding is Encoding.PHASE_SPACE:
        defaults = PHASE_WHITELIST
    else:
        defaults = FOCK_WHITELIST
    return [kind.symbol for kind in defaults]


def comparison_scenarios(config: ScenarioConfig, problem: Optional[ProblemSpec] = None) -> Dict[str, Scenario]:
    """PCQO and both CV-QAOA variants on the same problem and cutoff."""
    problem = problem if problem is not None else build_problem(config)
    cutoff = config.simulation.cutoff
    return {
        "pcqo": pcqo_scenario(problem, config.ansatz.layers, cutoff),
        "cvqaoa-shared": cvqaoa_scenario(problem, qaoa_variant(config, QaoaMode.SHARED_ANGLE), cutoff),
        "cvqaoa-multi": cvqaoa_scenario(problem, qaoa_variant(config, QaoaMode.MULTI_ANGLE), cutoff),
    }


__all__ = [
    "ProblemBlock",
    "AnsatzBlock",
    "SimulationBlock",
    "OutputBlock",
    "ScenarioConfig",
    "scan_lines",
    "load_config",
    "build_problem",
    "build_scenario",
    "pool_whitelist",
    "comparison_scenarios",
]
