"""Exhaustive integer minimization for Fock-space problems."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, List, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from pcqo.exceptions import ContractViolationError, SearchSpaceTooLargeError

if TYPE_CHECKING:
    from pcqo.problems.encodings import ProblemSpec

LOGGER = logging.getLogger("pcqo.oracle")

MAX_POINTS = 10**7
CHUNK_SIZE = 1 << 18
TIE_TOL = 1e-9


def brute_force_integer_min(
    problem: "ProblemSpec",
    bound: Union[int, Sequence[int]],
    max_points: int = MAX_POINTS,
) -> Tuple[float, List[Tuple[int, ...]]]:
    """Minimum of ``problem`` over ``{0..bound}^N`` and every point attaining it."""
    from pcqo.problems.encodings import Encoding

    if problem.encoding is not Encoding.FOCK_SPACE:
        raise ContractViolationError(f"{problem.name} is not an integer (Fock-space) problem")
    bounds = [int(bound)] * problem.n_vars if np.isscalar(bound) else [int(b) for b in bound]
    if len(bounds) != problem.n_vars or any(b < 0 for b in bounds):
        raise ContractViolationError(f"Invalid per-variable bounds {bounds} for {problem.n_vars} variables")
    shape = tuple(b + 1 for b in bounds)
    size = int(np.prod(shape, dtype=object))
    if size > max_points:
        raise SearchSpaceTooLargeError(size, max_points)

    best = np.inf
    minimizers: List[np.ndarray] = []
    for start in range(0, size, CHUNK_SIZE):
        flat = np.arange(start, min(start + CHUNK_SIZE, size))
        points = np.stack(np.unravel_index(flat, shape), axis=1)
        values = problem.evaluate_many(points)
        chunk_min = float(values.min())
        if chunk_min < best - TIE_TOL:
            best = chunk_min
            minimizers = [points[values <= best + TIE_TOL]]
        elif chunk_min <= best + TIE_TOL:
            minimizers.append(points[values <= best + TIE_TOL])
    found = sorted(tuple(int(v) for v in row) for block in minimizers for row in block)
    LOGGER.debug("%s: searched %d points, F_min=%s at %s", problem.name, size, best, found)
    return best, found


def maximum_cliques(graph: nx.Graph) -> List[Tuple[int, ...]]:
    """Indicator vectors of every maximum clique, via networkx."""
    cliques = list(nx.find_cliques(graph))
    largest = max((len(c) for c in cliques), default=0)
    nodes = sorted(graph.nodes)
    vectors = [
        tuple(1 if node in clique else 0 for node in nodes) for clique in cliques if len(clique) == largest
    ]
    return sorted(vectors)


__all__ = ["MAX_POINTS", "brute_force_integer_min", "maximum_cliques"]
