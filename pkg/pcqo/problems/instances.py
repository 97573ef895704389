"""Canonical benchmark instances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import networkx as nx
import numpy as np


@dataclass(frozen=True)
class UkpInstance:
    values: Tuple[int, ...]
    weights: Tuple[int, ...]
    capacity: int
    penalty: float
    f_min: float
    optimum: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "values": list(self.values),
            "weights": list(self.weights),
            "capacity": self.capacity,
            "penalty": self.penalty,
            "f_min": self.f_min,
            "optimum": list(self.optimum),
        }


UKP_INSTANCES: Tuple[UkpInstance, ...] = (
    UkpInstance((3, 4, 1), (9, 5, 8), 10, 4.0, -8.0, (0, 2, 0)),
    UkpInstance((3, 4, 1, 3), (2, 7, 6, 6), 10, 4.0, -15.0, (5, 0, 0, 0)),
)

MAXCLIQUE_5_EDGES = ((0, 1), (1, 3), (0, 3), (0, 2), (2, 3), (1, 4), (2, 4))
# vertex 5 must not close a third triangle
MAXCLIQUE_6_EDGES = MAXCLIQUE_5_EDGES + ((3, 5), (4, 5))


def find_ukp_instance(
    values: Sequence[float],
    weights: Sequence[float],
    capacity: float,
    penalty: float,
) -> Optional[UkpInstance]:
    """The tabulated instance with these data, if its optimum holds at this penalty."""
    for instance in UKP_INSTANCES:
        if (
            tuple(values) == instance.values
            and tuple(weights) == instance.weights
            and capacity == instance.capacity
            and penalty >= instance.penalty
        ):
            return instance
    return None


def ukp_instance(index: int) -> UkpInstance:
    """Tabulated UKP instance, counted from 1."""
    return UKP_INSTANCES[index - 1]


def clique_graph(edges: Sequence[Tuple[int, int]], nodes: Optional[int] = None) -> nx.Graph:
    graph = nx.Graph()
    size = nodes if nodes is not None else 1 + max(max(edge) for edge in edges)
    graph.add_nodes_from(range(size))
    graph.add_edges_from(edges)
    return graph


def adjacency_matrix(graph: nx.Graph) -> np.ndarray:
    return nx.to_numpy_array(graph, nodelist=sorted(graph.nodes), dtype=int)


def canonical_maxclique_graph(nodes: int) -> nx.Graph:
    if nodes == 5:
        return clique_graph(MAXCLIQUE_5_EDGES, 5)
    if nodes == 6:
        return clique_graph(MAXCLIQUE_6_EDGES, 6)
    raise KeyError(f"No canonical Maxclique instance with {nodes} nodes")


__all__ = [
    "UkpInstance",
    "UKP_INSTANCES",
    "MAXCLIQUE_5_EDGES",
    "MAXCLIQUE_6_EDGES",
    "find_ukp_instance",
    "ukp_instance",
    "clique_graph",
    "adjacency_matrix",
    "canonical_maxclique_graph",
]
