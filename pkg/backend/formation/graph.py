"""
Formation graph: topology, desired shape, edge errors and the stacked gradient.

Agents are 1-based in edge lists (as in scenario files) and 0-based everywhere
else. Stacked vectors are agent-major: x = [x_1; x_2; ...; x_N].

For the distance flavor the gradient is  c * Bbar * D(z) * e  with c = 2 and
D(z) = blockdiag(z_k); for the displacement flavor c = 1 and D(z) = I.
"""

from __future__ import annotations

from enum import Enum, unique
from typing import Optional, Sequence

import numpy as np
from scipy import linalg as la

from utils.error import ConfigurationError, ScenarioBadEdgeError


@unique
class Flavor(Enum):
    DISTANCE = "distance"
    DISPLACEMENT = "displacement"


class FormationGraph:
    def __init__(
        self,
        num_agents: int,
        edges: Sequence[Sequence[int]],
        dimension: int,
        flavor: Flavor,
        desired: Sequence,
        reference: Optional[np.ndarray] = None,
    ) -> None:
        if num_agents < 2:
            raise ConfigurationError("a formation needs at least 2 agents, got %d" % num_agents)
        if dimension not in (2, 3):
            raise ConfigurationError("dimension must be 2 or 3, got %d" % dimension)

        seen = set()
        for k, edge in enumerate(edges, start=1):
            tail, head = int(edge[0]), int(edge[1])
            for agent in (tail, head):
                if not 1 <= agent <= num_agents:
                    raise ScenarioBadEdgeError(
                        k, "references agent %d outside [1..%d]" % (agent, num_agents)
                    )
            if tail == head:
                raise ScenarioBadEdgeError(k, "is a self-loop")
            if frozenset((tail, head)) in seen:
                raise ScenarioBadEdgeError(k, "duplicates an earlier edge")
            seen.add(frozenset((tail, head)))
        if not edges:
            raise ConfigurationError("the formation graph has no edges")

        self.num_agents = num_agents
        self.edges = tuple((int(e[0]), int(e[1])) for e in edges)
        self.dimension = dimension
        self.flavor = flavor
        self.reference = None if reference is None else np.asarray(reference, dtype=float)

        desired = np.asarray(desired, dtype=float)
        if flavor == Flavor.DISTANCE:
            if desired.shape != (self.num_edges,):
                raise ConfigurationError(
                    "expected %d desired distances, got shape %s" % (self.num_edges, desired.shape)
                )
            if np.any(desired <= 0):
                raise ConfigurationError("desired distances must be positive")
            self.desired_sq = desired**2
        else:
            if desired.shape != (self.num_edges, dimension):
                raise ConfigurationError(
                    "expected %d desired displacements of dimension %d, got shape %s"
                    % (self.num_edges, dimension, desired.shape)
                )
            self.desired_vec = desired

        self.incidence = incidence_matrix(self)

    @classmethod
    def fromReference(
        cls,
        num_agents: int,
        edges: Sequence[Sequence[int]],
        dimension: int,
        flavor: Flavor,
        reference,
    ) -> FormationGraph:
        "Builds the desired geometry from reference positions x* (N x m)."
        reference = np.asarray(reference, dtype=float)
        if reference.shape != (num_agents, dimension):
            raise ConfigurationError(
                "reference must hold %d points of dimension %d" % (num_agents, dimension)
            )
        z = np.array([reference[t - 1] - reference[h - 1] for t, h in edges])
        desired = np.linalg.norm(z, axis=1) if flavor == Flavor.DISTANCE else z
        return cls(num_agents, edges, dimension, flavor, desired, reference)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def error_dim(self) -> int:
        "Size of one edge error: 1 (distance) or m (displacement)."
        return 1 if self.flavor == Flavor.DISTANCE else self.dimension

    @property
    def gradient_scale(self) -> float:
        return 2.0 if self.flavor == Flavor.DISTANCE else 1.0

    @property
    def desired_distances(self) -> np.ndarray:
        return np.sqrt(self.desired_sq)

    @property
    def incidence_bar(self) -> np.ndarray:
        "B kron I_m, of shape (mN, m|E|)."
        return np.kron(self.incidence, np.eye(self.dimension))

    # To list (edge index, neighbour, b_ik) for every edge touching agent i (0-based).
    def neighbors(self, i: int) -> list[tuple[int, int, int]]:
        result = []
        for k, (tail, head) in enumerate(self.edges):
            if tail - 1 == i:
                result.append((k, head - 1, 1))
            elif head - 1 == i:
                result.append((k, tail - 1, -1))
        return result

    def __str__(self) -> str:
        return "formation(%s, N=%d, m=%d, edges=%s)" % (
            self.flavor.value,
            self.num_agents,
            self.dimension,
            list(self.edges),
        )


def incidence_matrix(graph: FormationGraph) -> np.ndarray:
    B = np.zeros((graph.num_agents, graph.num_edges), dtype=int)
    for k, (tail, head) in enumerate(graph.edges):
        B[tail - 1, k] = 1
        B[head - 1, k] = -1
    return B


def as_positions(graph: FormationGraph, x) -> np.ndarray:
    "Accepts stacked (mN,) or per-agent (N, m) positions and returns (N, m)."
    x = np.asarray(x, dtype=float)
    shape = (graph.num_agents, graph.dimension)
    if x.shape == shape:
        return x
    if x.shape == (graph.num_agents * graph.dimension,):
        return x.reshape(shape)
    raise ConfigurationError(
        "positions of shape %s do not match N=%d, m=%d" % (x.shape, *shape)
    )


def relative_positions(graph: FormationGraph, x) -> np.ndarray:
    "z = Bbar^T x, one row z_k = x_tail - x_head per edge."
    return graph.incidence.T @ as_positions(graph, x)


def edge_errors(graph: FormationGraph, x) -> np.ndarray:
    """
    Distance flavor: shape (|E|,), e_k = |z_k|^2 - |z*_k|^2.
    Displacement flavor: shape (|E|, m), e_k = z_k - z*_k.
    """
    z = relative_positions(graph, x)
    if graph.flavor == Flavor.DISTANCE:
        return np.einsum("ij,ij->i", z, z) - graph.desired_sq
    return z - graph.desired_vec


def formation_potential(graph: FormationGraph, x) -> float:
    "V = 1/2 sum_k |e_k|^2."
    e = edge_errors(graph, x)
    return 0.5 * float(np.sum(e * e))


def _edge_weights(graph: FormationGraph, z: np.ndarray, e: np.ndarray) -> np.ndarray:
    if graph.flavor == Flavor.DISTANCE:
        return 2.0 * z * e[:, None]
    return e


def formation_gradient(graph: FormationGraph, x) -> np.ndarray:
    "Stacked e_hat in R^{mN}; equals the gradient of `formation_potential`."
    z = relative_positions(graph, x)
    e = edge_errors(graph, x)
    return (graph.incidence @ _edge_weights(graph, z, e)).ravel()


def gradient_blocks(graph: FormationGraph, x) -> np.ndarray:
    "Per-edge contributions b_ik R_k e_k, shape (|E|, N, m); summing over edges gives e_hat."
    z = relative_positions(graph, x)
    e = edge_errors(graph, x)
    weights = _edge_weights(graph, z, e)
    return graph.incidence.T[:, :, None] * weights[:, None, :]


def shape_matrix(graph: FormationGraph, z: np.ndarray) -> np.ndarray:
    "D(z): blockdiag(z_k) of shape (m|E|, |E|) for distances, I_{m|E|} for displacements."
    if graph.flavor == Flavor.DISTANCE:
        return la.block_diag(*[zk[:, None] for zk in np.asarray(z)])
    return np.eye(graph.num_edges * graph.dimension)


def gradient_map(graph: FormationGraph, x) -> np.ndarray:
    "M(x) with e_hat = M(x) e, e stacked edge-major."
    z = relative_positions(graph, x)
    return graph.gradient_scale * graph.incidence_bar @ shape_matrix(graph, z)
