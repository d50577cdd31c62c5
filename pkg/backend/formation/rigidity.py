import logging
from typing import Iterable, Optional

import numpy as np
from scipy.optimize import least_squares

from utils.error import ConfigurationError, UsageError

from .graph import (
    Flavor,
    FormationGraph,
    as_positions,
    relative_positions,
    shape_matrix,
)

logger = logging.getLogger(__name__)

THRESHOLD_SV = 1e-9


def required_rank(num_agents: int, dimension: int) -> int:
    "Rank of the rigidity matrix of an infinitesimally rigid framework (2N-3 in 2D, 3N-6 in 3D)."
    if num_agents <= dimension:
        return num_agents * (num_agents - 1) // 2
    return dimension * num_agents - dimension * (dimension + 1) // 2


def rigidity_matrix(graph: FormationGraph, x) -> np.ndarray:
    "D_z^T Bbar^T, shape (|E|, mN)."
    z = relative_positions(graph, x)
    return shape_matrix(graph, z).T @ graph.incidence_bar.T


def is_infinitesimally_rigid(graph: FormationGraph, x, tol: float = THRESHOLD_SV) -> bool:
    sv = np.linalg.svd(rigidity_matrix(graph, x), compute_uv=False)
    rank = int(np.sum(sv > tol))
    return rank == required_rank(graph.num_agents, graph.dimension)


def realize_shape(graph: FormationGraph, seed: int = 0, attempts: int = 8) -> np.ndarray:
    """
    Positions realizing the desired geometry, centred at the origin.
    Uses the reference when the graph has one, otherwise solves the distance
    equations by least squares from seeded random starts.
    """
    if graph.reference is not None:
        return graph.reference - graph.reference.mean(axis=0)

    N, m = graph.num_agents, graph.dimension
    if graph.flavor == Flavor.DISPLACEMENT:
        # spanning-tree walk along the displacements
        x = np.full((N, m), np.nan)
        x[0] = 0.0
        for _ in range(N):
            for k, (tail, head) in enumerate(graph.edges):
                t, h = tail - 1, head - 1
                if np.isnan(x[t, 0]) and not np.isnan(x[h, 0]):
                    x[t] = x[h] + graph.desired_vec[k]
                elif np.isnan(x[h, 0]) and not np.isnan(x[t, 0]):
                    x[h] = x[t] - graph.desired_vec[k]
        if np.isnan(x).any():
            raise ConfigurationError("the formation graph is not connected")
        return x - x.mean(axis=0)

    scale = float(np.max(np.sqrt(graph.desired_sq)))
    rng = np.random.default_rng(seed)

    def residual(flat):
        z = graph.incidence.T @ flat.reshape(N, m)
        return np.einsum("ij,ij->i", z, z) - graph.desired_sq

    best = None
    for _ in range(attempts):
        start = rng.uniform(-scale, scale, size=N * m)
        result = least_squares(residual, start, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if best is None or result.cost < best.cost:
            best = result
        if result.cost < 1e-20:
            break
    if best.cost > 1e-16:
        raise ConfigurationError(
            "the desired distances cannot be realized (residual %.3g)" % np.sqrt(2 * best.cost)
        )
    x = best.x.reshape(N, m)
    return x - x.mean(axis=0)


def check_rigidity(graph: FormationGraph, x: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Edge-count check and rank check of the rigidity matrix at the desired shape.
    Returns the realization the rank was evaluated at.
    """
    if x is None:
        x = realize_shape(graph)
    if graph.flavor == Flavor.DISPLACEMENT:
        return x

    needed = required_rank(graph.num_agents, graph.dimension)
    if graph.num_edges < needed:
        raise ConfigurationError(
            "a distance formation of %d agents in %dD needs at least %d edges, got %d"
            % (graph.num_agents, graph.dimension, needed, graph.num_edges)
        )
    if not is_infinitesimally_rigid(graph, x):
        raise ConfigurationError("the formation is not infinitesimally rigid at the desired shape")
    if graph.num_edges == needed:
        logger.debug("formation graph is minimally rigid (%d edges)", needed)
    return x


class RigiditySpectra:
    """
    Extremal eigenvalues of the shape Gramian Q = D^T Bbar^T Bbar D over samples.
    lambda1 carries the gradient scale: lambda_max{c^2 Q}.
    """

    def __init__(self, lambda1: float, lambda_min: float, lambda3: float, count: int) -> None:
        self.lambda1 = lambda1
        self.lambda_min = lambda_min
        self.lambda3 = lambda3
        self.count = count

    def __str__(self) -> str:
        return "lambda1=%.6g lambda_min=%.6g lambda3=%.6g (%d samples)" % (
            self.lambda1,
            self.lambda_min,
            self.lambda3,
            self.count,
        )


def shape_gramian(graph: FormationGraph, x) -> np.ndarray:
    z = relative_positions(graph, x)
    BD = graph.incidence_bar @ shape_matrix(graph, z)
    return BD.T @ BD


def rigidity_spectra(graph: FormationGraph, x_samples: Iterable) -> RigiditySpectra:
    lambda1, lambda_min, lambda3 = 0.0, np.inf, 0.0
    count = 0
    c2 = graph.gradient_scale**2
    for x in x_samples:
        eig = np.linalg.eigvalsh(shape_gramian(graph, as_positions(graph, x)))
        lambda1 = max(lambda1, c2 * eig[-1])
        lambda3 = max(lambda3, eig[-1])
        lambda_min = min(lambda_min, eig[0])
        count += 1
    if count == 0:
        raise UsageError("rigidity spectra need at least one sample configuration")
    return RigiditySpectra(lambda1, max(lambda_min, 0.0), lambda3, count)
