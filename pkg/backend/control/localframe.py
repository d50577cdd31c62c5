"""
Distributed evaluation in each agent's own base frame.

Agent i measures z_ij^i = R_i^T (x_i - x_j) for its neighbours j. Edge
errors built from these are rotation invariant for distances, so the local
gradient is e_hat_i^i = R_i^T e_hat_i and the torque equals the global one.
"""

from typing import Sequence

import numpy as np

from backend.formation.graph import Flavor, FormationGraph
from backend.models.manipulator import Frame, ManipulatorModel
from utils.error import FrameMismatchError

from .config import ControllerState
from .controller import Controller


def local_measurements(
    graph: FormationGraph, models: Sequence[ManipulatorModel], x: np.ndarray, i: int
) -> dict[int, np.ndarray]:
    "{j: z_ij^i} for the neighbours of agent i; x is (N, m) in the global frame."
    return {j: models[i].to_local_frame(x[i] - x[j]) for _, j, _ in graph.neighbors(i)}


def local_gradient(graph: FormationGraph, i: int, measurements: dict[int, np.ndarray]) -> np.ndarray:
    "e_hat_i from relative measurements only, in the frame they are given in."
    e_hat = np.zeros(graph.dimension)
    for k, j, b in graph.neighbors(i):
        z_ij = measurements[j]
        if graph.flavor == Flavor.DISTANCE:
            e_k = z_ij @ z_ij - graph.desired_sq[k]
            e_hat += 2.0 * e_k * z_ij
        else:
            e_hat += b * (b * z_ij - graph.desired_vec[k])
    return e_hat


def check_common_orientation(graph: FormationGraph, models: Sequence[ManipulatorModel]) -> None:
    if graph.flavor != Flavor.DISPLACEMENT:
        return
    for i, model in enumerate(models):
        if np.max(np.abs(model.base_rotation - np.eye(graph.dimension))) > 1e-12:
            raise FrameMismatchError(i + 1)


def local_frame_control(
    controller: Controller,
    graph: FormationGraph,
    i: int,
    measurements: dict[int, np.ndarray],
    q,
    xi,
    state: ControllerState,
):
    "The controller's command for agent i computed from base-frame measurements."
    check_common_orientation(graph, controller.models)
    e_hat = local_gradient(graph, i, measurements)
    if controller.frame == Frame.GLOBAL:
        e_hat = controller.models[i].from_local_frame(e_hat)
    return controller.command(i, q, xi, e_hat, state)
