"""
Lyapunov function values along a trajectory (diagnostic, uses the whole network).

    U1 = (K_P + alpha K_D) V(e) + 1/2 xi^T H xi + alpha e_hat^T J H xi
    V_eta = 1/2 eta~^T eta~ / K_I,   eta~ = eta - eta* - H xi,   eta* = G(q*) / K_I
    U2 = V_eta / epsilon + U1
    U3 = 1/2 K_P |a_hat - a|^2 + U2

V(e) = 1/2 |e|^2 is the formation potential, whose gradient is e_hat; with
this weight the K_P and K_D cross terms cancel in dU1/dt. J, H and G are
evaluated at the true parameters.
"""

from typing import Optional, Sequence

import numpy as np
from scipy import linalg as la

from backend.control.config import ControllerConfig
from backend.formation.graph import FormationGraph, formation_gradient, formation_potential
from backend.models.manipulator import ManipulatorModel
from backend.sim.trace import SimulationTrace


def stacked_jacobian(models: Sequence[ManipulatorModel], q, a_hat=None) -> np.ndarray:
    return la.block_diag(
        *[model.jacobian(q[i], None if a_hat is None else a_hat[i]) for i, model in enumerate(models)]
    )


def stacked_inertia(models: Sequence[ManipulatorModel], q) -> np.ndarray:
    return la.block_diag(*[model.inertia(q[i]) for i, model in enumerate(models)])


def lyapunov_values(
    graph: FormationGraph,
    models: Sequence[ManipulatorModel],
    controller: ControllerConfig,
    q,
    xi,
    eta: Optional[np.ndarray] = None,
    a_hat: Optional[np.ndarray] = None,
    q_star: Optional[np.ndarray] = None,
    epsilon: float = 1.0,
) -> tuple[float, float, float, float]:
    "(U1, U2, U3, V_eta) at one network state; q, xi are (N, n)."
    gains = controller.gains
    q = np.asarray(q, dtype=float)
    xi = np.asarray(xi, dtype=float)
    x = np.array([model.forward_kinematics(q[i]) for i, model in enumerate(models)])

    H = stacked_inertia(models, q)
    J = stacked_jacobian(models, q)
    xi_flat = xi.ravel()
    e_hat = formation_gradient(graph, x)
    U1 = (
        (gains.K_P + gains.alpha * gains.K_D) * formation_potential(graph, x)
        + 0.5 * xi_flat @ H @ xi_flat
        + gains.alpha * e_hat @ J @ H @ xi_flat
    )

    V_eta = 0.0
    if eta is not None and gains.K_I > 0:
        q_ref = q if q_star is None else np.asarray(q_star, dtype=float)
        eta_star = np.array([model.gravity(q_ref[i]) for i, model in enumerate(models)]) / gains.K_I
        eta_tilde = np.ravel(eta) - eta_star.ravel() - H @ xi_flat
        V_eta = 0.5 * float(eta_tilde @ eta_tilde) / gains.K_I
    U2 = V_eta / epsilon + U1

    U3 = U2
    if a_hat is not None:
        a_tilde = np.ravel(a_hat) - np.concatenate([model.kinematic_params for model in models])
        U3 = 0.5 * gains.K_P * float(a_tilde @ a_tilde) + U2
    return float(U1), float(U2), float(U3), float(V_eta)


def energy_bounds(
    gains, c_min: float, c_max: float, lambda1: float, lambda_J: float
) -> tuple[float, float, float, float]:
    """
    (c01, c02, c03, c04) such that

        1/2 c01 |e|^2 + 1/2 c02 |xi|^2 <= U1 <= 1/2 c03 |e|^2 + 1/2 c04 |xi|^2

    whenever c_min I <= H <= c_max I, |e_hat|^2 <= lambda1 |e|^2 and |J|^2 <= lambda_J.
    The cross term is split with |ab| <= (a^2 + b^2) / 2.
    """
    weight = gains.K_P + gains.alpha * gains.K_D
    cross = gains.alpha * c_max * lambda1 * lambda_J
    return (
        weight - cross,
        c_min - gains.alpha * c_max,
        weight + cross,
        c_max + gains.alpha * c_max,
    )


def attach_lyapunov(
    trace: SimulationTrace,
    graph: FormationGraph,
    models: Sequence[ManipulatorModel],
    controller: ControllerConfig,
    epsilon: Optional[float] = None,
) -> SimulationTrace:
    """
    Fills U1, U2, U3 and V_eta for every sample. The equilibrium q* is taken as
    the last recorded joint configuration.
    """
    if len(trace) == 0:
        return trace
    eps = controller.epsilon if epsilon is None else epsilon
    eps = 1.0 if eps is None else eps
    q_star = trace.q[-1]
    values = np.array(
        [
            lyapunov_values(
                graph,
                models,
                controller,
                trace.q[k],
                trace.xi[k],
                None if trace.eta is None else trace.eta[k],
                None if trace.a_hat is None else trace.a_hat[k],
                q_star,
                eps,
            )
            for k in range(len(trace))
        ]
    )
    trace.U1, trace.U2, trace.U3, trace.V_eta = values.T
    return trace


def descent_violations(values: np.ndarray, tol: float) -> int:
    "Number of samples at which the value rose by more than `tol`."
    if values is None or len(values) < 2:
        return 0
    return int(np.sum(np.diff(values) > tol))
