"""
The per-agent control laws. Each one sees only its own arm, its own joint
state, its own internal state and its formation gradient e_hat_i, which is
built from relative positions to its neighbours.

`frame` says in which frame e_hat_i is expressed; the Jacobian and the
regressor are taken in the same frame, so the torque does not depend on it.
"""

from typing import Optional

import numpy as np

from backend.models.manipulator import Frame, ManipulatorModel

from .config import Gains


def control_exact(
    model: ManipulatorModel,
    q,
    xi,
    e_hat,
    gains: Gains,
    frame: Frame = Frame.GLOBAL,
) -> np.ndarray:
    "u = -K_P J^T(q, a) e_hat - K_D xi + G(q, w)."
    J = model.jacobian(q, None, frame)
    return -gains.K_P * J.T @ e_hat - gains.K_D * np.asarray(xi) + model.gravity(q)


def control_approx(
    model: ManipulatorModel,
    q,
    xi,
    e_hat,
    eta: Optional[np.ndarray],
    gains: Gains,
    a_hat=None,
    frame: Frame = Frame.GLOBAL,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """
    u = -K_P J^T(q, a_hat) e_hat - K_D xi + K_I eta,   eta_dot = -K_I eta + u.
    Without a compensator (eta is None) the K_I term and eta_dot are dropped.
    """
    J = model.jacobian(q, a_hat, frame)
    u = -gains.K_P * J.T @ e_hat - gains.K_D * np.asarray(xi)
    if eta is None:
        return u, None
    u = u + gains.K_I * eta
    return u, -gains.K_I * eta + u


def estimate_rate(model: ManipulatorModel, q, xi, e_hat, a_hat, gains: Gains, frame: Frame = Frame.GLOBAL) -> np.ndarray:
    "a_hat_dot = -Z^T(q, e_hat) [alpha Z(q, e_hat) a_hat - xi]."
    Z = model.kinematic_regressor(q, e_hat, frame)
    return -Z.T @ (gains.alpha * Z @ a_hat - np.asarray(xi))


def control_adaptive(
    model: ManipulatorModel,
    q,
    xi,
    e_hat,
    eta: Optional[np.ndarray],
    a_hat,
    gains: Gains,
    frame: Frame = Frame.GLOBAL,
) -> tuple[np.ndarray, Optional[np.ndarray], np.ndarray]:
    a_hat = np.asarray(a_hat, dtype=float)
    u, eta_dot = control_approx(model, q, xi, e_hat, eta, gains, a_hat, frame)
    return u, eta_dot, estimate_rate(model, q, xi, e_hat, a_hat, gains, frame)


def control_naive(
    model: ManipulatorModel,
    nominal: ManipulatorModel,
    q,
    xi,
    e_hat,
    gains: Gains,
    a_hat=None,
    frame: Frame = Frame.GLOBAL,
) -> np.ndarray:
    "Gravity compensation from the nominal dynamic parameters, no compensator."
    J = model.jacobian(q, a_hat, frame)
    return -gains.K_P * J.T @ e_hat - gains.K_D * np.asarray(xi) + nominal.gravity(q)


def control_passive(model: ManipulatorModel, q) -> np.ndarray:
    "u = G(q, w): the arm floats freely."
    return model.gravity(q)
