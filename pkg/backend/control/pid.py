"""
The integral-compensator law written as a PID on the passive output

    y = Lambda J^T(q, a_hat) e_hat + xi,    Lambda = K_D^-1 K_P,
    u = -K_P J^T(q, a_hat) e_hat - K_D xi + K_I eta(0) - K_I K_D int_0^t y ds.

Substituting the law into eta_dot = -K_I eta + u gives eta_dot = -K_D y, which
is where the two forms meet.
"""

from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson

from backend.models.manipulator import ManipulatorModel
from utils.error import UsageError

from .config import Gains


def passive_output(model: ManipulatorModel, q, xi, e_hat, gains: Gains, a_hat=None) -> np.ndarray:
    J = model.jacobian(q, a_hat)
    return gains.Lambda * J.T @ e_hat + np.asarray(xi)


def pid_equivalent_form(
    model: ManipulatorModel,
    t,
    q,
    xi,
    e_hat,
    gains: Gains,
    a_hat=None,
    eta0: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    u(t) along a recorded trajectory of one agent.

    t: (T,), q and xi: (T, n), e_hat: (T, m), a_hat: (T, p), (p,) or None.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise UsageError("the PID form needs a non-empty time axis")
    q, xi, e_hat = (np.asarray(v, dtype=float) for v in (q, xi, e_hat))
    if a_hat is None or np.ndim(a_hat) == 1:
        a_hat = [a_hat] * t.size

    J_e = np.array([model.jacobian(q[k], a_hat[k]).T @ e_hat[k] for k in range(t.size)])
    y = gains.Lambda * J_e + xi
    if t.size == 1:
        integral = np.zeros_like(y)
    else:
        integral = cumulative_simpson(y, x=t, axis=0, initial=0.0)

    u = -gains.K_P * J_e - gains.K_D * xi - gains.K_I * gains.K_D * integral
    if eta0 is not None:
        u = u + gains.K_I * np.asarray(eta0)
    return u
