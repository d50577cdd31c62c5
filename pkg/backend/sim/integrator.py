from typing import Callable

import numpy as np

Rates = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(f: Rates, t: float, y: np.ndarray, dt: float) -> np.ndarray:
    "One classical Runge-Kutta step; every stage evaluates f at its own state."
    k1 = f(t, y)
    k2 = f(t + dt / 2.0, y + k1 * dt / 2.0)
    k3 = f(t + dt / 2.0, y + k2 * dt / 2.0)
    k4 = f(t + dt, y + k3 * dt)
    return y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
