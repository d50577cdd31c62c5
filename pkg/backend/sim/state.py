"""
NetworkState and the flat layout RK4 integrates.

    y = [q (N n) | xi (N n) | eta (N n), if any | a_hat (N p), if any]
"""

from __future__ import annotations

import numpy as np

from backend.control.config import ControllerState


class NetworkState:
    def __init__(self, t: float, q, xi, control: ControllerState) -> None:
        self.t = float(t)
        self.q = np.asarray(q, dtype=float)
        self.xi = np.asarray(xi, dtype=float)
        self.control = control

    @property
    def eta(self):
        return self.control.eta

    @property
    def a_hat(self):
        return self.control.a_hat

    def isFinite(self) -> bool:
        parts = [self.q, self.xi]
        parts += [v for v in (self.control.eta, self.control.a_hat) if v is not None]
        return all(np.all(np.isfinite(v)) for v in parts)

    def __str__(self) -> str:
        return "t=%.6g q=%s xi=%s" % (self.t, self.q.tolist(), self.xi.tolist())


class StateLayout:
    def __init__(self, num_agents: int, dof: int, num_params: int, has_eta: bool, has_estimate: bool) -> None:
        self.N = num_agents
        self.n = dof
        self.p = num_params
        self.has_eta = has_eta
        self.has_estimate = has_estimate

        joint = self.N * self.n
        self.q = slice(0, joint)
        self.xi = slice(joint, 2 * joint)
        end = 2 * joint
        self.eta = None
        if has_eta:
            self.eta = slice(end, end + joint)
            end += joint
        self.a_hat = None
        if has_estimate:
            self.a_hat = slice(end, end + self.N * self.p)
            end += self.N * self.p
        self.size = end

    def pack(self, q, xi, eta=None, a_hat=None) -> np.ndarray:
        y = np.empty(self.size)
        y[self.q] = np.ravel(q)
        y[self.xi] = np.ravel(xi)
        if self.eta is not None:
            y[self.eta] = np.ravel(eta)
        if self.a_hat is not None:
            y[self.a_hat] = np.ravel(a_hat)
        return y

    def packState(self, state: NetworkState) -> np.ndarray:
        return self.pack(state.q, state.xi, state.control.eta, state.control.a_hat)

    def unpack(self, y: np.ndarray, t: float = 0.0) -> NetworkState:
        q = y[self.q].reshape(self.N, self.n)
        xi = y[self.xi].reshape(self.N, self.n)
        eta = None if self.eta is None else y[self.eta].reshape(self.N, self.n)
        a_hat = None if self.a_hat is None else y[self.a_hat].reshape(self.N, self.p)
        return NetworkState(t, q, xi, ControllerState(eta, a_hat))
