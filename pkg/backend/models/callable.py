"""
CallableModel: an arm given by user functions instead of a closed-form class.

Required callables (all in the arm's base frame):
    inertia(q) -> H
    kinematics(q) -> h(q)
    jacobian(q, a) -> J(q, a), linear in a
Optional:
    coriolis(q, qdot) -> C    (default: Christoffel symbols of finite-difference dH/dq)
    gravity(q) -> G           (default: zero)

Derivatives the callables do not provide are taken by central differences.
"""

from typing import Any, Callable, Optional

import numpy as np

from utils.error import ConfigurationError

from .manipulator import GravityMode, ManipulatorModel

FD_STEP = 1e-6


class CallableModel(ManipulatorModel):
    parameter_shapes: dict[str, int] = {}

    def __init__(
        self,
        dof: int,
        task_dim: int,
        kinematic_params,
        inertia: Callable,
        kinematics: Callable,
        jacobian: Callable,
        coriolis: Optional[Callable] = None,
        gravity: Optional[Callable] = None,
        base_position=None,
        base_rotation=None,
        gravity_mode: GravityMode = GravityMode.HORIZONTAL,
        g: float = 9.81,
    ) -> None:
        if task_dim > dof:
            raise ConfigurationError("task dimension %d exceeds %d joints" % (task_dim, dof))
        self.dof = dof
        self.task_dim = task_dim
        self._a = np.asarray(kinematic_params, dtype=float)
        self.num_params = self._a.size
        self._inertia = inertia
        self._kinematics = kinematics
        self._jacobian = jacobian
        self._coriolis = coriolis
        self._gravity = gravity
        super().__init__(base_position, base_rotation, gravity_mode, g)

    def parameters(self) -> dict[str, Any]:
        params = super().parameters()
        params.update(
            dof=self.dof,
            task_dim=self.task_dim,
            kinematic_params=self._a.copy(),
            inertia=self._inertia,
            kinematics=self._kinematics,
            jacobian=self._jacobian,
            coriolis=self._coriolis,
            gravity=self._gravity,
        )
        return params

    @property
    def kinematic_params(self) -> np.ndarray:
        return self._a

    def local_position(self, q) -> np.ndarray:
        return np.asarray(self._kinematics(np.asarray(q, dtype=float)), dtype=float)

    def jacobian_basis(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        return np.array([self._jacobian(q, unit) for unit in np.eye(self.num_params)])

    def basis_partials(self, q) -> np.ndarray:
        return _central_difference(self.jacobian_basis, q)

    def com_jacobians(self, q) -> list[tuple[float, np.ndarray]]:
        raise ConfigurationError("a callable model has no point-mass description; pass gravity()")

    def inertia(self, q) -> np.ndarray:
        return np.asarray(self._inertia(np.asarray(q, dtype=float)), dtype=float)

    def inertia_partials(self, q) -> np.ndarray:
        return _central_difference(self.inertia, q)

    def coriolis(self, q, qdot) -> np.ndarray:
        if self._coriolis is None:
            return super().coriolis(q, qdot)
        return np.asarray(self._coriolis(np.asarray(q, dtype=float), np.asarray(qdot, dtype=float)))

    def gravity(self, q) -> np.ndarray:
        if self._gravity is None or self.gravity_mode == GravityMode.HORIZONTAL:
            return np.zeros(self.dof)
        return np.asarray(self._gravity(np.asarray(q, dtype=float)), dtype=float)


def _central_difference(func: Callable, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    partials = []
    for i in range(q.size):
        dq = np.zeros_like(q)
        dq[i] = FD_STEP
        partials.append((func(q + dq) - func(q - dq)) / (2 * FD_STEP))
    return np.array(partials)
