"""
ManipulatorModel: the plant of one agent,

    H(q) qddot + C(q, qdot) qdot + G(q) = u,    x = R h(q, a) + x0.

Subclasses describe the arm in its own base frame: the inertia matrix and its
partial derivatives, the centre-of-mass Jacobians used for gravity, and a
Jacobian basis {J_k} with J(q, a) = sum_k a_k J_k(q). The basis makes the
Jacobian linear in the kinematic parameters a, which gives the regressor
Z(q, zeta) a = J(q, a)^T zeta for free.

Array conventions:
    inertia_partials(q)[i] = dH/dq_i                shape (n, n, n)
    jacobian_basis(q)[k]   = J_k                    shape (p, m, n)
    basis_partials(q)[i, k] = dJ_k/dq_i              shape (n, p, m, n)
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum, unique
from typing import Any, Optional, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from utils.error import ConfigurationError


@unique
class GravityMode(Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@unique
class Frame(Enum):
    GLOBAL = "global"
    LOCAL = "local"


class JointState:
    def __init__(self, q, qdot=None) -> None:
        self.q = np.asarray(q, dtype=float)
        self.qdot = np.zeros_like(self.q) if qdot is None else np.asarray(qdot, dtype=float)
        if self.q.shape != self.qdot.shape:
            raise ConfigurationError(
                "joint position %s and velocity %s differ in shape" % (self.q.shape, self.qdot.shape)
            )
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.qdot))):
            raise ConfigurationError("joint state has non-finite entries")

    def __str__(self) -> str:
        return "q=%s qdot=%s" % (self.q, self.qdot)


def rotation_matrix(dimension: int, yaw: float = 0.0, euler: Optional[Sequence[float]] = None) -> np.ndarray:
    "Base orientation R (local to global). 3D frames use xyz Euler angles when given, else a yaw."
    if dimension == 2:
        if euler is not None:
            raise ConfigurationError("Euler angles are only meaningful in 3D")
        c, s = np.cos(yaw), np.sin(yaw)
        return np.array([[c, -s], [s, c]])
    if euler is not None:
        return Rotation.from_euler("xyz", euler).as_matrix()
    return Rotation.from_euler("z", yaw).as_matrix()


def _vector(name: str, value, length: int, positive: bool = True) -> np.ndarray:
    value = np.asarray(value, dtype=float)
    if value.shape != (length,):
        raise ConfigurationError("%s must have %d entries, got shape %s" % (name, length, value.shape))
    if not np.all(np.isfinite(value)):
        raise ConfigurationError("%s has non-finite entries" % name)
    if positive and np.any(value <= 0):
        raise ConfigurationError("%s must be positive" % name)
    return value


class ManipulatorModel(ABC):
    dof: int
    task_dim: int
    num_params: int
    # names of the dynamic parameter vectors, with their lengths
    parameter_shapes: dict[str, int]

    def __init__(
        self,
        base_position=None,
        base_rotation=None,
        gravity_mode: GravityMode = GravityMode.HORIZONTAL,
        g: float = 9.81,
        **params,
    ) -> None:
        m = self.task_dim
        self.base_position = np.zeros(m) if base_position is None else _vector(
            "base", base_position, m, positive=False
        )
        R = np.eye(m) if base_rotation is None else np.asarray(base_rotation, dtype=float)
        if R.shape != (m, m) or np.max(np.abs(R.T @ R - np.eye(m))) > 1e-12:
            raise ConfigurationError("base rotation must be an orthonormal %dx%d matrix" % (m, m))
        self.base_rotation = R
        self.gravity_mode = GravityMode(gravity_mode)
        if g < 0:
            raise ConfigurationError("gravity constant must be nonnegative")
        self.g = float(g)

        for name, length in self.parameter_shapes.items():
            if name not in params:
                raise ConfigurationError("%s needs parameter '%s'" % (type(self).__name__, name))
            setattr(self, name, _vector(name, params.pop(name), length))
        if params:
            raise ConfigurationError(
                "%s has no parameter(s) %s" % (type(self).__name__, ", ".join(sorted(params)))
            )

    # --- what a concrete arm provides, in its base frame ---

    @property
    @abstractmethod
    def kinematic_params(self) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def local_position(self, q) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def jacobian_basis(self, q) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def basis_partials(self, q) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def com_jacobians(self, q) -> list[tuple[float, np.ndarray]]:
        "Point masses and the Jacobians of their positions, base frame."
        raise NotImplementedError

    @abstractmethod
    def inertia(self, q) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def inertia_partials(self, q) -> np.ndarray:
        raise NotImplementedError

    @property
    def reach(self) -> float:
        return float(np.sum(self.kinematic_params))

    def parameters(self) -> dict[str, Any]:
        "Constructor arguments reproducing this model."
        params = {name: getattr(self, name).copy() for name in self.parameter_shapes}
        params.update(
            base_position=self.base_position.copy(),
            base_rotation=self.base_rotation.copy(),
            gravity_mode=self.gravity_mode,
            g=self.g,
        )
        return params

    def with_parameters(self, **changes) -> ManipulatorModel:
        return type(self)(**{**self.parameters(), **changes})

    # --- dynamics ---

    def coriolis(self, q, qdot) -> np.ndarray:
        "C from the Christoffel symbols of H, so that C + C^T = Hdot."
        dH = self.inertia_partials(q)
        qdot = np.asarray(qdot, dtype=float)
        return 0.5 * (
            np.einsum("ikj,i->kj", dH, qdot)
            + np.einsum("jki,i->kj", dH, qdot)
            - np.einsum("kij,i->kj", dH, qdot)
        )

    def inertia_rate(self, q, qdot) -> np.ndarray:
        return np.einsum("i,ijk->jk", np.asarray(qdot, dtype=float), self.inertia_partials(q))

    def gravity(self, q) -> np.ndarray:
        if self.gravity_mode == GravityMode.HORIZONTAL:
            return np.zeros(self.dof)
        up = np.zeros(self.task_dim)
        up[-1] = 1.0
        up_local = self.base_rotation.T @ up
        return self.g * sum(mass * (Jc.T @ up_local) for mass, Jc in self.com_jacobians(q))

    def dynamics_terms(self, q, qdot) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.inertia(q), self.coriolis(q, qdot), self.gravity(q)

    def joint_acceleration(self, q, qdot, u) -> np.ndarray:
        H, C, G = self.dynamics_terms(q, qdot)
        return np.linalg.solve(H, np.asarray(u) - C @ np.asarray(qdot) - G)

    # --- kinematics ---

    def forward_kinematics(self, q) -> np.ndarray:
        return self.base_rotation @ self.local_position(q) + self.base_position

    def jacobian(self, q, a=None, frame: Frame = Frame.GLOBAL) -> np.ndarray:
        "J(q, a); `a` defaults to the true kinematic parameters and may be an estimate."
        a = self.kinematic_params if a is None else np.asarray(a, dtype=float)
        J = np.tensordot(a, self.jacobian_basis(q), axes=1)
        return J if frame == Frame.LOCAL else self.base_rotation @ J

    def jacobian_derivative(self, q, qdot, a=None, frame: Frame = Frame.GLOBAL) -> np.ndarray:
        a = self.kinematic_params if a is None else np.asarray(a, dtype=float)
        dJ = np.einsum("i,k,ikab->ab", np.asarray(qdot, dtype=float), a, self.basis_partials(q))
        return dJ if frame == Frame.LOCAL else self.base_rotation @ dJ

    def kinematic_regressor(self, q, zeta, frame: Frame = Frame.GLOBAL) -> np.ndarray:
        "Z(q, zeta) with Z a = J(q, a)^T zeta, shape (n, p)."
        zeta = np.asarray(zeta, dtype=float)
        if frame == Frame.GLOBAL:
            zeta = self.base_rotation.T @ zeta
        return np.einsum("kmn,m->nk", self.jacobian_basis(q), zeta)

    def singularity_distance(self, q, a=None) -> float:
        "Smallest singular value of J(q, a); zero exactly at kinematic singularities."
        J = self.jacobian(q, a, Frame.LOCAL)
        return float(np.linalg.svd(J, compute_uv=False)[-1])

    # --- frames ---

    def to_local_frame(self, vec) -> np.ndarray:
        return self.base_rotation.T @ np.asarray(vec, dtype=float)

    def from_local_frame(self, vec) -> np.ndarray:
        return self.base_rotation @ np.asarray(vec, dtype=float)

    def to_local_position(self, x) -> np.ndarray:
        return self.base_rotation.T @ (np.asarray(x, dtype=float) - self.base_position)

    def from_local_position(self, x) -> np.ndarray:
        return self.base_rotation @ np.asarray(x, dtype=float) + self.base_position

    def __str__(self) -> str:
        params = ", ".join(
            "%s=%s" % (name, np.array2string(getattr(self, name), precision=4))
            for name in self.parameter_shapes
        )
        return "%s(%s, base=%s, gravity=%s)" % (
            type(self).__name__,
            params,
            self.base_position,
            self.gravity_mode.value,
        )


def dynamics_terms(model: ManipulatorModel, state: JointState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return model.dynamics_terms(state.q, state.qdot)
