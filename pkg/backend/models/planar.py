"""
Two-link planar arm with revolute joints.

    h(q) = [l1 cos q1 + l2 cos(q1 + q2); l1 sin q1 + l2 sin(q1 + q2)]

Kinematic parameters a = (l1, l2). Link k has mass m_k, inertia I_c[k] about
its centre of mass, and the centre of mass at distance l_c[k] from its joint.
"""

import numpy as np

from .manipulator import ManipulatorModel

# link parameters of the horizontal-plane experiment
DEFAULTS = {
    "m": [1.2, 1.0],
    "I_c": [0.225, 0.1875],
    "l": [1.5, 1.5],
    "l_c": [0.75, 0.75],
}


class TwoLinkPlanarArm(ManipulatorModel):
    dof = 2
    task_dim = 2
    num_params = 2
    parameter_shapes = {"m": 2, "I_c": 2, "l": 2, "l_c": 2}

    @property
    def kinematic_params(self) -> np.ndarray:
        return self.l

    def local_position(self, q) -> np.ndarray:
        l1, l2 = self.l
        q1, q12 = q[0], q[0] + q[1]
        return np.array([l1 * np.cos(q1) + l2 * np.cos(q12), l1 * np.sin(q1) + l2 * np.sin(q12)])

    def jacobian_basis(self, q) -> np.ndarray:
        s1, c1 = np.sin(q[0]), np.cos(q[0])
        s12, c12 = np.sin(q[0] + q[1]), np.cos(q[0] + q[1])
        return np.array(
            [
                [[-s1, 0.0], [c1, 0.0]],
                [[-s12, -s12], [c12, c12]],
            ]
        )

    def basis_partials(self, q) -> np.ndarray:
        s1, c1 = np.sin(q[0]), np.cos(q[0])
        s12, c12 = np.sin(q[0] + q[1]), np.cos(q[0] + q[1])
        d2 = np.array([[-c12, -c12], [-s12, -s12]])
        return np.array(
            [
                [[[-c1, 0.0], [-s1, 0.0]], d2],
                [np.zeros((2, 2)), d2],
            ]
        )

    def com_jacobians(self, q) -> list[tuple[float, np.ndarray]]:
        J1, J2 = self.jacobian_basis(q)
        return [
            (self.m[0], self.l_c[0] * J1),
            (self.m[1], self.l[0] * J1 + self.l_c[1] * J2),
        ]

    def inertia(self, q) -> np.ndarray:
        m1, m2 = self.m
        I1, I2 = self.I_c
        l1 = self.l[0]
        lc1, lc2 = self.l_c
        c2 = np.cos(q[1])
        h11 = m1 * lc1**2 + I1 + m2 * (l1**2 + lc2**2 + 2 * l1 * lc2 * c2) + I2
        h12 = m2 * (lc2**2 + l1 * lc2 * c2) + I2
        h22 = m2 * lc2**2 + I2
        return np.array([[h11, h12], [h12, h22]])

    def inertia_partials(self, q) -> np.ndarray:
        k = self.m[1] * self.l[0] * self.l_c[1] * np.sin(q[1])
        return np.array([np.zeros((2, 2)), [[-2 * k, -k], [-k, 0.0]]])
