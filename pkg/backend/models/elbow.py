"""
Spatial elbow arm: a yaw joint on a vertical column of height l0, followed by a
shoulder and an elbow pitching in the vertical plane of the yaw.

    r(q) = l1 cos q2 + l2 cos(q2 + q3)
    h(q) = [r cos q1; r sin q1; l0 + l1 sin q2 + l2 sin(q2 + q3)]

Both links carry a point mass m_k at distance l_c[k] from their joint; every
joint has a rotor inertia. Kinematic parameters a = (l1, l2); l0 only shifts h.
"""

import numpy as np

from .manipulator import ManipulatorModel

DEFAULTS = {
    "m": [1.0, 0.8],
    "l": [0.3, 0.4, 0.4],
    "l_c": [0.2, 0.2],
    "rotor": [0.05, 0.05, 0.05],
}


class SpatialElbowArm(ManipulatorModel):
    dof = 3
    task_dim = 3
    num_params = 2
    parameter_shapes = {"m": 2, "l": 3, "l_c": 2, "rotor": 3}

    @property
    def kinematic_params(self) -> np.ndarray:
        return self.l[1:]

    def local_position(self, q) -> np.ndarray:
        l0, l1, l2 = self.l
        q2, q23 = q[1], q[1] + q[2]
        r = l1 * np.cos(q2) + l2 * np.cos(q23)
        return np.array(
            [r * np.cos(q[0]), r * np.sin(q[0]), l0 + l1 * np.sin(q2) + l2 * np.sin(q23)]
        )

    def jacobian_basis(self, q) -> np.ndarray:
        s1, c1 = np.sin(q[0]), np.cos(q[0])
        s2, c2 = np.sin(q[1]), np.cos(q[1])
        s23, c23 = np.sin(q[1] + q[2]), np.cos(q[1] + q[2])
        return np.array(
            [
                [[-c2 * s1, -s2 * c1, 0.0], [c2 * c1, -s2 * s1, 0.0], [0.0, c2, 0.0]],
                [[-c23 * s1, -s23 * c1, -s23 * c1], [c23 * c1, -s23 * s1, -s23 * s1], [0.0, c23, c23]],
            ]
        )

    def basis_partials(self, q) -> np.ndarray:
        s1, c1 = np.sin(q[0]), np.cos(q[0])
        s2, c2 = np.sin(q[1]), np.cos(q[1])
        s23, c23 = np.sin(q[1] + q[2]), np.cos(q[1] + q[2])
        zero = np.zeros(3)

        d1 = np.array(
            [
                [[-c2 * c1, s2 * s1, 0.0], [-c2 * s1, -s2 * c1, 0.0], zero],
                [[-c23 * c1, s23 * s1, s23 * s1], [-c23 * s1, -s23 * c1, -s23 * c1], zero],
            ]
        )
        # the second link depends on q2 and q3 only through q2 + q3
        d_link2 = np.array(
            [[s23 * s1, -c23 * c1, -c23 * c1], [-s23 * c1, -c23 * s1, -c23 * s1], [0.0, -s23, -s23]]
        )
        d2 = np.array(
            [
                [[s2 * s1, -c2 * c1, 0.0], [-s2 * c1, -c2 * s1, 0.0], [0.0, -s2, 0.0]],
                d_link2,
            ]
        )
        d3 = np.array([np.zeros((3, 3)), d_link2])
        return np.array([d1, d2, d3])

    def _com_basis(self) -> np.ndarray:
        "Coefficients c[j, k] with J_cj = sum_k c[j, k] J_k."
        return np.array([[self.l_c[0], 0.0], [self.l[1], self.l_c[1]]])

    def com_jacobians(self, q) -> list[tuple[float, np.ndarray]]:
        Jc = np.tensordot(self._com_basis(), self.jacobian_basis(q), axes=1)
        return [(self.m[0], Jc[0]), (self.m[1], Jc[1])]

    def inertia(self, q) -> np.ndarray:
        H = np.diag(self.rotor)
        for mass, Jc in self.com_jacobians(q):
            H = H + mass * Jc.T @ Jc
        return H

    def inertia_partials(self, q) -> np.ndarray:
        coeff = self._com_basis()
        Jc = np.tensordot(coeff, self.jacobian_basis(q), axes=1)
        dJc = np.einsum("jk,ikab->ijab", coeff, self.basis_partials(q))
        dH = np.zeros((3, 3, 3))
        for i in range(3):
            for j, mass in enumerate(self.m):
                cross = dJc[i, j].T @ Jc[j]
                dH[i] += mass * (cross + cross.T)
        return dH
