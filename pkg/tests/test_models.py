import numpy as np
import pytest

from backend.models import (
    CallableModel,
    Frame,
    GravityMode,
    JointState,
    SpatialElbowArm,
    TwoLinkPlanarArm,
    dynamics_terms,
    rotation_matrix,
)
from backend.models.planar import DEFAULTS
from utils.error import ConfigurationError


def numeric_jacobian(model, q, h=1e-6):
    q = np.asarray(q, dtype=float)
    columns = []
    for i in range(q.size):
        dq = np.zeros_like(q)
        dq[i] = h
        columns.append((model.forward_kinematics(q + dq) - model.forward_kinematics(q - dq)) / (2 * h))
    return np.array(columns).T


def test_planar_forward_kinematics(planar_arm):
    assert planar_arm.forward_kinematics([0.0, 0.0]) == pytest.approx([3.0, 0.0])
    assert planar_arm.forward_kinematics([np.pi / 2, 0.0]) == pytest.approx([0.0, 3.0])


def test_planar_jacobian(planar_arm):
    J = planar_arm.jacobian([0.0, np.pi / 2])
    assert np.allclose(J, [[-1.5, -1.5], [1.5, 0.0]])


def test_stretched_arm_is_singular(planar_arm):
    assert np.linalg.matrix_rank(planar_arm.jacobian([0.3, 0.0])) == 1
    assert planar_arm.singularity_distance([0.3, 0.0]) == pytest.approx(0.0, abs=1e-12)
    assert planar_arm.singularity_distance([0.3, np.pi / 2]) > 0.5


def test_singularity_distance_scales_with_the_links(planar_arm):
    q = [0.2, 1.1]
    doubled = planar_arm.singularity_distance(q, a=2 * planar_arm.kinematic_params)
    assert doubled == pytest.approx(2 * planar_arm.singularity_distance(q))


def test_vertical_gravity_at_rest_pose():
    arm = TwoLinkPlanarArm(gravity_mode=GravityMode.VERTICAL, **DEFAULTS)
    assert arm.gravity([0.0, 0.0]) == pytest.approx(9.81 * np.array([3.15, 0.75]))


def test_horizontal_plane_has_no_gravity(planar_arm):
    assert np.array_equal(planar_arm.gravity([0.4, 0.9]), np.zeros(2))


def test_inertia_is_symmetric_positive_definite(planar_arm, elbow_arm, rng):
    for model in (planar_arm, elbow_arm):
        for _ in range(10):
            q = rng.uniform(-np.pi, np.pi, size=model.dof)
            H = model.inertia(q)
            assert np.allclose(H, H.T)
            assert np.linalg.eigvalsh(H)[0] > 0


@pytest.mark.parametrize("which", ["planar", "elbow"])
def test_inertia_rate_minus_twice_coriolis_is_skew(which, planar_arm, elbow_arm, rng):
    model = planar_arm if which == "planar" else elbow_arm
    for _ in range(10):
        q = rng.uniform(-np.pi, np.pi, size=model.dof)
        qdot = rng.normal(size=model.dof)
        N = model.inertia_rate(q, qdot) - 2 * model.coriolis(q, qdot)
        assert np.max(np.abs(N + N.T)) < 1e-10


@pytest.mark.parametrize("which", ["planar", "elbow"])
def test_inertia_partials_match_finite_differences(which, planar_arm, elbow_arm, rng):
    model = planar_arm if which == "planar" else elbow_arm
    q = rng.uniform(-np.pi, np.pi, size=model.dof)
    h = 1e-6
    for i in range(model.dof):
        dq = np.zeros(model.dof)
        dq[i] = h
        numeric = (model.inertia(q + dq) - model.inertia(q - dq)) / (2 * h)
        assert np.allclose(model.inertia_partials(q)[i], numeric, atol=1e-7)


def test_jacobian_matches_finite_differences(planar_arm, elbow_arm, rng):
    rotated = planar_arm.with_parameters(base_rotation=rotation_matrix(2, 0.7), base_position=[1.0, -2.0])
    for model in (planar_arm, elbow_arm, rotated):
        q = rng.uniform(-np.pi, np.pi, size=model.dof)
        assert np.allclose(model.jacobian(q), numeric_jacobian(model, q), atol=1e-7)


def test_jacobian_derivative_matches_finite_differences(elbow_arm, rng):
    q = rng.uniform(-np.pi, np.pi, size=3)
    qdot = rng.normal(size=3)
    h = 1e-6
    numeric = (elbow_arm.jacobian(q + h * qdot) - elbow_arm.jacobian(q - h * qdot)) / (2 * h)
    assert np.allclose(elbow_arm.jacobian_derivative(q, qdot), numeric, atol=1e-7)


def test_regressor_is_linear_in_the_parameters(planar_arm, rng):
    arm = planar_arm.with_parameters(base_rotation=rotation_matrix(2, 1.2))
    q = rng.uniform(-np.pi, np.pi, size=2)
    zeta = rng.normal(size=2)
    a = rng.uniform(0.5, 2.0, size=2)
    Z = arm.kinematic_regressor(q, zeta)
    assert Z.shape == (2, 2)
    assert np.allclose(Z @ a, arm.jacobian(q, a).T @ zeta)
    local = arm.kinematic_regressor(q, arm.to_local_frame(zeta), Frame.LOCAL)
    assert np.allclose(local, Z)


def test_rotation_matrix_in_the_plane():
    R = rotation_matrix(2, np.pi / 6)
    assert R @ np.array([1.0, 0.0]) == pytest.approx([np.cos(np.pi / 6), 0.5])


def test_rotation_matrix_in_space():
    assert np.allclose(rotation_matrix(3), np.eye(3))
    R = rotation_matrix(3, euler=[0.1, -0.4, 0.8])
    assert np.allclose(R.T @ R, np.eye(3))
    assert np.linalg.det(R) == pytest.approx(1.0)
    with pytest.raises(ConfigurationError):
        rotation_matrix(2, euler=[0.0, 0.0, 0.0])


def test_local_and_global_frames(planar_arm, rng):
    arm = planar_arm.with_parameters(base_rotation=rotation_matrix(2, -0.9), base_position=[2.0, 1.0])
    x = rng.normal(size=2)
    assert np.allclose(arm.from_local_position(arm.to_local_position(x)), x)
    q = rng.uniform(-np.pi, np.pi, size=2)
    assert np.allclose(arm.to_local_position(arm.forward_kinematics(q)), arm.local_position(q))
    assert np.allclose(arm.jacobian(q, frame=Frame.LOCAL), arm.base_rotation.T @ arm.jacobian(q))


def test_elbow_kinematics(elbow_arm):
    assert elbow_arm.forward_kinematics([0.0, 0.0, 0.0]) == pytest.approx([0.8, 0.0, 0.3])
    assert elbow_arm.forward_kinematics([np.pi / 2, np.pi / 2, 0.0]) == pytest.approx([0.0, 0.0, 1.1])
    assert np.array_equal(elbow_arm.kinematic_params, [0.4, 0.4])


def test_elbow_gravity_holds_the_links_up(elbow_arm):
    arm = elbow_arm.with_parameters(gravity_mode=GravityMode.VERTICAL)
    G = arm.gravity([0.0, 0.0, 0.0])
    assert G[0] == pytest.approx(0.0)
    assert G[1] == pytest.approx(9.81 * (1.0 * 0.2 + 0.8 * 0.6))
    assert G[2] == pytest.approx(9.81 * 0.8 * 0.2)


def test_joint_acceleration_solves_the_dynamics(planar_arm, rng):
    arm = planar_arm.with_parameters(gravity_mode=GravityMode.VERTICAL)
    q, qdot, u = rng.normal(size=2), rng.normal(size=2), rng.normal(size=2)
    qddot = arm.joint_acceleration(q, qdot, u)
    H, C, G = dynamics_terms(arm, JointState(q, qdot))
    assert np.allclose(H @ qddot + C @ qdot + G, u)


def test_callable_model_matches_the_closed_form(planar_arm, rng):
    arm = planar_arm
    model = CallableModel(
        dof=2,
        task_dim=2,
        kinematic_params=arm.kinematic_params,
        inertia=arm.inertia,
        kinematics=arm.local_position,
        jacobian=lambda q, a: arm.jacobian(q, a, Frame.LOCAL),
    )
    for _ in range(5):
        q = rng.uniform(-np.pi, np.pi, size=2)
        qdot = rng.normal(size=2)
        assert np.allclose(model.jacobian(q), arm.jacobian(q))
        assert np.allclose(model.coriolis(q, qdot), arm.coriolis(q, qdot), atol=1e-6)
        assert np.allclose(model.jacobian_derivative(q, qdot), arm.jacobian_derivative(q, qdot), atol=1e-6)


def test_bad_parameters_are_rejected():
    with pytest.raises(ConfigurationError):
        TwoLinkPlanarArm(m=[1.0, -1.0], I_c=[0.1, 0.1], l=[1.0, 1.0], l_c=[0.5, 0.5])
    with pytest.raises(ConfigurationError):
        TwoLinkPlanarArm(m=[1.0], I_c=[0.1, 0.1], l=[1.0, 1.0], l_c=[0.5, 0.5])
    with pytest.raises(ConfigurationError):
        TwoLinkPlanarArm(spring=[1.0], **DEFAULTS)
    with pytest.raises(ConfigurationError):
        TwoLinkPlanarArm(base_rotation=[[1.0, 1.0], [0.0, 1.0]], **DEFAULTS)


def test_joint_state_rejects_non_finite_values():
    with pytest.raises(ConfigurationError):
        JointState([0.0, np.nan])
    with pytest.raises(ConfigurationError):
        JointState([0.0, 1.0], [0.0])
