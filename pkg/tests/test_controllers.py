import numpy as np
import pytest

from backend.control.config import ControllerConfig, ControllerState, EtaInit, Gains, Variant
from backend.control.controller import (
    AdaptiveController,
    ExactController,
    PassiveController,
    make_controller,
)
from backend.control.laws import (
    control_adaptive,
    control_approx,
    control_exact,
    control_naive,
    control_passive,
    estimate_rate,
)
from backend.control.localframe import (
    check_common_orientation,
    local_frame_control,
    local_gradient,
    local_measurements,
)
from backend.control.pid import passive_output, pid_equivalent_form
from backend.formation.graph import Flavor, FormationGraph, formation_gradient
from backend.models import Frame, GravityMode, TwoLinkPlanarArm, rotation_matrix
from backend.models.planar import DEFAULTS
from utils.error import ConfigurationError, FrameMismatchError, UsageError

from .conftest import SQUARE_EDGES, square_scenario

UNIT = Gains(K_P=1.0, K_D=1.0)


def test_exact_law_pushes_against_the_gradient(planar_arm):
    u = control_exact(planar_arm, [0.0, np.pi / 2], [0.0, 0.0], [1.0, 0.0], UNIT)
    assert u == pytest.approx([1.5, 1.5])


def test_exact_law_damps_the_joint_velocity(planar_arm):
    gains = Gains(K_P=5.0, K_D=3.0)
    u = control_exact(planar_arm, [0.4, 1.0], [1.0, -2.0], [0.0, 0.0], gains)
    assert u == pytest.approx([-3.0, 6.0])


def test_exact_law_at_rest_only_holds_gravity():
    arm = TwoLinkPlanarArm(gravity_mode=GravityMode.VERTICAL, **DEFAULTS)
    q = [0.3, 0.8]
    u = control_exact(arm, q, [0.0, 0.0], [0.0, 0.0], Gains(800.0, 180.0))
    assert np.allclose(u, arm.gravity(q))


def test_compensator_is_stationary_when_it_holds_the_torque(planar_arm):
    gains = Gains(K_P=10.0, K_D=4.0, K_I=2.0)
    u, eta_dot = control_approx(planar_arm, [0.1, 0.9], [0.0, 0.0], [0.0, 0.0], np.array([1.0, 2.0]), gains)
    assert u == pytest.approx([2.0, 4.0])
    assert eta_dot == pytest.approx([0.0, 0.0])


def test_approx_law_without_compensator(planar_arm):
    u, eta_dot = control_approx(planar_arm, [0.1, 0.9], [1.0, 0.0], [0.0, 0.0], None, Gains(10.0, 4.0))
    assert eta_dot is None
    assert u == pytest.approx([-4.0, 0.0])


def test_approx_law_uses_the_estimated_jacobian(planar_arm):
    q, e_hat = [0.0, np.pi / 2], [1.0, 0.0]
    u, _ = control_approx(planar_arm, q, [0.0, 0.0], e_hat, None, UNIT, a_hat=[3.0, 3.0])
    assert u == pytest.approx([3.0, 3.0])


def test_estimates_freeze_without_formation_error(planar_arm):
    rate = estimate_rate(planar_arm, [0.2, 1.0], [0.5, -0.3], [0.0, 0.0], [2.0, 2.0], Gains(1.0, 1.0, alpha=0.1))
    assert np.array_equal(rate, np.zeros(2))


def test_estimate_rate_at_rest_pulls_toward_zero(planar_arm, rng):
    gains = Gains(1.0, 1.0, alpha=0.02)
    q, e_hat, a_hat = rng.normal(size=2), rng.normal(size=2), np.array([2.0, 2.0])
    Z = planar_arm.kinematic_regressor(q, e_hat)
    rate = estimate_rate(planar_arm, q, [0.0, 0.0], e_hat, a_hat, gains)
    assert np.allclose(rate, -0.02 * Z.T @ Z @ a_hat)


def test_adaptive_law_combines_torque_and_update(planar_arm, rng):
    gains = Gains(8.0, 3.0, K_I=1.5, alpha=0.05)
    q, xi, e_hat = rng.normal(size=2), rng.normal(size=2), rng.normal(size=2)
    eta, a_hat = rng.normal(size=2), np.array([1.4, 1.6])
    u, eta_dot, a_dot = control_adaptive(planar_arm, q, xi, e_hat, eta, a_hat, gains)
    u_ref, eta_ref = control_approx(planar_arm, q, xi, e_hat, eta, gains, a_hat)
    assert np.allclose(u, u_ref)
    assert np.allclose(eta_dot, eta_ref)
    assert np.allclose(a_dot, estimate_rate(planar_arm, q, xi, e_hat, a_hat, gains))


def test_naive_law_uses_the_nominal_gravity():
    arm = TwoLinkPlanarArm(gravity_mode=GravityMode.VERTICAL, **DEFAULTS)
    nominal = arm.with_parameters(m=0.9 * arm.m)
    q = [0.5, 0.5]
    u = control_naive(arm, nominal, q, [0.0, 0.0], [0.0, 0.0], Gains(10.0, 4.0))
    assert np.allclose(u, nominal.gravity(q))
    assert not np.allclose(u, arm.gravity(q))


def test_passive_law_is_pure_gravity(planar_arm):
    assert np.array_equal(control_passive(planar_arm, [0.3, 0.4]), np.zeros(2))


def test_gain_validation():
    with pytest.raises(ConfigurationError):
        ControllerConfig(Variant.EXACT, Gains(0.0, 1.0))
    with pytest.raises(ConfigurationError):
        ControllerConfig(Variant.APPROX, Gains(1.0, 1.0, K_I=-1.0))
    with pytest.raises(ConfigurationError):
        ControllerConfig(Variant.ADAPTIVE, Gains(1.0, 1.0))
    with pytest.raises(ConfigurationError):
        ControllerConfig(Variant.ADAPTIVE, Gains(1.0, 1.0, alpha=0.0), a_hat0=np.ones((4, 2)))
    ControllerConfig(Variant.PASSIVE, Gains(0.0, 0.0))


def test_compensator_only_with_integral_gain():
    assert ControllerConfig(Variant.APPROX, Gains(1.0, 1.0, K_I=1.0)).hasCompensator
    assert not ControllerConfig(Variant.APPROX, Gains(1.0, 1.0)).hasCompensator
    assert not ControllerConfig(Variant.EXACT, Gains(1.0, 1.0, K_I=1.0)).hasCompensator


def test_factory_picks_the_law(planar_arm):
    models = [planar_arm] * 2
    assert isinstance(make_controller(ControllerConfig(Variant.EXACT, UNIT), models), ExactController)
    assert isinstance(make_controller(ControllerConfig(Variant.PASSIVE, UNIT), models), PassiveController)
    adaptive = ControllerConfig(Variant.ADAPTIVE, UNIT, a_hat0=np.full((2, 2), 2.0))
    assert isinstance(make_controller(adaptive, models), AdaptiveController)


def test_initial_compensator_holds_the_nominal_gravity():
    arm = TwoLinkPlanarArm(gravity_mode=GravityMode.VERTICAL, **DEFAULTS)
    nominal = [arm.with_parameters(m=0.9 * arm.m)] * 2
    config = ControllerConfig(Variant.APPROX, Gains(10.0, 4.0, K_I=2.0), eta0=EtaInit.NOMINAL_GRAVITY)
    q0 = np.array([[0.2, 0.7], [1.0, -0.4]])
    state = make_controller(config, [arm, arm], nominal).initialState(q0)
    assert state.a_hat is None
    for i in range(2):
        assert np.allclose(2.0 * state.eta[i], nominal[i].gravity(q0[i]))


def test_initial_state_of_the_adaptive_law(adaptive_square):
    controller = make_controller(adaptive_square.controller, adaptive_square.models)
    state = controller.initialState(adaptive_square.q0)
    assert state.eta is None
    assert np.array_equal(state.a_hat, np.full((4, 2), 2.0))
    state.a_hat[0, 0] = 9.0
    assert adaptive_square.controller.a_hat0[0, 0] == 2.0


def test_controller_state_copy_is_independent():
    state = ControllerState(np.zeros((2, 2)), np.ones((2, 2)))
    copy = state.copy()
    copy.eta[0, 0] = 1.0
    assert state.eta[0, 0] == 0.0
    assert ControllerState().agentEta(0) is None


def test_distance_gradient_from_local_measurements(rng):
    scenario = square_scenario(rotation1="0.7")
    x = rng.normal(size=(4, 2))
    global_hat = formation_gradient(scenario.graph, x).reshape(4, 2)
    for i, model in enumerate(scenario.models):
        local = local_gradient(scenario.graph, i, local_measurements(scenario.graph, scenario.models, x, i))
        assert np.allclose(model.from_local_frame(local), global_hat[i])


@pytest.mark.parametrize("frame", ["global", "local"])
def test_local_frame_command_matches_the_global_one(frame, rng):
    scenario = square_scenario(
        controller="variant = adaptive; K_P = 50; K_D = 10; K_I = 1; a_hat0 = [1.4, 1.6]; frame = %s;" % frame,
        rotation1="-1.1",
    )
    assert scenario.controller.frame == Frame(frame)
    controller = make_controller(scenario.controller, scenario.models)
    state = controller.initialState(scenario.q0)
    state.eta = rng.normal(size=(4, 2))
    q, xi = scenario.q0, rng.normal(size=(4, 2))
    x = np.array([model.forward_kinematics(q[i]) for i, model in enumerate(scenario.models)])
    e_hat = formation_gradient(scenario.graph, x).reshape(4, 2)
    for i, model in enumerate(scenario.models):
        measurements = local_measurements(scenario.graph, scenario.models, x, i)
        local = local_frame_control(controller, scenario.graph, i, measurements, q[i], xi[i], state)
        if controller.frame == Frame.LOCAL:
            reference = controller.command(i, q[i], xi[i], model.to_local_frame(e_hat[i]), state)
        else:
            reference = controller.command(i, q[i], xi[i], e_hat[i], state)
        for a, b in zip(local, reference):
            assert np.allclose(a, b)
        global_command = AdaptiveController(
            ControllerConfig(Variant.ADAPTIVE, controller.gains, scenario.controller.a_hat0),
            scenario.models,
        ).command(i, q[i], xi[i], e_hat[i], state)
        assert np.allclose(local[0], global_command[0])
        assert np.allclose(local[2], global_command[2])


def test_displacement_formation_needs_a_common_orientation(planar_arm):
    graph = FormationGraph(4, SQUARE_EDGES, 2, Flavor.DISPLACEMENT, np.zeros((5, 2)))
    rotated = planar_arm.with_parameters(base_rotation=rotation_matrix(2, 0.3))
    check_common_orientation(graph, [planar_arm] * 4)
    with pytest.raises(FrameMismatchError) as info:
        check_common_orientation(graph, [planar_arm, planar_arm, rotated, planar_arm])
    assert info.value.agent == 3
    assert info.value.exitCode == 2


def test_pid_form_on_a_constant_trajectory(planar_arm):
    gains = Gains(K_P=6.0, K_D=2.0, K_I=0.5)
    q, e_hat = np.array([0.2, 1.3]), np.array([0.3, -0.1])
    t = np.linspace(0.0, 2.0, 21)
    JTe = planar_arm.jacobian(q).T @ e_hat
    u = pid_equivalent_form(
        planar_arm,
        t,
        np.tile(q, (21, 1)),
        np.zeros((21, 2)),
        np.tile(e_hat, (21, 1)),
        gains,
        eta0=np.array([1.0, 1.0]),
    )
    expected = -gains.K_P * JTe - gains.K_I * gains.K_P * np.outer(t, JTe) + 0.5
    assert np.allclose(u, expected)


def test_passive_output(planar_arm):
    gains = Gains(K_P=6.0, K_D=2.0)
    y = passive_output(planar_arm, [0.0, np.pi / 2], [1.0, 1.0], [1.0, 0.0], gains)
    assert y == pytest.approx([3.0 * -1.5 + 1.0, 3.0 * -1.5 + 1.0])


def test_pid_form_needs_samples(planar_arm):
    with pytest.raises(UsageError):
        pid_equivalent_form(planar_arm, [], np.zeros((0, 2)), np.zeros((0, 2)), np.zeros((0, 2)), UNIT)
