"""
Property suites run against a scenario's own models and graph. Each check
returns the worst residual it saw; a check passes when that residual is at
most its tolerance.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Optional

import numpy as np

from backend.control.config import ControllerConfig, ControllerState, Gains, Variant
from backend.control.controller import make_controller
from backend.control.laws import estimate_rate
from backend.control.localframe import local_frame_control, local_measurements
from backend.formation.graph import Flavor, formation_gradient, formation_potential
from backend.formation.rigidity import realize_shape
from backend.models.manipulator import Frame, ManipulatorModel, rotation_matrix
from backend.scenario import Scenario
from backend.sim.diagnostics import pid_discrepancy
from backend.sim.engine import Simulator
from backend.sim.trace import LYAPUNOV, SIGNALS

logger = logging.getLogger(__name__)

FD_STEP = 1e-6
FRAME_ANGLES = (0.0, math.pi / 6, math.pi / 3, -math.pi / 6)


class PropertyResult:
    def __init__(self, name: str, residual: float, tolerance: float, detail: str = "") -> None:
        self.name = name
        self.residual = float(residual)
        self.tolerance = tolerance
        self.detail = detail

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def asDict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }

    def __str__(self) -> str:
        return "%-22s %-4s residual %.3e (tol %.0e)%s" % (
            self.name,
            "ok" if self.passed else "FAIL",
            self.residual,
            self.tolerance,
            "  " + self.detail if self.detail else "",
        )


def random_joints(rng: np.random.Generator, scenario: Scenario) -> np.ndarray:
    "Joint angles near the initial configuration, (N, n)."
    return scenario.q0 + rng.uniform(-0.5, 0.5, size=scenario.q0.shape)


# --- model properties ---


def check_skew_symmetry(scenario: Scenario, samples: int = 1000, seed: int = 0) -> PropertyResult:
    "max |Hdot - C - C^T|; equivalent to xi^T (Hdot - 2C) xi = 0 for every xi."
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        q = random_joints(rng, scenario)
        xi = rng.normal(size=q.shape)
        for i, model in enumerate(scenario.models):
            C = model.coriolis(q[i], xi[i])
            residual = model.inertia_rate(q[i], xi[i]) - C - C.T
            worst = max(worst, float(np.max(np.abs(residual))))
    return PropertyResult("skew symmetry", worst, 1e-10)


def check_regressor(scenario: Scenario, samples: int = 1000, seed: int = 0) -> PropertyResult:
    "|J(q, a)^T zeta - Z(q, zeta) a| for random q, zeta and a."
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        q = random_joints(rng, scenario)
        for i, model in enumerate(scenario.models):
            zeta = rng.normal(size=model.task_dim)
            a = rng.uniform(0.5, 2.5, size=model.num_params)
            residual = model.jacobian(q[i], a).T @ zeta - model.kinematic_regressor(q[i], zeta) @ a
            worst = max(worst, float(np.max(np.abs(residual))))
    return PropertyResult("regressor identity", worst, 1e-12)


def central_difference(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    "Jacobian of f at x, one column per coordinate of x."
    columns = []
    for k in range(x.size):
        dx = np.zeros_like(x)
        dx[k] = step
        columns.append((np.asarray(f(x + dx)) - np.asarray(f(x - dx))) / (2.0 * step))
    return np.stack(columns, axis=-1)


def check_jacobian(scenario: Scenario, samples: int = 100, seed: int = 0) -> PropertyResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        q = random_joints(rng, scenario)
        for i, model in enumerate(scenario.models):
            numeric = central_difference(model.forward_kinematics, q[i])
            worst = max(worst, float(np.max(np.abs(numeric - model.jacobian(q[i])))))
    return PropertyResult("jacobian vs FD", worst, 1e-6)


def check_formation_gradient(scenario: Scenario, samples: int = 100, seed: int = 0) -> PropertyResult:
    "e_hat against central differences of V = 1/2 |e|^2 near the desired shape."
    rng = np.random.default_rng(seed)
    graph = scenario.graph
    x_star = realize_shape(graph).ravel()
    worst = 0.0
    for _ in range(samples):
        x = x_star + rng.normal(scale=0.1, size=x_star.shape)
        numeric = central_difference(lambda y: np.array(formation_potential(graph, y)), x)
        worst = max(worst, float(np.max(np.abs(numeric - formation_gradient(graph, x)))))
    return PropertyResult("gradient vs FD", worst, 1e-6)


# --- closed-loop properties ---


def with_initial_velocity(scenario: Scenario, qdot0) -> Scenario:
    return Scenario(
        scenario.graph,
        scenario.models,
        scenario.q0,
        qdot0,
        scenario.controller,
        scenario.simulation,
        scenario.certificate,
        scenario.nominal,
        scenario.kind,
        scenario.name,
    )


def check_energy_balance(scenario: Scenario, T: float = 2.0, seed: int = 0) -> PropertyResult:
    """
    With u = G(q) the kinetic energy 1/2 xi^T H xi is conserved; the drift is
    reported per simulated second.
    """
    rng = np.random.default_rng(seed)
    passive = ControllerConfig(Variant.PASSIVE, Gains(0.0, 0.0))
    moving = with_initial_velocity(scenario, rng.uniform(-0.5, 0.5, size=scenario.q0.shape))
    moving = moving.with_controller(passive).with_simulation(T=T, dt=1e-3, stride=10, jitter=0.0)
    trace = Simulator(moving).run(lyapunov=False)

    def kinetic(k: int) -> float:
        return sum(
            0.5 * trace.xi[k, i] @ model.inertia(trace.q[k, i]) @ trace.xi[k, i]
            for i, model in enumerate(moving.models)
        )

    energy = np.array([kinetic(k) for k in range(len(trace))])
    drift = float(np.max(np.abs(energy - energy[0]))) / max(T, 1e-12)
    return PropertyResult("energy balance", drift, 1e-6, "per second over %g s" % T)


def compensated(scenario: Scenario) -> Scenario:
    "The scenario with a law that carries an integral compensator."
    config = scenario.controller
    if config.hasCompensator:
        return scenario
    gains = config.gains
    variant = config.variant if config.variant in (Variant.APPROX, Variant.ADAPTIVE) else Variant.APPROX
    K_P = gains.K_P if gains.K_P > 0 else 50.0
    K_D = gains.K_D if gains.K_D > 0 else 20.0
    return scenario.with_controller(
        ControllerConfig(
            variant,
            Gains(K_P, K_D, max(gains.K_I, 1.0), gains.alpha if gains.alpha > 0 else 0.02),
            config.a_hat0,
            config.eta0,
            config.frame,
            config.epsilon,
        )
    )


def check_pid_form(scenario: Scenario, T: float = 0.1, dt: float = 2e-5) -> PropertyResult:
    """
    Recorded torques against the PID form integrated over the same trajectory.
    The step is small enough for the quadrature to resolve the fastest mode.
    """
    subject = compensated(scenario).with_simulation(T=T, dt=dt, stride=1, jitter=0.0)
    trace = Simulator(subject).run(lyapunov=False)
    return PropertyResult("PID form", pid_discrepancy(trace, subject), 1e-6, "over %g s" % T)


def rotated_models(models: list[ManipulatorModel], dimension: int) -> list[ManipulatorModel]:
    return [
        model.with_parameters(base_rotation=rotation_matrix(dimension, FRAME_ANGLES[i % len(FRAME_ANGLES)]))
        for i, model in enumerate(models)
    ]


def check_frame_invariance(scenario: Scenario, samples: int = 100, seed: int = 0) -> PropertyResult:
    """
    Torques from base-frame measurements against torques from global
    positions, with the bases turned by 0, 30, 60 and -30 degrees.
    """
    graph = scenario.graph
    if graph.flavor == Flavor.DISPLACEMENT:
        return PropertyResult("frame invariance", 0.0, 1e-9, "skipped: displacements need aligned frames")
    m = graph.dimension
    models = rotated_models(scenario.models, m)
    nominal = None if scenario.nominal is None else rotated_models(scenario.nominal, m)
    config = compensated(scenario).controller if scenario.controller.variant == Variant.PASSIVE else scenario.controller

    def controller_in(frame: Frame):
        local = ControllerConfig(config.variant, config.gains, config.a_hat0, config.eta0, frame, config.epsilon)
        return make_controller(local, models, nominal)

    global_law, local_law = controller_in(Frame.GLOBAL), controller_in(Frame.LOCAL)
    rng = np.random.default_rng(seed)
    N, n = scenario.q0.shape
    worst = 0.0
    for _ in range(samples):
        q = random_joints(rng, scenario)
        xi = rng.normal(size=q.shape)
        eta = rng.normal(size=(N, n)) if config.hasCompensator else None
        a_hat = None
        if config.hasEstimate:
            a_hat = config.a_hat0 + rng.uniform(-0.2, 0.2, size=config.a_hat0.shape)
        state = ControllerState(eta, a_hat)
        x = np.array([model.forward_kinematics(q[i]) for i, model in enumerate(models)])
        e_hat = formation_gradient(graph, x).reshape(N, m)
        for i in range(N):
            u_global, _, _ = global_law.command(i, q[i], xi[i], e_hat[i], state)
            measurements = local_measurements(graph, models, x, i)
            u_local, _, _ = local_frame_control(local_law, graph, i, measurements, q[i], xi[i], state)
            worst = max(worst, float(np.max(np.abs(u_global - u_local))))
    return PropertyResult("frame invariance", worst, 1e-9)


def check_adaptive_freeze(scenario: Scenario, samples: int = 100, seed: int = 0) -> PropertyResult:
    "e_hat = 0 gives a_hat_dot = 0 exactly."
    rng = np.random.default_rng(seed)
    gains = scenario.controller.gains
    gains = Gains(max(gains.K_P, 1.0), max(gains.K_D, 1.0), gains.K_I, gains.alpha if gains.alpha > 0 else 0.02)
    worst = 0.0
    for _ in range(samples):
        q = random_joints(rng, scenario)
        for i, model in enumerate(scenario.models):
            a_hat = rng.uniform(0.5, 2.5, size=model.num_params)
            xi = rng.normal(size=model.dof)
            rate = estimate_rate(model, q[i], xi, np.zeros(model.task_dim), a_hat, gains)
            worst = max(worst, float(np.max(np.abs(rate))))
    return PropertyResult("adaptive freeze", worst, 0.0)


def check_adaptive_identity(scenario: Scenario, samples: int = 100, seed: int = 0) -> PropertyResult:
    """
    K_P a~^T a_hat_dot + alpha K_P (Z a~)^T (Z a_hat) - K_P (Z a~)^T xi = 0,
    the cancellation that removes the parameter error from dU3/dt.
    """
    rng = np.random.default_rng(seed)
    gains = scenario.controller.gains
    alpha = gains.alpha if gains.alpha > 0 else 0.02
    K_P = max(gains.K_P, 1.0)
    law = Gains(K_P, 1.0, 0.0, alpha)
    worst = 0.0
    for _ in range(samples):
        q = random_joints(rng, scenario)
        for i, model in enumerate(scenario.models):
            e_hat = rng.normal(size=model.task_dim)
            xi = rng.normal(size=model.dof)
            a_hat = rng.uniform(0.5, 2.5, size=model.num_params)
            a_tilde = a_hat - model.kinematic_params
            Z = model.kinematic_regressor(q[i], e_hat)
            rate = estimate_rate(model, q[i], xi, e_hat, a_hat, law)
            total = K_P * a_tilde @ rate + alpha * K_P * (Z @ a_tilde) @ (Z @ a_hat) - K_P * (Z @ a_tilde) @ xi
            scale = 1.0 + K_P * float(np.abs(a_tilde) @ np.abs(rate))
            worst = max(worst, abs(float(total)) / scale)
    return PropertyResult("adaptive identity", worst, 1e-12)


def check_determinism(scenario: Scenario, T: float = 0.2) -> PropertyResult:
    "Two runs of the same scenario give bit-identical traces."
    short = scenario.with_simulation(T=min(T, scenario.simulation.T))
    first, second = Simulator(short).run(), Simulator(short).run()
    mismatched = []
    for name in SIGNALS + LYAPUNOV:
        a, b = getattr(first, name), getattr(second, name)
        if (a is None) != (b is None) or (a is not None and not np.array_equal(a, b)):
            mismatched.append(name)
    return PropertyResult("determinism", float(len(mismatched)), 0.0, ", ".join(mismatched))


PROPERTIES: dict[str, Callable[[Scenario], PropertyResult]] = {
    "skew": check_skew_symmetry,
    "regressor": check_regressor,
    "jacobian": check_jacobian,
    "gradient": check_formation_gradient,
    "energy": check_energy_balance,
    "pid": check_pid_form,
    "frame": check_frame_invariance,
    "freeze": check_adaptive_freeze,
    "identity": check_adaptive_identity,
    "determinism": check_determinism,
}


def run_properties(scenario: Scenario, names: Optional[list[str]] = None) -> list[PropertyResult]:
    results = []
    for name in names or list(PROPERTIES):
        result = PROPERTIES[name](scenario)
        (logger.info if result.passed else logger.warning)("%s", result)
        results.append(result)
    return results
