"""
The closed loop of the whole network:

    q_dot = xi,   xi_dot = H^-1 (u - C xi - G),   eta_dot, a_hat_dot per law,

integrated with fixed-step RK4. Every stage recomputes positions, gradients
and commands from its own state.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from backend.certify.lyapunov import attach_lyapunov
from backend.control.controller import make_controller
from backend.control.localframe import local_frame_control, local_measurements
from backend.formation.graph import edge_errors, formation_gradient
from backend.models.manipulator import Frame
from backend.scenario import Scenario
from utils.error import SimulationBlowUpError

from .integrator import rk4_step
from .state import NetworkState, StateLayout
from .trace import SimulationTrace, TraceRecorder

logger = logging.getLogger(__name__)


class Simulator:
    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.graph = scenario.graph
        self.models = scenario.models
        self.settings = scenario.simulation
        self.controller = make_controller(scenario.controller, scenario.models, scenario.nominal)
        config = scenario.controller
        self.layout = StateLayout(
            scenario.num_agents,
            scenario.dof,
            scenario.num_params,
            config.hasCompensator,
            config.hasEstimate,
        )

    def initialState(self, seed: Optional[int] = None) -> NetworkState:
        q0 = self.scenario.q0.copy()
        jitter = self.settings.jitter
        if jitter > 0:
            rng = np.random.default_rng(self.settings.seed if seed is None else seed)
            q0 = q0 + rng.uniform(-jitter, jitter, size=q0.shape)
        control = self.controller.initialState(q0)
        return NetworkState(0.0, q0, self.scenario.qdot0.copy(), control)

    def positions(self, q) -> np.ndarray:
        return np.array([model.forward_kinematics(q[i]) for i, model in enumerate(self.models)])

    def gradients(self, x: np.ndarray) -> np.ndarray:
        "e_hat per agent in the global frame, (N, m)."
        return formation_gradient(self.graph, x).reshape(self.graph.num_agents, self.graph.dimension)

    def commands(self, state: NetworkState, x: Optional[np.ndarray] = None):
        "Torques and internal-state rates of all agents at one state."
        if x is None:
            x = self.positions(state.q)
        N = self.graph.num_agents
        e_hat = self.gradients(x)
        u = np.empty((N, self.layout.n))
        eta_dot = None if self.layout.eta is None else np.empty((N, self.layout.n))
        a_hat_dot = None if self.layout.a_hat is None else np.empty((N, self.layout.p))

        for i in range(N):
            if self.controller.frame == Frame.LOCAL:
                measurements = local_measurements(self.graph, self.models, x, i)
                u_i, eta_i, a_i = local_frame_control(
                    self.controller, self.graph, i, measurements, state.q[i], state.xi[i], state.control
                )
            else:
                u_i, eta_i, a_i = self.controller.command(i, state.q[i], state.xi[i], e_hat[i], state.control)
            u[i] = u_i
            if eta_dot is not None:
                eta_dot[i] = eta_i
            if a_hat_dot is not None:
                a_hat_dot[i] = a_i
        return u, eta_dot, a_hat_dot

    def accelerations(self, state: NetworkState, u: np.ndarray) -> np.ndarray:
        xi_dot = np.empty_like(state.xi)
        for i, model in enumerate(self.models):
            try:
                xi_dot[i] = model.joint_acceleration(state.q[i], state.xi[i], u[i])
            except np.linalg.LinAlgError as e:
                raise SimulationBlowUpError(state.t, i + 1, "singular inertia matrix (%s)" % e)
        return xi_dot

    def rates(self, t: float, y: np.ndarray) -> np.ndarray:
        state = self.layout.unpack(y, t)
        u, eta_dot, a_hat_dot = self.commands(state)
        xi_dot = self.accelerations(state, u)
        dy = self.layout.pack(state.xi, xi_dot, eta_dot, a_hat_dot)
        if not np.all(np.isfinite(dy)):
            raise SimulationBlowUpError(t, self._firstBadAgent(dy), "non-finite derivative")
        return dy

    def _firstBadAgent(self, y: np.ndarray) -> int:
        state = self.layout.unpack(y)
        for i in range(self.graph.num_agents):
            parts = [state.q[i], state.xi[i]]
            parts += [v[i] for v in (state.eta, state.a_hat) if v is not None]
            if not all(np.all(np.isfinite(v)) for v in parts):
                return i + 1
        return 0

    def step(self, state: NetworkState, dt: float) -> NetworkState:
        if not state.isFinite():
            raise SimulationBlowUpError(state.t, self._firstBadAgent(self.layout.packState(state)), "non-finite state")
        y = rk4_step(self.rates, state.t, self.layout.packState(state), dt)
        return self.layout.unpack(y, state.t + dt)

    def sigmas(self, q) -> np.ndarray:
        return np.array([model.singularity_distance(q[i]) for i, model in enumerate(self.models)])

    def sample(self, state: NetworkState) -> dict:
        x = self.positions(state.q)
        u, _, _ = self.commands(state, x)
        return dict(
            t=state.t,
            q=state.q.copy(),
            xi=state.xi.copy(),
            x=x,
            e=edge_errors(self.graph, x),
            e_hat=self.gradients(x),
            u=u,
            eta=None if state.eta is None else state.eta.copy(),
            a_hat=None if state.a_hat is None else state.a_hat.copy(),
            sigma=self.sigmas(state.q),
            centroid=x.mean(axis=0),
        )

    def meta(self) -> dict:
        return dict(
            scenario=self.scenario.name,
            agents=self.graph.num_agents,
            edges=self.graph.num_edges,
            dimension=self.graph.dimension,
            flavor=self.graph.flavor.value,
            dof=self.layout.n,
            params=self.layout.p,
            variant=self.controller.variant.value,
            dt=self.settings.dt,
            stride=self.settings.stride,
            T=self.settings.T,
        )

    def run(self, lyapunov: bool = True) -> SimulationTrace:
        settings = self.settings
        state = self.initialState()
        recorder = TraceRecorder()
        recorder.record(**self.sample(state))

        floor = settings.sigma_floor
        below = self.sigmas(state.q) < floor
        warnings = int(np.sum(below))
        for i in np.flatnonzero(below):
            logger.warning("agent %d starts near a singularity (sigma_min < %g)", i + 1, floor)

        steps = settings.steps
        logger.info("simulating %s for %g s (%d steps)", self.scenario.name or "scenario", settings.T, steps)
        for k in range(1, steps + 1):
            state = self.step(state, settings.dt)
            # exact time stamps, not accumulated sums
            state.t = k * settings.dt
            now_below = self.sigmas(state.q) < floor
            for i in np.flatnonzero(now_below & ~below):
                logger.warning("agent %d: sigma_min(J) below %g at t=%.4f", i + 1, floor, state.t)
                warnings += 1
            below = now_below
            if k % settings.stride == 0:
                recorder.record(**self.sample(state))

        trace = recorder.freeze(self.meta())
        trace.singularity_warnings = warnings
        if lyapunov:
            attach_lyapunov(trace, self.graph, self.models, self.scenario.controller)
        trace.metrics = final_metrics(self, trace, state)
        return trace


def final_metrics(sim: Simulator, trace: SimulationTrace, final: NetworkState) -> dict:
    "Convergence figures at t = T, from the final state whether or not it was recorded."
    x = sim.positions(final.q)
    e = edge_errors(sim.graph, x)
    centroid = x.mean(axis=0)
    max_error = float(np.max(np.abs(e))) if e.size else 0.0
    velocity = float(np.linalg.norm(final.xi))
    settings = sim.settings
    return dict(
        t_final=final.t,
        max_edge_error=max_error,
        velocity_norm=velocity,
        centroid_drift=float(np.linalg.norm(centroid - trace.centroid[0])),
        min_sigma=float(np.min(trace.sigma)),
        singularity_warnings=trace.singularity_warnings,
        converged=bool(max_error <= settings.error_tol and velocity <= settings.velocity_tol),
    )


def step(state: NetworkState, scenario: Scenario, dt: float) -> NetworkState:
    return Simulator(scenario).step(state, dt)


def run(scenario: Scenario) -> SimulationTrace:
    return Simulator(scenario).run()
