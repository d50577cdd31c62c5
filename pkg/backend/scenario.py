"""
Scenario: the validated, numeric form of a scenario file. Everything the
simulator, the certificate and the property suites need, and nothing of the
surface syntax.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from backend.control.config import ControllerConfig
from backend.formation.graph import FormationGraph
from backend.models.manipulator import ManipulatorModel
from utils.error import ConfigurationError


class SimulationConfig:
    def __init__(
        self,
        T: float = 30.0,
        dt: float = 1e-3,
        stride: int = 10,
        error_tol: float = 1e-2,
        velocity_tol: float = 1e-2,
        sigma_floor: float = 1e-3,
        tail: float = 0.1,
        lyapunov_tol: float = 1e-6,
        jitter: float = 0.0,
        seed: int = 0,
    ) -> None:
        self.T = float(T)
        self.dt = float(dt)
        self.stride = int(stride)
        self.error_tol = float(error_tol)
        self.velocity_tol = float(velocity_tol)
        self.sigma_floor = float(sigma_floor)
        self.tail = float(tail)
        self.lyapunov_tol = float(lyapunov_tol)
        self.jitter = float(jitter)
        self.seed = int(seed)
        self.validate()

    def validate(self) -> None:
        if self.T < 0:
            raise ConfigurationError("simulation time T must be nonnegative")
        if not self.dt > 0:
            raise ConfigurationError("step size dt must be positive")
        if self.stride < 1:
            raise ConfigurationError("recording stride must be at least 1")
        if not 0 < self.tail <= 1:
            raise ConfigurationError("tail must be a fraction in (0, 1]")
        if self.jitter < 0:
            raise ConfigurationError("jitter must be nonnegative")

    @property
    def steps(self) -> int:
        return int(round(self.T / self.dt))

    def replace(self, **changes) -> SimulationConfig:
        return SimulationConfig(**{**vars(self), **changes})


class CertificateConfig:
    """
    q_boxes: (N, n, 2) joint intervals per agent, or None for boxes of
    half-width q_halfwidth around the initial joint positions.
    """

    def __init__(
        self,
        q_boxes: Optional[np.ndarray] = None,
        q_step: float = math.pi / 6,
        q_halfwidth: float = math.pi / 6,
        position_step: float = 0.5,
        position_range: float = 1.0,
        r1: float = 16.0,
        xi_step: float = 0.5,
        r2: float = 1.0,
        a_min: float = 1.5,
        a_max: float = 2.5,
        a_step: float = 0.2,
        samples: int = 2000,
        seed: int = 0,
    ) -> None:
        self.q_boxes = None if q_boxes is None else np.asarray(q_boxes, dtype=float)
        self.q_step = float(q_step)
        self.q_halfwidth = float(q_halfwidth)
        self.position_step = float(position_step)
        self.position_range = float(position_range)
        self.r1 = float(r1)
        self.xi_step = float(xi_step)
        self.r2 = float(r2)
        self.a_min = float(a_min)
        self.a_max = float(a_max)
        self.a_step = float(a_step)
        self.samples = int(samples)
        self.seed = int(seed)
        self.validate()

    def validate(self) -> None:
        for name in ("q_step", "position_step", "xi_step", "a_step", "r1", "r2"):
            if not getattr(self, name) > 0:
                raise ConfigurationError("certificate %s must be positive" % name)
        if self.q_halfwidth < 0 or self.position_range < 0:
            raise ConfigurationError("certificate ranges must be nonnegative")
        if self.a_min > self.a_max:
            raise ConfigurationError("certificate a_min exceeds a_max")
        if self.samples < 1:
            raise ConfigurationError("certificate needs at least one sample")
        if self.q_boxes is not None:
            if self.q_boxes.ndim != 3 or self.q_boxes.shape[2] != 2:
                raise ConfigurationError("q_boxes must be a list of per-agent [lo, hi] joint intervals")
            if np.any(self.q_boxes[:, :, 0] > self.q_boxes[:, :, 1]):
                raise ConfigurationError("q_boxes has an interval with lo > hi")

    def replace(self, **changes) -> CertificateConfig:
        return CertificateConfig(**{**vars(self), **changes})


class Scenario:
    def __init__(
        self,
        graph: FormationGraph,
        models: Sequence[ManipulatorModel],
        q0,
        qdot0,
        controller: ControllerConfig,
        simulation: SimulationConfig,
        certificate: CertificateConfig,
        nominal: Optional[Sequence[ManipulatorModel]] = None,
        kind: str = "planar2",
        name: str = "",
    ) -> None:
        self.graph = graph
        self.models = list(models)
        self.q0 = np.asarray(q0, dtype=float)
        self.qdot0 = np.asarray(qdot0, dtype=float)
        self.controller = controller
        self.simulation = simulation
        self.certificate = certificate
        self.nominal = None if nominal is None else list(nominal)
        self.kind = kind
        self.name = name
        self.validate()

    def validate(self) -> None:
        N, m = self.graph.num_agents, self.graph.dimension
        if len(self.models) != N:
            raise ConfigurationError("%d agent models for %d agents" % (len(self.models), N))
        n = self.models[0].dof
        for i, model in enumerate(self.models, start=1):
            if model.task_dim != m:
                raise ConfigurationError(
                    "agent %d works in %dD but the formation is %dD" % (i, model.task_dim, m)
                )
            if model.dof != n:
                raise ConfigurationError("agent %d has %d joints, agent 1 has %d" % (i, model.dof, n))
        if self.q0.shape != (N, n) or self.qdot0.shape != (N, n):
            raise ConfigurationError("initial joint states must have shape (%d, %d)" % (N, n))
        p = self.models[0].num_params
        a_hat0 = self.controller.a_hat0
        if a_hat0 is not None and a_hat0.shape != (N, p):
            raise ConfigurationError("a_hat0 must hold %d estimates per agent" % p)
        if self.nominal is not None and len(self.nominal) != N:
            raise ConfigurationError("%d nominal models for %d agents" % (len(self.nominal), N))
        boxes = self.certificate.q_boxes
        if boxes is not None and boxes.shape[:2] != (N, n):
            raise ConfigurationError("q_boxes must hold %d intervals for each of %d agents" % (n, N))

    @property
    def num_agents(self) -> int:
        return self.graph.num_agents

    @property
    def dimension(self) -> int:
        return self.graph.dimension

    @property
    def dof(self) -> int:
        return self.models[0].dof

    @property
    def num_params(self) -> int:
        return self.models[0].num_params

    def with_simulation(self, **changes) -> Scenario:
        "A copy with some simulation settings replaced (the CLI overrides)."
        return Scenario(
            self.graph,
            self.models,
            self.q0,
            self.qdot0,
            self.controller,
            self.simulation.replace(**changes),
            self.certificate,
            self.nominal,
            self.kind,
            self.name,
        )

    def with_controller(self, controller: ControllerConfig) -> Scenario:
        return Scenario(
            self.graph,
            self.models,
            self.q0,
            self.qdot0,
            controller,
            self.simulation,
            self.certificate,
            self.nominal,
            self.kind,
            self.name,
        )

    def __str__(self) -> str:
        return "scenario %s: %s, %d x %s, controller %s" % (
            self.name or "<unnamed>",
            self.graph,
            self.num_agents,
            self.kind,
            self.controller,
        )
