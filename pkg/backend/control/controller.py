"""
Controller: one strategy per law, evaluated agent by agent.

`command` returns (u_i, eta_dot_i, a_hat_dot_i); the rates are None when the
law carries no such state.
"""

from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np

from backend.models.manipulator import Frame, ManipulatorModel

from .config import ControllerConfig, ControllerState, EtaInit, Variant
from .laws import control_adaptive, control_approx, control_exact, control_naive, control_passive

Command = tuple[np.ndarray, Optional[np.ndarray], Optional[np.ndarray]]


class Controller(ABC):
    def __init__(
        self,
        config: ControllerConfig,
        models: Sequence[ManipulatorModel],
        nominal: Optional[Sequence[ManipulatorModel]] = None,
    ) -> None:
        self.config = config
        self.gains = config.gains
        self.models = list(models)
        # dynamic parameters the controller believes in; the true ones when not given
        self.nominal = list(models if nominal is None else nominal)

    @property
    def variant(self) -> Variant:
        return self.config.variant

    @property
    def frame(self) -> Frame:
        return self.config.frame

    @abstractmethod
    def command(self, i: int, q, xi, e_hat, state: ControllerState) -> Command:
        raise NotImplementedError

    # To pick the kinematic parameters the law evaluates J at.
    def usedParams(self, i: int, state: ControllerState) -> np.ndarray:
        if state.a_hat is not None:
            return state.a_hat[i]
        if self.variant.usesEstimate and self.config.a_hat0 is not None:
            return self.config.a_hat0[i]
        return self.models[i].kinematic_params

    def initialState(self, q0: Sequence[np.ndarray]) -> ControllerState:
        eta = None
        if self.config.hasCompensator:
            eta = np.zeros((len(self.models), self.models[0].dof))
            if self.config.eta0 == EtaInit.NOMINAL_GRAVITY:
                eta = np.array(
                    [self.gravityModel(i).gravity(q) / self.gains.K_I for i, q in enumerate(q0)]
                )
        a_hat = self.config.a_hat0.copy() if self.config.hasEstimate else None
        return ControllerState(eta, a_hat)

    def gravityModel(self, i: int) -> ManipulatorModel:
        return self.nominal[i]

    def __str__(self) -> str:
        return "%s(%s)" % (type(self).__name__, self.config)


class ExactController(Controller):
    def command(self, i, q, xi, e_hat, state) -> Command:
        return control_exact(self.models[i], q, xi, e_hat, self.gains, self.frame), None, None


class ApproxController(Controller):
    def command(self, i, q, xi, e_hat, state) -> Command:
        u, eta_dot = control_approx(
            self.models[i],
            q,
            xi,
            e_hat,
            state.agentEta(i),
            self.gains,
            self.usedParams(i, state),
            self.frame,
        )
        return u, eta_dot, None


class AdaptiveController(Controller):
    def command(self, i, q, xi, e_hat, state) -> Command:
        return control_adaptive(
            self.models[i],
            q,
            xi,
            e_hat,
            state.agentEta(i),
            state.a_hat[i],
            self.gains,
            self.frame,
        )


class NaiveController(Controller):
    def command(self, i, q, xi, e_hat, state) -> Command:
        u = control_naive(
            self.models[i],
            self.nominal[i],
            q,
            xi,
            e_hat,
            self.gains,
            self.usedParams(i, state),
            self.frame,
        )
        return u, None, None


class PassiveController(Controller):
    def command(self, i, q, xi, e_hat, state) -> Command:
        return control_passive(self.models[i], q), None, None


def make_controller(
    config: ControllerConfig,
    models: Sequence[ManipulatorModel],
    nominal: Optional[Sequence[ManipulatorModel]] = None,
) -> Controller:
    kinds = {
        Variant.EXACT: ExactController,
        Variant.APPROX: ApproxController,
        Variant.ADAPTIVE: AdaptiveController,
        Variant.NAIVE: NaiveController,
        Variant.PASSIVE: PassiveController,
    }
    return kinds[config.variant](config, models, nominal)
