"""
Controller configuration and the per-agent internal controller state.
"""

from __future__ import annotations

from enum import Enum, unique
from typing import Optional

import numpy as np

from backend.models.manipulator import Frame
from utils.error import ConfigurationError


@unique
class Variant(Enum):
    EXACT = "exact"
    APPROX = "approx"
    ADAPTIVE = "adaptive"
    NAIVE = "naive"
    PASSIVE = "passive"

    @property
    def usesEstimate(self) -> bool:
        "Whether the law evaluates J at â instead of the true kinematic parameters."
        return self in (Variant.APPROX, Variant.ADAPTIVE, Variant.NAIVE)


@unique
class EtaInit(Enum):
    ZERO = "zero"
    NOMINAL_GRAVITY = "nominal_gravity"


class Gains:
    def __init__(self, K_P: float, K_D: float, K_I: float = 0.0, alpha: float = 0.02) -> None:
        self.K_P = float(K_P)
        self.K_D = float(K_D)
        self.K_I = float(K_I)
        self.alpha = float(alpha)

    @property
    def Lambda(self) -> float:
        "K_D^-1 K_P, the output gain of the PID form."
        return self.K_P / self.K_D

    def __str__(self) -> str:
        return "K_P=%g K_D=%g K_I=%g alpha=%g" % (self.K_P, self.K_D, self.K_I, self.alpha)


class ControllerConfig:
    def __init__(
        self,
        variant: Variant,
        gains: Gains,
        a_hat0: Optional[np.ndarray] = None,
        eta0: EtaInit = EtaInit.ZERO,
        frame: Frame = Frame.GLOBAL,
        epsilon: Optional[float] = None,
    ) -> None:
        self.variant = Variant(variant)
        self.gains = gains
        self.a_hat0 = None if a_hat0 is None else np.asarray(a_hat0, dtype=float)
        self.eta0 = EtaInit(eta0)
        self.frame = Frame(frame)
        self.epsilon = epsilon
        self.validate()

    def validate(self) -> None:
        g = self.gains
        if self.variant != Variant.PASSIVE:
            if not g.K_P > 0:
                raise ConfigurationError("K_P must be positive for the %s law" % self.variant.value)
            if not g.K_D > 0:
                raise ConfigurationError("K_D must be positive for the %s law" % self.variant.value)
        if g.K_I < 0:
            raise ConfigurationError("K_I must be nonnegative")
        if self.variant == Variant.ADAPTIVE and not g.alpha > 0:
            raise ConfigurationError("alpha must be positive for the adaptive law")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigurationError("epsilon must be positive")
        # approx and naive fall back to the true parameters (delta = 0)
        if self.variant == Variant.ADAPTIVE and self.a_hat0 is None:
            raise ConfigurationError("the adaptive law needs initial estimates a_hat0")

    @property
    def hasCompensator(self) -> bool:
        "eta is integrated only by the approximate and adaptive laws, and only when K_I > 0."
        return self.variant in (Variant.APPROX, Variant.ADAPTIVE) and self.gains.K_I > 0

    @property
    def hasEstimate(self) -> bool:
        return self.variant == Variant.ADAPTIVE

    def __str__(self) -> str:
        return "%s(%s, frame=%s)" % (self.variant.value, self.gains, self.frame.value)


class ControllerState:
    """
    eta: (N, n) compensator states, or None when the law has no compensator.
    a_hat: (N, p) kinematic estimates, or None unless the law is adaptive.
    """

    def __init__(self, eta: Optional[np.ndarray] = None, a_hat: Optional[np.ndarray] = None) -> None:
        self.eta = None if eta is None else np.asarray(eta, dtype=float)
        self.a_hat = None if a_hat is None else np.asarray(a_hat, dtype=float)

    def agentEta(self, i: int) -> Optional[np.ndarray]:
        return None if self.eta is None else self.eta[i]

    def agentEstimate(self, i: int) -> Optional[np.ndarray]:
        return None if self.a_hat is None else self.a_hat[i]

    def copy(self) -> ControllerState:
        return ControllerState(
            None if self.eta is None else self.eta.copy(),
            None if self.a_hat is None else self.a_hat.copy(),
        )
