"""
The gain inequalities of the three stability results, evaluated as margins
(left side minus right side). A margin is reported as computed: a failing
inequality is a result, not an error.

    positivity       K_D - 2 c_max lambda1 lambda_J > 0
    exact law        lambda2 K_P - k11 > 1,  K_D - alpha k12 > 1
    approx law       1/2 eps^-1 - k31 - alpha k41 > 1,  delta < delta*,
                     K_P (alpha lambda4 - 4 alpha lambda_J_hat lambda3 delta)
                        - eps^-1 k21 - k32 - alpha k42 > 1,
                     K_D - eps^-1 k22 - k33 - alpha k43 - K_P lambda3 delta > 1
    adaptive law     1/2 eps^-1 - k31 - alpha k41 > 0,
                     alpha lambda4 K_P - eps^-1 k21 - k32 - alpha k42 > 1,
                     K_D - eps^-1 k22 - k33 - alpha k43 > 1
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Optional

from backend.control.config import Gains, Variant

if TYPE_CHECKING:
    from .report import CertificateConstants

EPSILON_SAFETY = 1.1


class Inequality:
    def __init__(self, name: str, margin: float, strict_bound: float = 0.0) -> None:
        self.name = name
        self.margin = float(margin)
        self.strict_bound = strict_bound

    @property
    def holds(self) -> bool:
        return self.margin > self.strict_bound

    def asDict(self) -> dict:
        return {"name": self.name, "margin": self.margin, "bound": self.strict_bound, "holds": self.holds}

    def __str__(self) -> str:
        return "%-22s margin %+.6g (> %g)  %s" % (
            self.name,
            self.margin,
            self.strict_bound,
            "ok" if self.holds else "FAILED",
        )


def alpha_interval(c: CertificateConstants) -> tuple[float, float]:
    "Admissible open interval (0, c_min / c_max) for alpha."
    return 0.0, c.c_min / c.c_max


def choose_epsilon(c: CertificateConstants, alpha: float) -> float:
    "The largest eps with 1/2 eps^-1 - k31 - alpha k41 > 1, shrunk by a safety factor."
    return 1.0 / (EPSILON_SAFETY * 2.0 * (1.0 + c.k31 + alpha * c.k41))


def delta_star(c: CertificateConstants) -> float:
    denominator = 4.0 * c.lambda_J_hat * c.lambda3
    return math.inf if denominator == 0 else c.lambda4 / denominator


def check_gain_conditions(
    c: CertificateConstants,
    gains: Gains,
    variant: Variant,
    epsilon: Optional[float] = None,
) -> list[Inequality]:
    alpha, K_P, K_D = gains.alpha, gains.K_P, gains.K_D
    lo, hi = alpha_interval(c)
    result = [
        Inequality("alpha < c_min/c_max", hi - alpha),
        Inequality("alpha > 0", alpha - lo),
        Inequality("U1 positivity", K_D - 2.0 * c.c_max * c.lambda1 * c.lambda_J),
    ]

    if variant == Variant.EXACT:
        result.append(Inequality("exact: e decay", c.lambda2 * K_P - c.k11, 1.0))
        result.append(Inequality("exact: xi decay", K_D - alpha * c.k12, 1.0))
        return result

    if variant not in (Variant.APPROX, Variant.ADAPTIVE):
        return result

    eps = choose_epsilon(c, alpha) if epsilon is None else epsilon
    eta_margin = 0.5 / eps - c.k31 - alpha * c.k41
    k_e = c.k21 / eps + c.k32 + alpha * c.k42
    k_xi = c.k22 / eps + c.k33 + alpha * c.k43

    if variant == Variant.APPROX:
        delta = c.delta
        result.append(Inequality("approx: eta decay", eta_margin, 1.0))
        result.append(Inequality("approx: delta < delta*", delta_star(c) - delta))
        slope = alpha * c.lambda4 - 4.0 * alpha * c.lambda_J_hat * c.lambda3 * delta
        result.append(Inequality("approx: e decay", K_P * slope - k_e, 1.0))
        result.append(Inequality("approx: xi decay", K_D - k_xi - K_P * c.lambda3 * delta, 1.0))
    else:
        result.append(Inequality("adaptive: eta decay", eta_margin))
        result.append(Inequality("adaptive: e decay", alpha * c.lambda4 * K_P - k_e, 1.0))
        result.append(Inequality("adaptive: xi decay", K_D - k_xi, 1.0))
    return result


def minimal_gains(
    c: CertificateConstants,
    variant: Variant,
    alpha: float,
    K_P: Optional[float] = None,
    epsilon: Optional[float] = None,
) -> tuple[float, float]:
    """
    (K_P_min, K_D_min) for a law; K_D_min of the approximate law depends on
    K_P and is taken at the given K_P (K_P_min when None). inf when no gain
    satisfies the conditions.
    """
    positivity = 2.0 * c.c_max * c.lambda1 * c.lambda_J

    if variant == Variant.EXACT:
        K_P_min = math.inf if c.lambda2 <= 0 else (c.k11 + 1.0) / c.lambda2
        return K_P_min, max(alpha * c.k12 + 1.0, positivity)

    eps = choose_epsilon(c, alpha) if epsilon is None else epsilon
    k_e = c.k21 / eps + c.k32 + alpha * c.k42
    k_xi = c.k22 / eps + c.k33 + alpha * c.k43

    if variant == Variant.APPROX:
        slope = alpha * (c.lambda4 - 4.0 * c.lambda_J_hat * c.lambda3 * c.delta)
        if slope <= 0:
            return math.inf, math.inf
        K_P_min = (k_e + 1.0) / slope
        K_P_used = K_P_min if K_P is None else K_P
        return K_P_min, max(k_xi + K_P_used * c.lambda3 * c.delta + 1.0, positivity)

    if variant == Variant.ADAPTIVE:
        slope = alpha * c.lambda4
        K_P_min = math.inf if slope <= 0 else (k_e + 1.0) / slope
        return K_P_min, max(k_xi + 1.0, positivity)

    return math.nan, math.nan
