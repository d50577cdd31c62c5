from __future__ import annotations

import json
import logging
import math
import os
from typing import Optional

import numpy as np

from backend.control.config import Variant
from backend.scenario import Scenario
from utils.error import CertificateFailure, TraceIOError

from .conditions import Inequality, alpha_interval, check_gain_conditions, choose_epsilon, delta_star, minimal_gains
from .constants import (
    desired_joint_configuration,
    estimate_eta_bounds,
    estimate_excitation,
    estimate_jacobian_bounds,
    estimate_phi_bounds,
    estimate_shape_bounds,
    network_inertia_bounds,
)
from .grid import SampleGrid, build_grid

logger = logging.getLogger(__name__)

# reported as grid extrema, not certified bounds
SAMPLE_BASED = ("c_min", "c_max", "lambda2", "lambda4", "kappa1", "kappa2")


class CertificateConstants:
    NAMES = (
        "c_min", "c_max", "lambda1", "lambda2", "lambda3", "lambda4", "lambda_J", "lambda_J_hat", "delta",
        "beta11", "beta12", "beta13", "beta14", "beta21", "beta22", "beta31", "kappa1", "kappa2",
        "k11", "k12", "k21", "k22", "k31", "k32", "k33", "k41", "k42", "k43",
    )

    def __init__(self, **values: float) -> None:
        for name in self.NAMES:
            setattr(self, name, float(values.pop(name, 0.0)))
        if values:
            raise TypeError("unknown constants %s" % ", ".join(sorted(values)))

    def asDict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.NAMES}


def estimate_constants(scenario: Scenario, grid: SampleGrid, q_star: Optional[np.ndarray] = None) -> CertificateConstants:
    graph, models = scenario.graph, scenario.models
    c_min, c_max = network_inertia_bounds(models, grid)
    lambda_J, lambda_J_hat, delta = estimate_jacobian_bounds(models, grid)
    lambda1, lambda3, _ = estimate_shape_bounds(graph, grid)
    lambda2, lambda4 = estimate_excitation(graph, models, grid)
    phi = estimate_phi_bounds(graph, models, grid)
    if q_star is None:
        q_star = desired_joint_configuration(scenario)
    eta = estimate_eta_bounds(graph, models, grid, scenario.controller.gains.K_I, q_star, c_max, phi)
    return CertificateConstants(
        c_min=c_min,
        c_max=c_max,
        lambda1=lambda1,
        lambda2=lambda2,
        lambda3=lambda3,
        lambda4=lambda4,
        lambda_J=lambda_J,
        lambda_J_hat=lambda_J_hat,
        delta=delta,
        beta11=phi.beta11,
        beta12=phi.beta12,
        beta13=phi.beta13,
        beta14=phi.beta14,
        beta21=eta.beta21,
        beta22=eta.beta22,
        beta31=eta.beta31,
        kappa1=eta.kappa1,
        kappa2=eta.kappa2,
        k11=phi.k11,
        k12=phi.k12,
        k21=eta.k21,
        k22=eta.k22,
        k31=eta.k31,
        k32=eta.k32,
        k33=eta.k33,
        k41=eta.k41,
        k42=eta.k42,
        k43=eta.k43,
    )


class CertificateReport:
    def __init__(
        self,
        scenario: str,
        variant: Variant,
        samples: int,
        constants: CertificateConstants,
        inequalities: list[Inequality],
        minimal: dict[str, tuple[float, float]],
        alpha: tuple[float, float],
        epsilon: float,
        delta_star: float,
    ) -> None:
        self.scenario = scenario
        self.variant = variant
        self.samples = samples
        self.constants = constants
        self.inequalities = inequalities
        self.minimal = minimal
        self.alpha = alpha
        self.epsilon = epsilon
        self.delta_star = delta_star

    @property
    def passed(self) -> bool:
        return all(inequality.holds for inequality in self.inequalities)

    @property
    def failed(self) -> list[str]:
        return [inequality.name for inequality in self.inequalities if not inequality.holds]

    def asDict(self) -> dict:
        return {
            "scenario": self.scenario,
            "variant": self.variant.value,
            "samples": self.samples,
            "constants": self.constants.asDict(),
            "sample_based": list(SAMPLE_BASED),
            "alpha_interval": list(self.alpha),
            "epsilon": self.epsilon,
            "delta": self.constants.delta,
            "delta_star": _finite(self.delta_star),
            "minimal_gains": {
                name: {"K_P": _finite(kp), "K_D": _finite(kd)} for name, (kp, kd) in self.minimal.items()
            },
            "inequalities": [inequality.asDict() for inequality in self.inequalities],
            "passed": self.passed,
        }

    def __str__(self) -> str:
        c = self.constants
        lines = ["certificate for %s (%s law, %d samples)" % (self.scenario or "scenario", self.variant.value, self.samples)]
        lines.append("")
        for name in CertificateConstants.NAMES:
            flag = "  (sample-based)" if name in SAMPLE_BASED else ""
            lines.append("  %-13s %.6g%s" % (name, getattr(c, name), flag))
        lines.append("")
        lines.append("  alpha in (%.6g, %.6g)" % self.alpha)
        lines.append("  epsilon       %.6g" % self.epsilon)
        lines.append("  delta         %.6g   delta* %.6g" % (c.delta, self.delta_star))
        for name, (kp, kd) in self.minimal.items():
            lines.append("  %-9s K_P >= %.6g, K_D >= %.6g" % (name, kp, kd))
        lines.append("")
        lines.extend("  " + str(inequality) for inequality in self.inequalities)
        lines.append("")
        lines.append("PASSED" if self.passed else "FAILED: " + ", ".join(self.failed))
        return "\n".join(lines)


def _finite(value: float) -> Optional[float]:
    return None if math.isinf(value) or math.isnan(value) else value


def certify(scenario: Scenario, grid: Optional[SampleGrid] = None) -> CertificateReport:
    "Estimates the constants on the scenario's grid and checks its gains."
    if grid is None:
        grid = build_grid(scenario)
    logger.info("estimating certificate constants on %s", grid)
    constants = estimate_constants(scenario, grid)
    config = scenario.controller
    gains = config.gains

    epsilon = config.epsilon
    if epsilon is None:
        epsilon = choose_epsilon(constants, gains.alpha)
    minimal = {
        variant.value: minimal_gains(constants, variant, gains.alpha, gains.K_P, epsilon)
        for variant in (Variant.EXACT, Variant.APPROX, Variant.ADAPTIVE)
    }
    inequalities = check_gain_conditions(constants, gains, config.variant, epsilon)
    logger.warning(
        "%s are grid extrema over %d samples, not certified bounds", ", ".join(SAMPLE_BASED), len(grid)
    )
    return CertificateReport(
        scenario.name,
        config.variant,
        len(grid),
        constants,
        inequalities,
        minimal,
        alpha_interval(constants),
        epsilon,
        delta_star(constants),
    )


def write_report(report: CertificateReport, path: str) -> list[str]:
    """
    Writes the text report to `path` and the machine-readable form next to
    it (same stem, .json). Returns the written paths.
    """
    stem, ext = os.path.splitext(path)
    json_path = stem + ".json" if ext != ".json" else stem + ".report.json"
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w") as f:
            f.write(str(report) + "\n")
        with open(json_path, "w") as f:
            json.dump(report.asDict(), f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise TraceIOError(e.filename or path, e.strerror or str(e))
    return [path, json_path]


def raise_on_failure(report: CertificateReport) -> None:
    if not report.passed:
        raise CertificateFailure(report.failed)
