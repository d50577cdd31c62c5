from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from backend.certify.lyapunov import descent_violations
from backend.control.config import Variant
from backend.control.pid import pid_equivalent_form
from backend.scenario import Scenario
from utils.error import UsageError

from .trace import SimulationTrace

logger = logging.getLogger(__name__)

# the function each law is proven to decrease
LYAPUNOV_OF = {
    Variant.EXACT: "U1",
    Variant.APPROX: "U2",
    Variant.ADAPTIVE: "U3",
}


class DiagnosticsReport:
    def __init__(self) -> None:
        self.tail_edge_errors: np.ndarray = np.zeros(0)
        self.tail_max_error = 0.0
        self.tail_max_velocity = 0.0
        self.lyapunov_signal: Optional[str] = None
        self.lyapunov_violations = 0
        self.lyapunov_max_rise = 0.0
        self.min_sigma = np.inf
        self.singularity_warnings = 0
        self.centroid_drift = 0.0
        self.pid_discrepancy: Optional[float] = None
        self.converged = False

    def asDict(self) -> dict:
        return {
            "tail_edge_errors": self.tail_edge_errors.tolist(),
            "tail_max_error": self.tail_max_error,
            "tail_max_velocity": self.tail_max_velocity,
            "lyapunov_signal": self.lyapunov_signal,
            "lyapunov_violations": self.lyapunov_violations,
            "lyapunov_max_rise": self.lyapunov_max_rise,
            "min_sigma": self.min_sigma,
            "singularity_warnings": self.singularity_warnings,
            "centroid_drift": self.centroid_drift,
            "pid_discrepancy": self.pid_discrepancy,
            "converged": self.converged,
        }

    def __str__(self) -> str:
        lines = [
            "tail max |e_k|      %.6g" % self.tail_max_error,
            "tail max |xi|       %.6g" % self.tail_max_velocity,
            "min sigma_min(J)    %.6g" % self.min_sigma,
            "singularity events  %d" % self.singularity_warnings,
            "centroid drift      %.6g" % self.centroid_drift,
        ]
        if self.lyapunov_signal is not None:
            lines.append(
                "%s rises           %d (largest %.3g)"
                % (self.lyapunov_signal, self.lyapunov_violations, self.lyapunov_max_rise)
            )
        if self.pid_discrepancy is not None:
            lines.append("PID form mismatch   %.3g" % self.pid_discrepancy)
        lines.append("converged           %s" % ("yes" if self.converged else "no"))
        return "\n".join(lines)


def pid_discrepancy(trace: SimulationTrace, scenario: Scenario) -> float:
    """
    Largest difference between the recorded torques and the PID form
    evaluated on the same trajectory. Only meaningful for the laws that carry
    a compensator; the quadrature error shrinks with the recording stride.
    """
    config = scenario.controller
    if not config.hasCompensator:
        raise UsageError("the PID form needs a law with an integral compensator")
    worst = 0.0
    for i, model in enumerate(scenario.models):
        a_hat = None
        if trace.a_hat is not None:
            a_hat = trace.a_hat[:, i]
        elif config.a_hat0 is not None:
            a_hat = config.a_hat0[i]
        u = pid_equivalent_form(
            model,
            trace.t,
            trace.q[:, i],
            trace.xi[:, i],
            trace.e_hat[:, i],
            config.gains,
            a_hat,
            trace.eta[0, i],
        )
        worst = max(worst, float(np.max(np.abs(u - trace.u[:, i]))))
    return worst


def diagnostics(trace: SimulationTrace, scenario: Scenario, pid: bool = False) -> DiagnosticsReport:
    if len(trace) == 0:
        raise UsageError("diagnostics need a non-empty trace")
    settings = scenario.simulation
    report = DiagnosticsReport()

    window = trace.tail(settings.tail)
    e = np.abs(trace.e[window])
    if e.ndim == 3:
        # displacement edges: sup of the vector norm
        e = np.linalg.norm(trace.e[window], axis=2)
    report.tail_edge_errors = e.max(axis=0) if e.size else np.zeros(0)
    report.tail_max_error = float(report.tail_edge_errors.max()) if report.tail_edge_errors.size else 0.0
    velocity = np.linalg.norm(trace.xi[window].reshape(e.shape[0], -1), axis=1)
    report.tail_max_velocity = float(velocity.max())

    report.lyapunov_signal = LYAPUNOV_OF.get(scenario.controller.variant)
    values = getattr(trace, report.lyapunov_signal) if report.lyapunov_signal else None
    if values is not None:
        report.lyapunov_violations = descent_violations(values, settings.lyapunov_tol)
        if len(values) > 1:
            report.lyapunov_max_rise = max(0.0, float(np.max(np.diff(values))))

    report.min_sigma = float(np.min(trace.sigma))
    report.singularity_warnings = trace.singularity_warnings
    report.centroid_drift = float(np.linalg.norm(trace.centroid[-1] - trace.centroid[0]))
    if pid:
        report.pid_discrepancy = pid_discrepancy(trace, scenario)

    report.converged = bool(
        report.tail_max_error <= settings.error_tol and report.tail_max_velocity <= settings.velocity_tol
    )
    if report.lyapunov_violations:
        logger.warning(
            "%s rose %d times beyond %g along the trace",
            report.lyapunov_signal,
            report.lyapunov_violations,
            settings.lyapunov_tol,
        )
    return report
