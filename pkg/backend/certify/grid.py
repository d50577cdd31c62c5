"""
SampleGrid: the points the certificate constants are maximized or minimized
over. Every coordinate lives on a lattice:

    x  = x* + position_step * k,  |offset| <= position_range,  |e|^2 <= r1
    q  : per-agent joint boxes, step q_step, sigma_min(J) > floor
    xi : step xi_step,  |xi|^2 <= r2, drawn entry by entry inside the ball
    a_hat : [a_min, a_max] step a_step (adaptive law), the nominal values otherwise

Points are drawn one lattice point at a time from a seeded generator, so the
first k samples of a larger grid are exactly a grid of k samples.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from backend.control.config import Variant
from backend.formation.graph import edge_errors
from backend.formation.rigidity import realize_shape
from backend.scenario import Scenario
from utils.error import UsageError

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 50


def lattice(lo: float, hi: float, step: float) -> np.ndarray:
    "lo, lo + step, ... up to hi (inclusive within rounding)."
    if hi < lo:
        raise UsageError("empty lattice [%g, %g]" % (lo, hi))
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def symmetric_lattice(half: float, step: float) -> np.ndarray:
    k = int(math.floor(half / step + 1e-9))
    return step * np.arange(-k, k + 1)


class SampleGrid:
    """
    x: (S, N, m) end-effector positions, q: (S, N, n), xi: (S, N, n),
    a_hat: (S, N, p), all sampled jointly; x_star: (N, m).
    """

    def __init__(self, x_star, x, q, xi, a_hat) -> None:
        self.x_star = np.asarray(x_star, dtype=float)
        self.x = np.asarray(x, dtype=float)
        self.q = np.asarray(q, dtype=float)
        self.xi = np.asarray(xi, dtype=float)
        self.a_hat = np.asarray(a_hat, dtype=float)
        if len(self.x) == 0:
            raise UsageError("the certificate grid has no admissible sample")

    def __len__(self) -> int:
        return len(self.x)

    def head(self, count: int) -> SampleGrid:
        "The first `count` samples; a coarser grid nested in this one."
        count = max(1, min(count, len(self)))
        return SampleGrid(self.x_star, self.x[:count], self.q[:count], self.xi[:count], self.a_hat[:count])

    def __str__(self) -> str:
        return "grid(%d samples, N=%d)" % (len(self), self.x.shape[1])


def joint_boxes(scenario: Scenario) -> np.ndarray:
    "(N, n, 2) intervals; q0 +- q_halfwidth when the scenario gives none."
    cert = scenario.certificate
    if cert.q_boxes is not None:
        return cert.q_boxes
    h = cert.q_halfwidth
    return np.stack([scenario.q0 - h, scenario.q0 + h], axis=-1)


def nominal_estimates(scenario: Scenario) -> np.ndarray:
    config = scenario.controller
    if config.variant in (Variant.APPROX, Variant.NAIVE) and config.a_hat0 is not None:
        return config.a_hat0
    return np.array([model.kinematic_params for model in scenario.models])


def build_grid(scenario: Scenario, samples: Optional[int] = None, seed: Optional[int] = None) -> SampleGrid:
    cert = scenario.certificate
    samples = cert.samples if samples is None else samples
    rng = np.random.default_rng(cert.seed if seed is None else seed)
    graph, models = scenario.graph, scenario.models
    N, m, n, p = scenario.num_agents, scenario.dimension, scenario.dof, scenario.num_params
    floor = scenario.simulation.sigma_floor

    x_star = realize_shape(graph, seed=cert.seed)
    offsets = symmetric_lattice(cert.position_range, cert.position_step)
    q_axes = [[lattice(lo, hi, cert.q_step) for lo, hi in box] for box in joint_boxes(scenario)]
    xi_axis = symmetric_lattice(math.sqrt(cert.r2), cert.xi_step)
    adaptive = scenario.controller.variant == Variant.ADAPTIVE
    a_axis = lattice(cert.a_min, cert.a_max, cert.a_step)
    a_fixed = nominal_estimates(scenario)

    def draw(axis: np.ndarray, shape) -> np.ndarray:
        return axis[rng.integers(0, axis.size, size=shape)]

    def draw_in_ball(axis: np.ndarray, shape, radius_sq: float) -> np.ndarray:
        # entry by entry in random order, each from the values the remaining budget allows
        values = np.zeros(int(np.prod(shape)))
        budget = radius_sq
        for j in rng.permutation(values.size):
            allowed = axis[axis * axis <= budget + 1e-12]
            values[j] = allowed[rng.integers(0, allowed.size)]
            budget -= values[j] ** 2
        return values.reshape(shape)

    xs, qs, xis, a_hats = [], [], [], []
    rejected = 0
    while len(xs) < samples and rejected < MAX_REJECTIONS * samples:
        x = x_star + draw(offsets, (N, m))
        e = edge_errors(graph, x)
        if np.sum(e * e) > cert.r1:
            rejected += 1
            continue
        q = np.array([[axis[rng.integers(0, axis.size)] for axis in agent] for agent in q_axes])
        if any(model.singularity_distance(q[i]) <= floor for i, model in enumerate(models)):
            rejected += 1
            continue
        xi = draw_in_ball(xi_axis, (N, n), cert.r2)
        a_hat = draw(a_axis, (N, p)) if adaptive else a_fixed
        xs.append(x)
        qs.append(q)
        xis.append(xi)
        a_hats.append(a_hat)

    if len(xs) < samples:
        logger.warning("certificate grid: only %d of %d samples admissible", len(xs), samples)
    logger.debug("certificate grid: %d samples, %d rejected", len(xs), rejected)
    return SampleGrid(x_star, xs, qs, xis, a_hats)
