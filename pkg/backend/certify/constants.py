"""
Sample-based estimates of the constants in the stability analysis.

All of them are extrema over a SampleGrid, hence under-approximations of the
true suprema (or over-approximations of infima). Matrices are network-wide:
J, H, C are block diagonal over agents, Bbar = B kron I_m, D = D(z).

    phi1 = e_hat_dot^T J H xi + e_hat^T J_dot H xi + e_hat^T J C^T xi
         = c e^T f11 xi + c^2 xi^T f12 xi + c e^T f13 xi + c e^T f14 xi

    f11 = D(Bbar^T J xi)^T Bbar^T J H     (distance flavor only)
    f12 = J^T Bbar D D^T Bbar^T J H
    f13 = D^T Bbar^T J_dot H
    f14 = D^T Bbar^T J C^T

with c the gradient scale (2 for distances, 1 for displacements).
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy import linalg as la
from scipy.optimize import least_squares

from backend.formation.graph import (
    Flavor,
    FormationGraph,
    edge_errors,
    formation_gradient,
    relative_positions,
    shape_matrix,
)
from backend.formation.rigidity import rigidity_spectra
from backend.models.manipulator import GravityMode, ManipulatorModel
from backend.scenario import Scenario

from .grid import SampleGrid

logger = logging.getLogger(__name__)

# ratio estimates skip points this close to the desired shape
RATIO_FLOOR = 1e-9


def spectral_norm(A: np.ndarray) -> float:
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


class NetworkSample:
    "The stacked matrices of one grid point."

    def __init__(self, graph: FormationGraph, models: Sequence[ManipulatorModel], x, q, xi, a_hat=None) -> None:
        self.graph = graph
        self.x = np.asarray(x, dtype=float)
        self.q = np.asarray(q, dtype=float)
        self.xi = np.asarray(xi, dtype=float).ravel()
        z = relative_positions(graph, self.x)
        self.e = edge_errors(graph, self.x).ravel()
        self.D = shape_matrix(graph, z)
        self.Bbar = graph.incidence_bar
        # D^T Bbar^T, the rigidity matrix
        self.R = self.D.T @ self.Bbar.T
        self.J = la.block_diag(*[model.jacobian(q[i]) for i, model in enumerate(models)])
        self.J_hat = self.J
        if a_hat is not None:
            self.J_hat = la.block_diag(*[model.jacobian(q[i], a_hat[i]) for i, model in enumerate(models)])
        self.H = la.block_diag(*[model.inertia(q[i]) for i, model in enumerate(models)])
        xi_agents = self.xi.reshape(len(models), -1)
        self.C = la.block_diag(*[model.coriolis(q[i], xi_agents[i]) for i, model in enumerate(models)])
        self.J_dot = la.block_diag(
            *[model.jacobian_derivative(q[i], xi_agents[i]) for i, model in enumerate(models)]
        )

    @property
    def scale(self) -> float:
        return self.graph.gradient_scale

    def f11(self) -> np.ndarray:
        if self.graph.flavor != Flavor.DISTANCE:
            return np.zeros((self.R.shape[0], self.H.shape[1]))
        v = (self.Bbar.T @ self.J @ self.xi).reshape(self.graph.num_edges, self.graph.dimension)
        return shape_matrix(self.graph, v).T @ self.Bbar.T @ self.J @ self.H

    def f12(self) -> np.ndarray:
        return self.J.T @ self.R.T @ self.R @ self.J @ self.H

    def f13(self) -> np.ndarray:
        return self.R @ self.J_dot @ self.H

    def f14(self) -> np.ndarray:
        return self.R @ self.J @ self.C.T

    def phi1(self) -> float:
        "phi1 evaluated directly from e_hat and its time derivative."
        c = self.scale
        e_hat = formation_gradient(self.graph, self.x)
        e_hat_dot = c * c * self.Bbar @ self.D @ self.R @ self.J @ self.xi
        if self.graph.flavor == Flavor.DISTANCE:
            v = (self.Bbar.T @ self.J @ self.xi).reshape(self.graph.num_edges, self.graph.dimension)
            e_hat_dot = e_hat_dot + c * self.Bbar @ shape_matrix(self.graph, v) @ self.e
        H_xi = self.H @ self.xi
        return float(e_hat_dot @ self.J @ H_xi + e_hat @ self.J_dot @ H_xi + e_hat @ self.J @ self.C.T @ self.xi)


class PhiBounds:
    def __init__(self, beta11: float, beta12: float, beta13: float, beta14: float, scale: float) -> None:
        self.beta11 = beta11
        self.beta12 = beta12
        self.beta13 = beta13
        self.beta14 = beta14
        # Young's inequality on each c e^T f xi cross term
        half = scale / 2.0
        self.k11 = half * (beta11 + beta13 + beta14)
        self.k12 = half * (beta11 + beta13 + beta14) + scale * scale * beta12

    def bound(self, e, xi) -> float:
        return self.k11 * float(np.sum(np.square(e))) + self.k12 * float(np.sum(np.square(xi)))


class EtaBounds:
    """
    Compensator constants. With K_I = 0 there is no compensator and
    k2x = k3x = k41 = 0, k42 = k11, k43 = k12.
    """

    def __init__(
        self,
        K_I: float,
        c_max: float,
        scale: float,
        phi: PhiBounds,
        kappa1: float,
        kappa2: float,
        beta22: float,
        beta31: float,
    ) -> None:
        self.kappa1 = kappa1
        self.kappa2 = kappa2
        self.beta21 = kappa1 * kappa2 / K_I if K_I > 0 else 0.0
        self.beta22 = beta22 if K_I > 0 else 0.0
        self.beta31 = beta31
        self.k21 = self.beta21**2
        self.k22 = self.beta22**2
        self.k31 = 0.5 * K_I + K_I * c_max
        self.k32 = 0.5 * K_I * self.beta21**2
        self.k33 = K_I
        half = scale / 2.0
        self.k41 = half * beta31 * K_I
        self.k42 = phi.k11 + half * beta31 * K_I * (1.0 + c_max + self.beta21)
        self.k43 = phi.k12 + half * beta31 * K_I * c_max


def estimate_inertia_bounds(model: ManipulatorModel, q_samples) -> tuple[float, float]:
    "(c_min, c_max): extreme eigenvalues of H(q) over the samples (S, n)."
    c_min, c_max = np.inf, 0.0
    for q in np.asarray(q_samples, dtype=float):
        eig = np.linalg.eigvalsh(model.inertia(q))
        c_min = min(c_min, float(eig[0]))
        c_max = max(c_max, float(eig[-1]))
    return c_min, c_max


def network_inertia_bounds(models: Sequence[ManipulatorModel], grid: SampleGrid) -> tuple[float, float]:
    bounds = [estimate_inertia_bounds(model, grid.q[:, i]) for i, model in enumerate(models)]
    return min(b[0] for b in bounds), max(b[1] for b in bounds)


def estimate_jacobian_bounds(models: Sequence[ManipulatorModel], grid: SampleGrid) -> tuple[float, float, float]:
    """
    (lambda_J, lambda_J_hat, delta): max lambda_max(J J^T) at the true
    parameters, max |J(q, a_hat)| and max |J(q, a_hat) - J(q, a)|.
    """
    lambda_J = lambda_J_hat = delta = 0.0
    for q, a_hat in zip(grid.q, grid.a_hat):
        for i, model in enumerate(models):
            J = model.jacobian(q[i])
            J_hat = model.jacobian(q[i], a_hat[i])
            lambda_J = max(lambda_J, spectral_norm(J) ** 2)
            lambda_J_hat = max(lambda_J_hat, spectral_norm(J_hat))
            delta = max(delta, spectral_norm(J_hat - J))
    return lambda_J, lambda_J_hat, delta


def estimate_shape_bounds(graph: FormationGraph, grid: SampleGrid) -> tuple[float, float, float]:
    "(lambda1, lambda3, beta31); beta31 = max |D^T Bbar^T| = sqrt(lambda3)."
    spectra = rigidity_spectra(graph, grid.x)
    return spectra.lambda1, spectra.lambda3, float(np.sqrt(spectra.lambda3))


def estimate_excitation(graph: FormationGraph, models: Sequence[ManipulatorModel], grid: SampleGrid) -> tuple[float, float]:
    "(lambda2, lambda4): min lambda_min(D^T Bbar^T J J^T Bbar D), at a and at a_hat."
    lambda2 = lambda4 = np.inf
    for x, q, a_hat in zip(grid.x, grid.q, grid.a_hat):
        R = rigidity_matrix_at(graph, x)
        J = la.block_diag(*[model.jacobian(q[i]) for i, model in enumerate(models)])
        J_hat = la.block_diag(*[model.jacobian(q[i], a_hat[i]) for i, model in enumerate(models)])
        RJ, RJ_hat = R @ J, R @ J_hat
        lambda2 = min(lambda2, float(np.linalg.eigvalsh(RJ @ RJ.T)[0]))
        lambda4 = min(lambda4, float(np.linalg.eigvalsh(RJ_hat @ RJ_hat.T)[0]))
    return max(lambda2, 0.0), max(lambda4, 0.0)


def rigidity_matrix_at(graph: FormationGraph, x) -> np.ndarray:
    z = relative_positions(graph, x)
    return shape_matrix(graph, z).T @ graph.incidence_bar.T


def estimate_phi_bounds(graph: FormationGraph, models: Sequence[ManipulatorModel], grid: SampleGrid) -> PhiBounds:
    betas = np.zeros(4)
    for x, q, xi in zip(grid.x, grid.q, grid.xi):
        sample = NetworkSample(graph, models, x, q, xi)
        norms = [spectral_norm(f()) for f in (sample.f11, sample.f12, sample.f13, sample.f14)]
        betas = np.maximum(betas, norms)
    return PhiBounds(*betas, graph.gradient_scale)


def estimate_kappa1(graph: FormationGraph, grid: SampleGrid) -> float:
    """
    max |x - x*_aligned| / |e| over the grid, with x* moved by the rigid
    motion (translation only for displacements) that best fits it to x.
    """
    kappa1 = 0.0
    y = grid.x_star - grid.x_star.mean(axis=0)
    for x in grid.x:
        e = edge_errors(graph, x)
        norm_e = float(np.linalg.norm(e))
        if norm_e < RATIO_FLOOR:
            continue
        x0 = x - x.mean(axis=0)
        if graph.flavor == Flavor.DISTANCE:
            R, _ = la.orthogonal_procrustes(y, x0)
            residual = np.linalg.norm(x0 - y @ R)
        else:
            residual = np.linalg.norm(x0 - y)
        kappa1 = max(kappa1, float(residual) / norm_e)
    return kappa1


def estimate_kappa2(models: Sequence[ManipulatorModel], grid: SampleGrid, q_star) -> float:
    "max |G(q) - G(q*)| / |h(q) - h(q*)|; zero without gravity."
    if all(model.gravity_mode == GravityMode.HORIZONTAL or model.g == 0 for model in models):
        return 0.0
    q_star = np.asarray(q_star, dtype=float)
    G_star = np.concatenate([model.gravity(q_star[i]) for i, model in enumerate(models)])
    h_star = np.concatenate([model.forward_kinematics(q_star[i]) for i, model in enumerate(models)])
    kappa2 = 0.0
    for q in grid.q:
        G = np.concatenate([model.gravity(q[i]) for i, model in enumerate(models)])
        h = np.concatenate([model.forward_kinematics(q[i]) for i, model in enumerate(models)])
        dh = float(np.linalg.norm(h - h_star))
        if dh < RATIO_FLOOR:
            continue
        kappa2 = max(kappa2, float(np.linalg.norm(G - G_star)) / dh)
    return kappa2


def estimate_eta_bounds(
    graph: FormationGraph,
    models: Sequence[ManipulatorModel],
    grid: SampleGrid,
    K_I: float,
    q_star,
    c_max: float,
    phi: PhiBounds,
) -> EtaBounds:
    _, _, beta31 = estimate_shape_bounds(graph, grid)
    if K_I <= 0:
        return EtaBounds(0.0, c_max, graph.gradient_scale, phi, 0.0, 0.0, 0.0, beta31)

    kappa1 = estimate_kappa1(graph, grid)
    kappa2 = estimate_kappa2(models, grid, q_star)
    beta22 = 0.0
    for q, xi in zip(grid.q, grid.xi):
        for i, model in enumerate(models):
            f22 = model.inertia(q[i]) + model.coriolis(q[i], xi[i]).T / K_I
            beta22 = max(beta22, spectral_norm(f22))
    logger.warning("kappa1=%.4g and kappa2=%.4g are sample-based ratio estimates", kappa1, kappa2)
    return EtaBounds(K_I, c_max, graph.gradient_scale, phi, kappa1, kappa2, beta22, beta31)


def desired_joint_configuration(scenario: Scenario) -> np.ndarray:
    "q* realizing the desired shape, by least squares on the edge errors from q(0)."
    models, graph = scenario.models, scenario.graph
    shape = scenario.q0.shape

    def residual(flat):
        q = flat.reshape(shape)
        x = np.array([model.forward_kinematics(q[i]) for i, model in enumerate(models)])
        return edge_errors(graph, x).ravel()

    result = least_squares(residual, scenario.q0.ravel(), xtol=1e-12, ftol=1e-12, gtol=1e-12)
    q_star = result.x.reshape(shape)
    worst = float(np.max(np.abs(result.fun))) if result.fun.size else 0.0
    if worst > 1e-6:
        logger.warning("no joint configuration realizes the shape; best residual %.3g", worst)
    return q_star
