import json
import math

import numpy as np
import pytest
from scipy import linalg as la

from backend.certify.conditions import (
    Inequality,
    alpha_interval,
    check_gain_conditions,
    choose_epsilon,
    delta_star,
    minimal_gains,
)
from backend.certify.constants import (
    NetworkSample,
    PhiBounds,
    estimate_eta_bounds,
    estimate_inertia_bounds,
    estimate_kappa1,
    estimate_kappa2,
    estimate_phi_bounds,
    estimate_shape_bounds,
    network_inertia_bounds,
    rigidity_matrix_at,
)
from backend.certify.grid import SampleGrid, build_grid, joint_boxes, lattice, symmetric_lattice
from backend.certify.lyapunov import energy_bounds, lyapunov_values
from backend.certify.report import (
    CertificateConstants,
    CertificateReport,
    certify,
    estimate_constants,
    raise_on_failure,
    write_report,
)
from backend.control.config import ControllerConfig, Gains, Variant
from backend.formation.graph import edge_errors
from backend.formation.rigidity import rigidity_spectra
from frontend.scenariogen.loader import parse_scenario
from utils.error import CertificateFailure, UsageError

from .conftest import scenario_path

EXACT_EXAMPLE = dict(c_min=1.0, c_max=2.0, lambda1=1.0, lambda_J=1.0, lambda2=0.5, k11=10.0, k12=20.0)
ADAPTIVE_EXAMPLE = dict(
    c_min=1.0,
    c_max=2.0,
    lambda1=1.0,
    lambda_J=1.0,
    lambda_J_hat=2.0,
    lambda3=1.0,
    lambda4=0.5,
    k21=1.0,
    k22=1.0,
    k31=2.0,
    k32=3.0,
    k33=1.0,
    k41=1.0,
    k42=5.0,
    k43=4.0,
)


@pytest.fixture(scope="module")
def compact():
    return parse_scenario(scenario_path("square2d_compact.scn"))


@pytest.fixture(scope="module")
def compact_grid(compact):
    return build_grid(compact, samples=20)


def by_name(inequalities):
    return {inequality.name: inequality for inequality in inequalities}


def test_constants_default_to_zero():
    c = CertificateConstants(k11=3.0)
    assert c.k11 == 3.0
    assert c.lambda4 == 0.0
    assert set(c.asDict()) == set(CertificateConstants.NAMES)
    with pytest.raises(TypeError):
        CertificateConstants(k99=1.0)


def test_published_exact_gains_miss_the_margins():
    c = CertificateConstants(lambda2=0.5, k11=450.0, k12=9000.0, c_min=0.16, c_max=7.8)
    result = by_name(check_gain_conditions(c, Gains(800.0, 180.0, alpha=0.02), Variant.EXACT))
    assert result["exact: e decay"].margin == pytest.approx(-50.0)
    assert result["exact: xi decay"].margin == pytest.approx(0.0)
    assert not result["exact: e decay"].holds
    assert not result["exact: xi decay"].holds


def test_zero_proportional_gain_has_a_negative_margin():
    c = CertificateConstants(**EXACT_EXAMPLE)
    result = by_name(check_gain_conditions(c, Gains(0.0, 100.0, alpha=0.1), Variant.EXACT))
    assert result["exact: e decay"].margin < 0


def test_alpha_interval():
    c = CertificateConstants(**EXACT_EXAMPLE)
    assert alpha_interval(c) == (0.0, 0.5)
    result = by_name(check_gain_conditions(c, Gains(100.0, 100.0, alpha=0.6), Variant.EXACT))
    assert not result["alpha < c_min/c_max"].holds


def test_minimal_exact_gains():
    c = CertificateConstants(**EXACT_EXAMPLE)
    K_P_min, K_D_min = minimal_gains(c, Variant.EXACT, 0.1)
    assert K_P_min == pytest.approx(22.0)
    assert K_D_min == pytest.approx(4.0)
    result = check_gain_conditions(c, Gains(22.1, 4.1, alpha=0.1), Variant.EXACT)
    assert all(inequality.holds for inequality in result)


def test_minimal_exact_gains_without_excitation():
    c = CertificateConstants(**{**EXACT_EXAMPLE, "lambda2": 0.0})
    assert minimal_gains(c, Variant.EXACT, 0.1)[0] == math.inf


def test_epsilon_leaves_a_margin():
    c = CertificateConstants(**ADAPTIVE_EXAMPLE)
    eps = choose_epsilon(c, 0.1)
    s = 1.0 + c.k31 + 0.1 * c.k41
    assert 0.5 / eps - c.k31 - 0.1 * c.k41 == pytest.approx(1.1 + 0.1 * s)


def test_slightly_above_the_minimal_adaptive_gains_passes():
    c = CertificateConstants(**ADAPTIVE_EXAMPLE)
    alpha = 0.1
    eps = choose_epsilon(c, alpha)
    K_P_min, K_D_min = minimal_gains(c, Variant.ADAPTIVE, alpha, epsilon=eps)
    assert math.isfinite(K_P_min)
    gains = Gains(1.01 * K_P_min, K_D_min + 0.1, alpha=alpha)
    result = check_gain_conditions(c, gains, Variant.ADAPTIVE, eps)
    assert [inequality.name for inequality in result if not inequality.holds] == []
    below = check_gain_conditions(c, Gains(0.99 * K_P_min, K_D_min + 0.1, alpha=alpha), Variant.ADAPTIVE, eps)
    assert not by_name(below)["adaptive: e decay"].holds


def test_exact_jacobian_satisfies_the_approximation_bound():
    c = CertificateConstants(**ADAPTIVE_EXAMPLE)
    assert delta_star(c) == pytest.approx(0.5 / 8.0)
    result = by_name(check_gain_conditions(c, Gains(100.0, 100.0, alpha=0.1), Variant.APPROX))
    assert result["approx: delta < delta*"].margin > 0


def test_large_jacobian_error_breaks_the_approximate_law():
    c = CertificateConstants(**{**ADAPTIVE_EXAMPLE, "delta": 1.0})
    result = by_name(check_gain_conditions(c, Gains(100.0, 100.0, alpha=0.1), Variant.APPROX))
    assert not result["approx: delta < delta*"].holds
    assert minimal_gains(c, Variant.APPROX, 0.1) == (math.inf, math.inf)


def test_delta_star_without_a_jacobian_bound():
    assert delta_star(CertificateConstants(lambda4=1.0)) == math.inf


def test_lattices():
    assert lattice(0.0, 1.0, 0.25) == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert symmetric_lattice(1.0, 0.5) == pytest.approx([-1.0, -0.5, 0.0, 0.5, 1.0])
    with pytest.raises(UsageError):
        lattice(1.0, 0.0, 0.1)


def test_grid_stays_inside_its_bounds(compact, compact_grid):
    cert = compact.certificate
    grid = compact_grid
    assert len(grid) == 20
    boxes = joint_boxes(compact)
    for x, q, xi, a_hat in zip(grid.x, grid.q, grid.xi, grid.a_hat):
        e = edge_errors(compact.graph, x)
        assert np.sum(e * e) <= cert.r1
        assert np.sum(xi * xi) <= cert.r2 + 1e-12
        assert np.all(q >= boxes[:, :, 0] - 1e-12) and np.all(q <= boxes[:, :, 1] + 1e-12)
        assert np.all(a_hat >= cert.a_min - 1e-12) and np.all(a_hat <= cert.a_max + 1e-12)
        for i, model in enumerate(compact.models):
            assert model.singularity_distance(q[i]) > compact.simulation.sigma_floor


def test_grid_velocities_are_not_all_zero(compact_grid):
    assert np.any(compact_grid.xi != 0.0)


def test_smaller_grids_are_nested(compact, compact_grid):
    small = build_grid(compact, samples=5)
    head = compact_grid.head(5)
    for name in ("x", "q", "xi", "a_hat"):
        assert np.array_equal(getattr(small, name), getattr(head, name))


def test_extrema_grow_with_the_grid(compact, compact_grid):
    head = compact_grid.head(3)
    lambda1_head, lambda3_head, _ = estimate_shape_bounds(compact.graph, head)
    lambda1_full, lambda3_full, _ = estimate_shape_bounds(compact.graph, compact_grid)
    assert lambda1_head <= lambda1_full
    assert lambda3_head <= lambda3_full
    c_min_head, c_max_head = network_inertia_bounds(compact.models, head)
    c_min_full, c_max_full = network_inertia_bounds(compact.models, compact_grid)
    assert c_min_full <= c_min_head <= c_max_head <= c_max_full


def test_empty_grid_is_rejected():
    with pytest.raises(UsageError):
        SampleGrid(np.zeros((4, 2)), [], [], [], [])


def test_inertia_bounds_of_one_configuration(planar_arm):
    q = np.array([0.3, 1.1])
    eig = np.linalg.eigvalsh(planar_arm.inertia(q))
    assert estimate_inertia_bounds(planar_arm, [q]) == pytest.approx((eig[0], eig[-1]))


def test_cross_term_is_bounded_at_every_sample(compact, compact_grid):
    graph, models = compact.graph, compact.models
    for k in range(len(compact_grid)):
        single = SampleGrid(
            compact_grid.x_star,
            compact_grid.x[k : k + 1],
            compact_grid.q[k : k + 1],
            compact_grid.xi[k : k + 1],
            compact_grid.a_hat[k : k + 1],
        )
        bounds = estimate_phi_bounds(graph, models, single)
        sample = NetworkSample(graph, models, single.x[0], single.q[0], single.xi[0])
        value = sample.phi1()
        limit = bounds.bound(sample.e, sample.xi)
        assert value <= limit + 1e-9 * max(1.0, abs(limit))


def test_young_split_of_the_cross_term():
    phi = PhiBounds(1.0, 2.0, 3.0, 4.0, scale=2.0)
    assert phi.k11 == pytest.approx(8.0)
    assert phi.k12 == pytest.approx(8.0 + 4.0 * 2.0)
    assert phi.bound([1.0, 0.0], [0.0, 2.0]) == pytest.approx(8.0 + 16.0 * 4.0)


@pytest.fixture(scope="module")
def vertical():
    return parse_scenario(scenario_path("vertical2d.scn"))


@pytest.fixture(scope="module")
def vertical_grid(vertical):
    return build_grid(vertical, samples=10)


def test_gravity_ratio_bounds_every_sample(vertical, vertical_grid):
    models = vertical.models
    q_star = vertical.q0
    kappa2 = estimate_kappa2(models, vertical_grid, q_star)
    G_star = np.concatenate([m.gravity(q_star[i]) for i, m in enumerate(models)])
    h_star = np.concatenate([m.forward_kinematics(q_star[i]) for i, m in enumerate(models)])
    for q in vertical_grid.q:
        G = np.concatenate([m.gravity(q[i]) for i, m in enumerate(models)])
        h = np.concatenate([m.forward_kinematics(q[i]) for i, m in enumerate(models)])
        if np.linalg.norm(h - h_star) > 1e-6:
            assert np.linalg.norm(G - G_star) <= kappa2 * np.linalg.norm(h - h_star) + 1e-9


def test_shape_error_bounds_the_aligned_offset(compact, compact_grid):
    kappa1 = estimate_kappa1(compact.graph, compact_grid)
    y = compact_grid.x_star - compact_grid.x_star.mean(axis=0)
    checked = 0
    for x in compact_grid.x:
        norm_e = np.linalg.norm(edge_errors(compact.graph, x))
        if norm_e < 1e-9:
            continue
        x0 = x - x.mean(axis=0)
        U, _, Vt = np.linalg.svd(y.T @ x0)
        residual = np.linalg.norm(x0 - y @ U @ Vt)
        assert residual <= kappa1 * norm_e * (1 + 1e-9)
        checked += 1
    assert checked > 0
    assert kappa1 > 0


def test_compensator_constants_bound_every_sample(vertical, vertical_grid):
    graph, models = vertical.graph, vertical.models
    K_I = vertical.controller.gains.K_I
    assert K_I > 0
    _, c_max = network_inertia_bounds(models, vertical_grid)
    phi = estimate_phi_bounds(graph, models, vertical_grid)
    bounds = estimate_eta_bounds(graph, models, vertical_grid, K_I, vertical.q0, c_max, phi)
    assert bounds.beta21 == pytest.approx(bounds.kappa1 * bounds.kappa2 / K_I)
    for q, xi in zip(vertical_grid.q, vertical_grid.xi):
        f22 = la.block_diag(*[m.inertia(q[i]) + m.coriolis(q[i], xi[i]).T / K_I for i, m in enumerate(models)])
        v = np.ravel(xi)
        assert np.sum(np.square(f22 @ v)) <= bounds.k22 * np.sum(np.square(v)) * (1 + 1e-9) + 1e-12
    for x in vertical_grid.x:
        assert np.linalg.norm(rigidity_matrix_at(graph, x), 2) <= bounds.beta31 * (1 + 1e-9)


@pytest.mark.parametrize("alpha", [0.02, 0.5])
def test_energy_is_sandwiched_at_every_sample(compact, compact_grid, alpha):
    graph, models = compact.graph, compact.models
    config = ControllerConfig(Variant.EXACT, Gains(800.0, 180.0, alpha=alpha))
    for q, xi in zip(compact_grid.q, compact_grid.xi):
        x = np.array([m.forward_kinematics(q[i]) for i, m in enumerate(models)])
        eig = np.concatenate([np.linalg.eigvalsh(m.inertia(q[i])) for i, m in enumerate(models)])
        lambda_J = max(np.linalg.norm(m.jacobian(q[i]), 2) ** 2 for i, m in enumerate(models))
        lambda1 = rigidity_spectra(graph, [x]).lambda1
        c01, c02, c03, c04 = energy_bounds(config.gains, eig.min(), eig.max(), lambda1, lambda_J)
        e2 = float(np.sum(np.square(edge_errors(graph, x))))
        xi2 = float(np.sum(np.square(xi)))
        U1 = lyapunov_values(graph, models, config, q, xi)[0]
        upper = 0.5 * (c03 * e2 + c04 * xi2)
        tol = 1e-9 * max(1.0, upper)
        assert 0.5 * (c01 * e2 + c02 * xi2) - tol <= U1 <= upper + tol


def test_horizontal_arms_have_no_gravity_ratio(compact, compact_grid):
    assert estimate_kappa2(compact.models, compact_grid, compact.q0) == 0.0


def test_without_compensator_the_constants_degenerate(compact, compact_grid):
    c = estimate_constants(compact, compact_grid, q_star=compact.q0)
    assert compact.controller.gains.K_I == 0.0
    assert c.k21 == 0.0 and c.k22 == 0.0
    assert c.k31 == 0.0 and c.k32 == 0.0 and c.k33 == 0.0 and c.k41 == 0.0
    assert c.k42 == pytest.approx(c.k11)
    assert c.k43 == pytest.approx(c.k12)
    assert 0.0 < c.c_min <= c.c_max
    assert c.lambda1 == pytest.approx(4.0 * c.lambda3)
    assert c.beta31 == pytest.approx(math.sqrt(c.lambda3))


def test_certificate_report(compact, compact_grid, tmp_path):
    report = certify(compact, compact_grid)
    assert report.samples == 20
    assert report.variant == Variant.ADAPTIVE
    assert set(report.minimal) == {"exact", "approx", "adaptive"}
    assert report.passed == (report.failed == [])
    text, json_path = write_report(report, str(tmp_path / "out" / "certificate.txt"))
    assert json_path.endswith("certificate.json")
    with open(json_path) as f:
        data = json.load(f)
    assert data["passed"] == report.passed
    assert data["variant"] == "adaptive"
    assert "kappa1" in data["sample_based"]
    with open(text) as f:
        assert f.read().startswith("certificate for square2d_compact")


def test_failed_inequalities_raise(compact_grid):
    report = CertificateReport(
        "toy",
        Variant.EXACT,
        1,
        CertificateConstants(),
        [Inequality("exact: e decay", -50.0, 1.0), Inequality("alpha > 0", 0.02)],
        {},
        (0.0, 1.0),
        1.0,
        math.inf,
    )
    assert report.failed == ["exact: e decay"]
    with pytest.raises(CertificateFailure) as info:
        raise_on_failure(report)
    assert info.value.exitCode == 4
    assert info.value.failed == ["exact: e decay"]
    assert report.asDict()["delta_star"] is None
