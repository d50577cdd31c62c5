import numpy as np
import pytest

from backend.control.config import Variant
from backend.formation.graph import Flavor, FormationGraph
from backend.scenario import Scenario
from backend.verify.properties import (
    PROPERTIES,
    PropertyResult,
    check_adaptive_freeze,
    check_adaptive_identity,
    check_determinism,
    check_energy_balance,
    check_formation_gradient,
    check_frame_invariance,
    check_jacobian,
    check_pid_form,
    check_regressor,
    check_skew_symmetry,
    compensated,
    run_properties,
)
from frontend.scenariogen.loader import parse_scenario

from .conftest import SQUARE_EDGES, scenario_path, square_scenario


@pytest.fixture(scope="module")
def tetra():
    return parse_scenario(scenario_path("tetra3d.scn"))


@pytest.mark.parametrize(
    "check",
    [check_skew_symmetry, check_regressor, check_jacobian, check_formation_gradient],
    ids=lambda check: check.__name__,
)
def test_model_properties_on_both_arm_kinds(check, adaptive_square, tetra):
    for scenario in (adaptive_square, tetra):
        result = check(scenario, samples=20, seed=1)
        assert result.passed, str(result)


def test_frame_invariance(exact_square, tetra):
    assert check_frame_invariance(exact_square, samples=10).passed
    assert check_frame_invariance(tetra, samples=10).passed


def test_frame_invariance_with_a_compensator():
    scenario = square_scenario(controller="variant = approx; K_P = 50; K_D = 10; K_I = 2;", gravity="vertical")
    assert check_frame_invariance(scenario, samples=10).passed


def test_displacement_formations_skip_frame_invariance(exact_square):
    graph = FormationGraph(4, SQUARE_EDGES, 2, Flavor.DISPLACEMENT, np.zeros((5, 2)))
    s = exact_square
    scenario = Scenario(graph, s.models, s.q0, s.qdot0, s.controller, s.simulation, s.certificate)
    result = check_frame_invariance(scenario, samples=1)
    assert result.passed
    assert "skipped" in result.detail


def test_adaptive_update_properties(adaptive_square):
    assert check_adaptive_freeze(adaptive_square, samples=20).residual == 0.0
    assert check_adaptive_identity(adaptive_square, samples=20).passed


def test_determinism(adaptive_square):
    result = check_determinism(adaptive_square, T=0.02)
    assert result.passed
    assert result.detail == ""


def test_compensated_adds_an_integral_gain(exact_square, adaptive_square):
    subject = compensated(exact_square)
    assert subject.controller.variant == Variant.APPROX
    assert subject.controller.hasCompensator
    assert compensated(adaptive_square).controller.variant == Variant.ADAPTIVE


def test_property_result():
    assert PropertyResult("x", 1e-12, 1e-10).passed
    assert not PropertyResult("x", 1.0, 0.0).passed
    assert "FAIL" in str(PropertyResult("x", 1.0, 0.0))


def test_run_selected_properties(exact_square):
    results = run_properties(exact_square, ["freeze", "identity"])
    assert [result.name for result in results] == ["adaptive freeze", "adaptive identity"]
    assert set(PROPERTIES) >= {"skew", "pid", "frame", "determinism"}


@pytest.mark.slow
def test_free_arms_conserve_kinetic_energy(exact_square):
    assert check_energy_balance(exact_square, T=0.5).passed


@pytest.mark.slow
def test_pid_form_matches_the_recorded_torques():
    scenario = parse_scenario(scenario_path("vertical2d.scn"))
    result = check_pid_form(scenario, T=0.02)
    assert result.passed, str(result)
