import os

import numpy as np
import pytest

from backend.formation.graph import Flavor, FormationGraph
from backend.models import SpatialElbowArm, TwoLinkPlanarArm
from backend.models.planar import DEFAULTS
from frontend.scenariogen.loader import parse_scenario_text

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCENARIOS = os.path.join(ROOT, "scenarios")

SQUARE_EDGES = [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]
SQUARE_DISTANCES = [0.4, 0.4, 0.4, 0.4, 0.4 * np.sqrt(2)]

# compact layout: every edge reachable
SQUARE_TEMPLATE = """
graph {{
    agents = 4;
    dimension = 2;
    edges = [[1, 2], [2, 3], [3, 4], [4, 1], [1, 3]];
    distances = [0.4, 0.4, 0.4, 0.4, 0.4 * sqrt(2)];
}}
model {{
    kind = planar2;
    gravity = {gravity};
}}
agent 1 {{ base = [0, 0]; rotation = {rotation1}; q0 = [0, {q2}]; }}
agent 2 {{ base = [3.5, 0]; q0 = [pi / 2, {q2}]; }}
agent 3 {{ base = [3.5, 3.5]; q0 = [pi, {q2}]; }}
agent 4 {{ base = [0, 3.5]; q0 = [3 * pi / 2, {q2}]; }}
controller {{ {controller} }}
simulation {{ {simulation} }}
{extra}
"""


def square_text(
    controller: str = "variant = exact; K_P = 800; K_D = 180;",
    simulation: str = "T = 0.05;",
    gravity: str = "horizontal",
    q2: str = "pi / 3",
    rotation1: str = "0",
    extra: str = "",
) -> str:
    return SQUARE_TEMPLATE.format(
        controller=controller,
        simulation=simulation,
        gravity=gravity,
        q2=q2,
        rotation1=rotation1,
        extra=extra,
    )


def square_scenario(**kwargs):
    return parse_scenario_text(square_text(**kwargs), "square")


def scenario_path(name: str) -> str:
    return os.path.join(SCENARIOS, name)


@pytest.fixture
def planar_arm():
    return TwoLinkPlanarArm(**DEFAULTS)


@pytest.fixture
def elbow_arm():
    return SpatialElbowArm(m=[1.0, 0.8], l=[0.3, 0.4, 0.4], l_c=[0.2, 0.2], rotor=[0.05, 0.05, 0.05])


@pytest.fixture
def square_graph():
    return FormationGraph(4, SQUARE_EDGES, 2, Flavor.DISTANCE, SQUARE_DISTANCES)


@pytest.fixture
def exact_square():
    return square_scenario()


@pytest.fixture
def adaptive_square():
    return square_scenario(controller="variant = adaptive; K_P = 800; K_D = 180; alpha = 0.02; a_hat0 = [2, 2];")


@pytest.fixture
def rng():
    return np.random.default_rng(0)
