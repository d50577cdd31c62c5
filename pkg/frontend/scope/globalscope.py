"""
Global scope stores the sections met in one scenario file, and knows the schema
every section is checked against.

The schema lists sections in the order the normalized writer emits them.
"""

import math
from typing import Optional

from frontend.symbol.fieldsymbol import FieldSymbol
from frontend.symbol.sectionsymbol import SectionSymbol
from frontend.type import BOOL, INT, REAL, ArrayType, ChoiceType

from .scope import Scope, ScopeKind

VECTOR = ArrayType(REAL)
POINTS = ArrayType.multidim(REAL, None, None)
EDGES = ArrayType.multidim(INT, None, 2)
BOXES = ArrayType.multidim(REAL, None, None, 2)


def _linkParams() -> list[FieldSymbol]:
    return [
        FieldSymbol("m", VECTOR, unit="kg"),
        FieldSymbol("I_c", VECTOR, unit="kg m^2"),
        FieldSymbol("l", VECTOR, unit="m"),
        FieldSymbol("l_c", VECTOR, unit="m"),
        FieldSymbol("rotor", VECTOR, unit="kg m^2"),
    ]


SCHEMA: tuple[SectionSymbol, ...] = (
    SectionSymbol(
        "graph",
        [
            FieldSymbol("agents", INT, required=True),
            FieldSymbol("dimension", INT, required=True),
            FieldSymbol("flavor", ChoiceType("distance", "displacement"), default="distance"),
            FieldSymbol("edges", EDGES, required=True),
            FieldSymbol("distances", VECTOR, unit="m"),
            FieldSymbol("displacements", POINTS, unit="m"),
            FieldSymbol("reference", POINTS, unit="m"),
            FieldSymbol("check_rigidity", BOOL, default=True),
        ],
        required=True,
    ),
    SectionSymbol(
        "model",
        [
            FieldSymbol("kind", ChoiceType("planar2", "elbow3"), default="planar2"),
            FieldSymbol("gravity", ChoiceType("horizontal", "vertical"), default="horizontal"),
            FieldSymbol("g", REAL, default=9.81, unit="m/s^2"),
        ]
        + _linkParams(),
        required=True,
    ),
    SectionSymbol(
        "agent",
        [
            FieldSymbol("base", VECTOR, required=True, unit="m"),
            FieldSymbol("rotation", REAL, default=0.0, unit="rad"),
            FieldSymbol("euler", ArrayType(REAL, 3), unit="rad"),
            FieldSymbol("q0", VECTOR, required=True, unit="rad"),
            FieldSymbol("qdot0", VECTOR, unit="rad/s"),
            FieldSymbol("a_hat0", VECTOR, unit="m"),
        ]
        + _linkParams(),
        indexed=True,
    ),
    SectionSymbol(
        "nominal",
        [
            FieldSymbol("mass_scale", REAL, default=1.0),
            FieldSymbol("m", VECTOR, unit="kg"),
            FieldSymbol("I_c", VECTOR, unit="kg m^2"),
            FieldSymbol("l_c", VECTOR, unit="m"),
        ],
    ),
    SectionSymbol(
        "controller",
        [
            FieldSymbol(
                "variant",
                ChoiceType("exact", "approx", "adaptive", "naive", "passive"),
                required=True,
            ),
            FieldSymbol("K_P", REAL),
            FieldSymbol("K_D", REAL),
            FieldSymbol("K_I", REAL, default=0.0),
            FieldSymbol("alpha", REAL, default=0.02),
            FieldSymbol("a_hat0", VECTOR, unit="m"),
            FieldSymbol("eta0", ChoiceType("zero", "nominal_gravity"), default="zero"),
            FieldSymbol("frame", ChoiceType("global", "local"), default="global"),
            FieldSymbol("epsilon", REAL),
        ],
        required=True,
    ),
    SectionSymbol(
        "simulation",
        [
            FieldSymbol("T", REAL, default=30.0, unit="s"),
            FieldSymbol("dt", REAL, default=1e-3, unit="s"),
            FieldSymbol("stride", INT, default=10),
            FieldSymbol("error_tol", REAL, default=1e-2, unit="m^2"),
            FieldSymbol("velocity_tol", REAL, default=1e-2, unit="rad/s"),
            FieldSymbol("sigma_floor", REAL, default=1e-3),
            FieldSymbol("tail", REAL, default=0.1),
            FieldSymbol("lyapunov_tol", REAL, default=1e-6),
            FieldSymbol("jitter", REAL, default=0.0, unit="rad"),
            FieldSymbol("seed", INT, default=0),
        ],
    ),
    SectionSymbol(
        "certificate",
        [
            FieldSymbol("q_boxes", BOXES, unit="rad"),
            FieldSymbol("q_step", REAL, default=math.pi / 6, unit="rad"),
            FieldSymbol("q_halfwidth", REAL, default=math.pi / 6, unit="rad"),
            FieldSymbol("position_step", REAL, default=0.5, unit="m"),
            FieldSymbol("position_range", REAL, default=1.0, unit="m"),
            FieldSymbol("r1", REAL, default=16.0),
            FieldSymbol("xi_step", REAL, default=0.5, unit="rad/s"),
            FieldSymbol("r2", REAL, default=1.0),
            FieldSymbol("a_min", REAL, default=1.5, unit="m"),
            FieldSymbol("a_max", REAL, default=2.5, unit="m"),
            FieldSymbol("a_step", REAL, default=0.2, unit="m"),
            FieldSymbol("samples", INT, default=2000),
            FieldSymbol("seed", INT, default=0),
        ],
    ),
)


class GlobalScopeType(Scope):
    def __init__(self) -> None:
        super().__init__(ScopeKind.GLOBAL)
        self.schema = {section.name: section for section in SCHEMA}

    # To find the schema entry of a section kind.
    def sectionSymbol(self, name: str) -> Optional[SectionSymbol]:
        return self.schema.get(name)
