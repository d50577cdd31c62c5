"""
The scenario generation phase: turn the checked tree into a numeric `Scenario`.

Runs after `Namer` and `Typer`, so every entry carries its coerced "value".
This phase does the cross-section checks the schema cannot express: agent
indices, per-kind model parameters, vector lengths and flavor-specific keys.
"""

import logging
from typing import Any, Optional

import numpy as np

from backend.control.config import ControllerConfig, EtaInit, Gains, Variant
from backend.control.localframe import check_common_orientation
from backend.formation.graph import Flavor, FormationGraph
from backend.formation.rigidity import check_rigidity
from backend.models import MODEL_KINDS, GravityMode, ManipulatorModel, rotation_matrix
from backend.models import elbow, planar
from backend.models.manipulator import Frame
from backend.scenario import CertificateConfig, SimulationConfig
from backend.scenario import Scenario as ScenarioIR
from frontend.ast.tree import Scenario, Section
from frontend.ast.visitor import Visitor
from frontend.scope.globalscope import SCHEMA
from utils.error import *

logger = logging.getLogger(__name__)

DEFAULT_PARAMS = {
    "planar2": planar.DEFAULTS,
    "elbow3": elbow.DEFAULTS,
}

LINK_KEYS = ("m", "I_c", "l", "l_c", "rotor")


class ScenarioGen(Visitor[dict, None]):
    def __init__(self) -> None:
        self.schema = {symbol.name: symbol for symbol in SCHEMA}

    # Entry of this phase
    def transform(self, tree: Scenario, name: str = "") -> ScenarioIR:
        sections: dict[str, dict[str, Any]] = {}
        tree.accept(self, sections)

        graph = self.buildGraph(sections["graph"])
        N, m = graph.num_agents, graph.dimension
        kind = sections["model"]["kind"]

        agents = self.agentSections(sections, N)
        models = [self.buildModel(sections["model"], agents[i], i, m) for i in range(N)]
        n, p = models[0].dof, models[0].num_params

        q0 = np.array([self.vector(agents[i], "q0", n) for i in range(N)])
        qdot0 = np.array(
            [
                self.vector(agents[i], "qdot0", n) if agents[i]["qdot0"] is not None else np.zeros(n)
                for i in range(N)
            ]
        )

        nominal = None
        if "nominal" in sections:
            nominal = [self.buildNominal(sections["nominal"], model, kind) for model in models]

        controller = self.buildController(sections["controller"], agents, models, p)
        if controller.frame == Frame.LOCAL:
            check_common_orientation(graph, models)

        if sections["graph"]["check_rigidity"]:
            check_rigidity(graph)
        warn_unreachable(graph, models)

        simulation = SimulationConfig(**sections.get("simulation", self.defaults("simulation")))
        certificate = CertificateConfig(**sections.get("certificate", self.defaults("certificate")))

        return ScenarioIR(
            graph, models, q0, qdot0, controller, simulation, certificate, nominal, kind, name
        )

    def visitScenario(self, tree: Scenario, ctx: dict) -> None:
        for section in tree:
            section.accept(self, ctx)

    def visitSection(self, section: Section, ctx: dict) -> None:
        values = self.defaults(section.ident.value)
        for entry in section.body:
            values[entry.key.value] = entry.getattr("value")
        ctx[section.key] = values

    def defaults(self, name: str) -> dict[str, Any]:
        return {field.name: field.default for field in self.schema[name].fields.values()}

    # To collect `agent <i>` sections as a list ordered by agent index.
    def agentSections(self, sections: dict, N: int) -> list[dict[str, Any]]:
        for key in sections:
            if key.startswith("agent#"):
                index = int(key[len("agent#") :])
                if not 1 <= index <= N:
                    raise ScenarioBadValueError(key, "<index>", "agent index outside [1..%d]" % N)
        missing = [i for i in range(1, N + 1) if "agent#%d" % i not in sections]
        if missing:
            raise ScenarioMissingSectionError("agent %d" % missing[0])
        return [sections["agent#%d" % i] for i in range(1, N + 1)]

    def buildGraph(self, values: dict[str, Any]) -> FormationGraph:
        N, m = values["agents"], values["dimension"]
        flavor = Flavor(values["flavor"])
        if m not in (2, 3):
            raise ScenarioBadValueError("graph", "dimension", "must be 2 or 3")
        if N < 2:
            raise ScenarioBadValueError("graph", "agents", "a formation needs at least 2 agents")
        edges = values["edges"]

        wrong = "displacements" if flavor == Flavor.DISTANCE else "distances"
        if values[wrong] is not None:
            raise ScenarioBadValueError("graph", wrong, "not used by the %s flavor" % flavor.value)
        right = "distances" if flavor == Flavor.DISTANCE else "displacements"
        if values["reference"] is not None:
            if values[right] is not None:
                raise ScenarioBadValueError("graph", right, "give either reference or %s" % right)
            reference = np.asarray(values["reference"], dtype=float)
            if reference.shape != (N, m):
                raise ScenarioDimensionError("graph.reference must hold %d points in %dD" % (N, m))
            return FormationGraph.fromReference(N, edges, m, flavor, reference)
        if values[right] is None:
            raise ScenarioMissingFieldError("graph", right)

        desired = np.asarray(values[right], dtype=float)
        expected = (len(edges),) if flavor == Flavor.DISTANCE else (len(edges), m)
        if desired.shape != expected:
            raise ScenarioDimensionError(
                "graph.%s has shape %s, the %d edges need %s" % (right, desired.shape, len(edges), expected)
            )
        return FormationGraph(N, edges, m, flavor, desired)

    def buildModel(
        self, model: dict[str, Any], agent: dict[str, Any], i: int, m: int
    ) -> ManipulatorModel:
        kind = model["kind"]
        cls = MODEL_KINDS[kind]
        if cls.task_dim != m:
            raise ScenarioDimensionError("model %s works in %dD, the graph is %dD" % (kind, cls.task_dim, m))

        params = {key: list(value) for key, value in DEFAULT_PARAMS[kind].items()}
        for source, key_prefix in ((model, "model"), (agent, "agent#%d" % (i + 1))):
            for key in LINK_KEYS:
                if source.get(key) is None:
                    continue
                if key not in cls.parameter_shapes:
                    raise ScenarioBadValueError(key_prefix, key, "not a parameter of %s" % kind)
                if len(source[key]) != cls.parameter_shapes[key]:
                    raise ScenarioDimensionError(
                        "%s.%s needs %d entries, got %d"
                        % (key_prefix, key, cls.parameter_shapes[key], len(source[key]))
                    )
                params[key] = source[key]

        section = "agent#%d" % (i + 1)
        base = agent["base"]
        if len(base) != m:
            raise ScenarioDimensionError("%s.base needs %d coordinates, got %d" % (section, m, len(base)))
        if m == 2 and agent["euler"] is not None:
            raise ScenarioBadValueError(section, "euler", "only meaningful in 3D")
        R = rotation_matrix(m, agent["rotation"], agent["euler"])

        return cls(
            base_position=base,
            base_rotation=R,
            gravity_mode=GravityMode(model["gravity"]),
            g=model["g"],
            **params,
        )

    def buildNominal(self, values: dict[str, Any], model: ManipulatorModel, kind: str) -> ManipulatorModel:
        scale = values["mass_scale"]
        if not scale > 0:
            raise ScenarioBadValueError("nominal", "mass_scale", "must be positive")
        changes = {}
        for key in ("m", "I_c", "l_c"):
            if values[key] is not None and key not in model.parameter_shapes:
                raise ScenarioBadValueError("nominal", key, "not a parameter of %s" % kind)
        for key in ("m", "I_c"):
            if key in model.parameter_shapes:
                base = getattr(model, key) if values[key] is None else np.asarray(values[key])
                changes[key] = scale * np.asarray(base, dtype=float)
        if values["l_c"] is not None:
            changes["l_c"] = values["l_c"]
        return model.with_parameters(**changes)

    def buildController(
        self,
        values: dict[str, Any],
        agents: list[dict[str, Any]],
        models: list[ManipulatorModel],
        p: int,
    ) -> ControllerConfig:
        variant = Variant(values["variant"])
        if variant != Variant.PASSIVE:
            for key in ("K_P", "K_D"):
                if values[key] is None:
                    raise ScenarioMissingFieldError("controller", key)

        estimates: list[Optional[np.ndarray]] = []
        for i, agent in enumerate(agents):
            section, value = "agent#%d" % (i + 1), agent["a_hat0"]
            if value is None:
                section, value = "controller", values["a_hat0"]
            if value is not None and len(value) != p:
                raise ScenarioDimensionError("%s.a_hat0 needs %d entries, got %d" % (section, p, len(value)))
            estimates.append(None if value is None else np.asarray(value, dtype=float))

        a_hat0 = None
        if any(value is not None for value in estimates):
            a_hat0 = np.array(
                [models[i].kinematic_params if value is None else value for i, value in enumerate(estimates)]
            )
        elif variant == Variant.ADAPTIVE:
            raise ScenarioMissingFieldError("controller", "a_hat0")

        gains = Gains(
            values["K_P"] if values["K_P"] is not None else 0.0,
            values["K_D"] if values["K_D"] is not None else 0.0,
            values["K_I"],
            values["alpha"],
        )
        return ControllerConfig(
            variant,
            gains,
            a_hat0,
            EtaInit(values["eta0"]),
            Frame(values["frame"]),
            values["epsilon"],
        )

    def vector(self, values: dict[str, Any], key: str, length: int) -> np.ndarray:
        value = np.asarray(values[key], dtype=float)
        if value.shape != (length,):
            raise ScenarioDimensionError("%s needs %d entries, got %d" % (key, length, value.size))
        return value


def warn_unreachable(graph: FormationGraph, models: list[ManipulatorModel]) -> list[int]:
    """
    Logs every edge whose two bases are too far apart for the arms to ever
    realize its desired length. Returns the 1-based indices of those edges.
    """
    unreachable = []
    for k, (tail, head) in enumerate(graph.edges, start=1):
        a, b = models[tail - 1], models[head - 1]
        if graph.flavor == Flavor.DISTANCE:
            length = float(graph.desired_distances[k - 1])
        else:
            length = float(np.linalg.norm(graph.desired_vec[k - 1]))
        gap = float(np.linalg.norm(a.base_position - b.base_position))
        if gap > a.reach + b.reach + length:
            logger.warning(
                "edge %d (%d-%d): bases are %.3g m apart but the arms reach at most %.3g m;"
                " the desired %.3g m edge is unreachable",
                k,
                tail,
                head,
                gap,
                a.reach + b.reach,
                length,
            )
            unreachable.append(k)
    return unreachable
