from .callable import CallableModel
from .elbow import SpatialElbowArm
from .manipulator import (
    Frame,
    GravityMode,
    JointState,
    ManipulatorModel,
    dynamics_terms,
    rotation_matrix,
)
from .planar import TwoLinkPlanarArm

MODEL_KINDS = {
    "planar2": TwoLinkPlanarArm,
    "elbow3": SpatialElbowArm,
}

__all__ = [
    "CallableModel",
    "Frame",
    "GravityMode",
    "JointState",
    "MODEL_KINDS",
    "ManipulatorModel",
    "SpatialElbowArm",
    "TwoLinkPlanarArm",
    "dynamics_terms",
    "rotation_matrix",
]
