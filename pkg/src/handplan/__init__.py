"""Planar multi-finger kinematics for coordinated translation and rolling of a grasped object."""

__version__ = "0.1.0"

from handplan.geometry import Vec2  # noqa: E402
from handplan.model import (  # noqa: E402
    ContactUpdateMode,
    FingerChain,
    GraspScene,
    ObjectPose,
    Roll,
    Translate,
)
from handplan.planner import plan  # noqa: E402
from handplan.sampler import SamplerConfig, Strategy, sample_finger, workspace_sweep  # noqa: E402

__all__ = [
    "ContactUpdateMode",
    "FingerChain",
    "GraspScene",
    "ObjectPose",
    "Roll",
    "SamplerConfig",
    "Strategy",
    "Translate",
    "Vec2",
    "plan",
    "sample_finger",
    "workspace_sweep",
]
