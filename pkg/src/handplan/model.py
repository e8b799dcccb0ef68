"""Hand-object plane: finger chains, object pose, motion tasks.

Computes where the object and each contact point must go for a coordinated
translation or for a rolling motion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

from handplan.errors import ContactAtCenter
from handplan.geometry import Vec2, distance, normalize_angle, rotate_about

LENGTH_RTOL = 1e-9


class ContactUpdateMode(enum.Enum):
    """How a rolling motion moves the contact points.

    ``PAPER_LITERAL`` shifts each contact by its distance to the object center
    along the direction of the rolling angle. ``GEOMETRIC`` rotates the contact
    rigidly about the object center, which keeps the contact-to-center
    distance fixed.
    """

    PAPER_LITERAL = "paper"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class Translate:
    delta: Vec2

    def __post_init__(self):
        object.__setattr__(self, "delta", Vec2.of(self.delta))


@dataclass(frozen=True)
class Roll:
    phi: float

    def __post_init__(self):
        phi = float(self.phi)
        if not (math.isfinite(phi) and -math.pi < phi <= math.pi):
            raise ValueError(f"roll angle must lie in (-pi, pi], got {self.phi!r}")
        object.__setattr__(self, "phi", phi)


MotionTask = Union[Translate, Roll]


def is_identity(task: MotionTask) -> bool:
    if isinstance(task, Translate):
        return task.delta.x == 0.0 and task.delta.y == 0.0
    return task.phi == 0.0


@dataclass(frozen=True)
class ObjectPose:
    position: Vec2
    orientation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", Vec2.of(self.position))
        if not math.isfinite(self.orientation):
            raise ValueError("orientation must be finite")


@dataclass(frozen=True)
class FingerChain:
    """Three-link planar finger pinned at a fixed palm joint.

    Attributes:
        base: palm joint, never moves.
        joints0: initial positions of the second and third joints.
        contact0: initial fingertip contact point.
        lengths: link lengths, base to tip.
        id: finger index.
    """

    base: Vec2
    joints0: tuple[Vec2, Vec2]
    contact0: Vec2
    lengths: tuple[float, float, float]
    id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "base", Vec2.of(self.base))
        object.__setattr__(self, "joints0", tuple(Vec2.of(q) for q in self.joints0))
        object.__setattr__(self, "contact0", Vec2.of(self.contact0))
        object.__setattr__(self, "lengths", tuple(float(l) for l in self.lengths))
        if len(self.joints0) != 2 or len(self.lengths) != 3:
            raise ValueError("a finger has two movable joints and three links")
        if any(not (l > 0 and math.isfinite(l)) for l in self.lengths):
            raise ValueError(f"finger {self.id}: link lengths must be positive, got {self.lengths}")
        for k, (a, b) in enumerate(zip(self.points0[:-1], self.points0[1:])):
            got = distance(a, b)
            if abs(got - self.lengths[k]) > LENGTH_RTOL * self.lengths[k]:
                raise ValueError(
                    f"finger {self.id}: link {k + 1} spans {got:.12g}, stored length {self.lengths[k]:.12g}"
                )

    @classmethod
    def from_link_angles(cls, base, angles, lengths, id=0) -> FingerChain:
        """Build a chain from absolute link directions (radians)."""
        pts = [Vec2.of(base)]
        for a, l in zip(angles, lengths):
            pts.append(pts[-1] + Vec2.polar(l, a))
        return cls(base=pts[0], joints0=(pts[1], pts[2]), contact0=pts[3], lengths=tuple(lengths), id=id)

    @property
    def points0(self) -> tuple[Vec2, Vec2, Vec2, Vec2]:
        return (self.base, self.joints0[0], self.joints0[1], self.contact0)

    @property
    def total_length(self) -> float:
        return sum(self.lengths)

    def reach(self) -> tuple[float, float]:
        """Closed interval of base-to-tip distances the chain can realize."""
        lmax = max(self.lengths)
        return max(0.0, 2.0 * lmax - self.total_length), self.total_length


@dataclass(frozen=True)
class GraspScene:
    object0: ObjectPose
    fingers: tuple[FingerChain, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "fingers", tuple(self.fingers))
        if not 1 <= len(self.fingers) <= 4:
            raise ValueError(f"a grasp uses 1 to 4 fingers, got {len(self.fingers)}")
        ids = [f.id for f in self.fingers]
        if len(set(ids)) != len(ids):
            raise ValueError(f"finger ids must be unique, got {ids}")
        for f in self.fingers:
            if not reachability_check(f, f.contact0):
                raise ValueError(f"finger {f.id}: initial contact outside the finger's reach")


def object_target(object0: ObjectPose, task: MotionTask) -> ObjectPose:
    if isinstance(task, Translate):
        return ObjectPose(object0.position + task.delta, object0.orientation)
    return ObjectPose(object0.position, normalize_angle(object0.orientation + task.phi))


def contact_target(
    finger: FingerChain,
    object0: ObjectPose,
    task: MotionTask,
    mode: ContactUpdateMode = ContactUpdateMode.GEOMETRIC,
) -> Vec2:
    """New contact position for one finger.

    Translations carry the contact rigidly with the object whatever the mode.
    """
    c0 = finger.contact0
    if isinstance(task, Translate):
        return c0 + task.delta
    center = object0.position
    radius = distance(center, c0)
    if radius == 0.0:
        raise ContactAtCenter(f"finger {finger.id}: contact coincides with the object center")
    if mode is ContactUpdateMode.PAPER_LITERAL:
        return c0 + Vec2.polar(radius, task.phi)
    return rotate_about(c0, center, task.phi)


def displacement(finger: FingerChain, candidate_joints) -> tuple[float, float]:
    """Displacements (e2, e3) of the two movable joints from their initial positions."""
    q2, q3 = (Vec2.of(q) for q in candidate_joints)
    return distance(q2, finger.joints0[0]), distance(q3, finger.joints0[1])


def reachability_check(finger: FingerChain, contact_target: Vec2) -> bool:
    lo, hi = finger.reach()
    r = distance(finger.base, contact_target)
    tol = 1e-12 * finger.total_length
    return lo - tol <= r <= hi + tol
