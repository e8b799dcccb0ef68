"""Joint values from joint positions.

Two recoveries are offered. ``PAPER_LAW_OF_COSINES`` works joint by joint
with chord and law-of-cosines triangles, adding a sign from the 2-D cross
product. ``DIRECT_FROM_POSITIONS`` takes the change of each relative link
angle, which is what a planar chain actually executes; together with
``forward_kinematics`` it round-trips exactly.

All returned angles are deltas from the initial configuration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from handplan.errors import OffCircle
from handplan.geometry import (
    Vec2,
    chord_angle,
    distance,
    normalize_angle,
    signed_turn,
    triangle_angle,
)
from handplan.model import FingerChain

LINK_RTOL = 1e-6


class AngleMethod(enum.Enum):
    PAPER_LAW_OF_COSINES = "paper"
    DIRECT_FROM_POSITIONS = "direct"


@dataclass(frozen=True)
class JointAngles:
    theta1: float
    theta2: float
    theta3: float
    method: AngleMethod

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)


def _check_link(a: Vec2, b: Vec2, length: float, what: str):
    got = distance(a, b)
    if abs(got - length) > LINK_RTOL * length:
        raise OffCircle(f"{what}: link spans {got:.9g}, expected {length:.9g}")


def _signed(magnitude: float, from_dir: Vec2, to_dir: Vec2) -> float:
    if magnitude == 0.0:
        return 0.0
    turn = signed_turn(from_dir, to_dir)
    return magnitude if turn >= 0 else -magnitude


def base_angle(finger: FingerChain, q2_new: Vec2) -> float:
    """Rotation of the first link about the fixed palm joint.

    The magnitude is the chord angle of the second joint's displacement on
    the circle of radius l1 around the base.
    """
    base, q20 = finger.base, finger.joints0[0]
    l1 = finger.lengths[0]
    _check_link(base, q2_new, l1, f"finger {finger.id} base link")
    mag = chord_angle(distance(q2_new, q20), l1, eps=LINK_RTOL)
    return _signed(mag, q20 - base, q2_new - base)


def interior_angle(q_j_new: Vec2, q_next_old: Vec2, q_next_new: Vec2, link_length: float) -> float:
    """Angle at the new joint position between the old and new positions of the next joint."""
    _check_link(q_j_new, q_next_new, link_length, "interior link")
    mag = triangle_angle(
        distance(q_next_old, q_j_new), link_length, distance(q_next_new, q_next_old)
    )
    return _signed(mag, q_next_old - q_j_new, q_next_new - q_j_new)


def distal_angle(q3_new: Vec2, contact_old: Vec2, contact_new: Vec2, l3: float) -> float:
    """Same triangle as ``interior_angle`` with the contact point as the far end."""
    return interior_angle(q3_new, contact_old, contact_new, l3)


def link_angles(points) -> tuple[float, float, float]:
    """Absolute directions of the three links of a chain given as four points."""
    return tuple((b - a).angle() for a, b in zip(points[:-1], points[1:]))


def recover_all(finger: FingerChain, solution, method: AngleMethod) -> JointAngles:
    _, q2, q3 = solution.joints
    c = solution.contact
    l1, l2, l3 = finger.lengths
    if method is AngleMethod.PAPER_LAW_OF_COSINES:
        return JointAngles(
            base_angle(finger, q2),
            interior_angle(q2, finger.joints0[1], q3, l2),
            distal_angle(q3, finger.contact0, c, l3),
            method,
        )
    _check_link(finger.base, q2, l1, f"finger {finger.id} base link")
    _check_link(q2, q3, l2, f"finger {finger.id} middle link")
    _check_link(q3, c, l3, f"finger {finger.id} distal link")
    old = finger.points0
    new = (finger.base, q2, q3, c)
    turns = [signed_turn(a1 - a0, b1 - b0) for a0, a1, b0, b1 in zip(old[:-1], old[1:], new[:-1], new[1:])]
    return JointAngles(
        turns[0],
        normalize_angle(turns[1] - turns[0]),
        normalize_angle(turns[2] - turns[1]),
        method,
    )


def forward_kinematics(base: Vec2, angles, lengths) -> tuple[Vec2, Vec2, Vec2]:
    """Planar chain positions from absolute (cumulative) link angles."""
    pts = [Vec2.of(base)]
    for a, l in zip(angles, lengths):
        pts.append(pts[-1] + Vec2.polar(l, a))
    return pts[1], pts[2], pts[3]


def apply_deltas(finger: FingerChain, angles: JointAngles) -> tuple[Vec2, Vec2, Vec2]:
    """Run the initial chain forward after adding relative joint deltas."""
    a0 = link_angles(finger.points0)
    d = angles.as_tuple()
    absolute = (a0[0] + d[0], a0[1] + d[0] + d[1], a0[2] + d[0] + d[1] + d[2])
    return forward_kinematics(finger.base, absolute, finger.lengths)


@dataclass(frozen=True)
class MethodComparison:
    """Per-joint gap between the two recoveries, plus the literal-index reading.

    ``literal_arguments`` are the inverse-cosine arguments obtained when the
    chord in the interior and distal formulas is taken as the displacement of
    the vertex joint itself rather than of the far endpoint; values outside
    [-1, 1] mean that reading has no real solution.
    """

    paper: JointAngles
    direct: JointAngles
    differences: tuple[float, float, float]
    literal_arguments: tuple[float, float]

    @property
    def literal_defined(self) -> bool:
        return all(-1.0 <= a <= 1.0 for a in self.literal_arguments)


def _literal_argument(vertex_new: Vec2, far_old: Vec2, vertex_disp: float, length: float) -> float:
    d = distance(far_old, vertex_new)
    if d == 0:
        return math.nan
    return (d * d - vertex_disp * vertex_disp + length * length) / (2.0 * d * length)


def compare_methods(finger: FingerChain, solution) -> MethodComparison:
    paper = recover_all(finger, solution, AngleMethod.PAPER_LAW_OF_COSINES)
    direct = recover_all(finger, solution, AngleMethod.DIRECT_FROM_POSITIONS)
    diffs = tuple(abs(normalize_angle(p - d)) for p, d in zip(paper.as_tuple(), direct.as_tuple()))
    _, q2, q3 = solution.joints
    e2, e3 = solution.displacements
    literal = (
        _literal_argument(q2, finger.joints0[1], e2, finger.lengths[1]),
        _literal_argument(q3, finger.contact0, e3, finger.lengths[2]),
    )
    return MethodComparison(paper, direct, diffs, literal)
