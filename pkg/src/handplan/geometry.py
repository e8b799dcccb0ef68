"""Planar vector math and the circle / chord / triangle primitives.

Angles are plain floats in radians. Signed angles live in (-pi, pi];
magnitudes coming from an inverse cosine live in [0, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from handplan.errors import ChordTooLong, DegenerateTriangle, ZeroVector

#: Relative slack admitted before a triangle or chord is declared degenerate.
EPS_TRI = 1e-9
ZERO_NORM = 1e-12


@dataclass(frozen=True, slots=True)
class Vec2:
    """Point or vector in the working plane."""

    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"Vec2 coordinates must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def of(cls, value) -> Vec2:
        if isinstance(value, Vec2):
            return value
        x, y = value
        return cls(x, y)

    @classmethod
    def polar(cls, radius: float, angle: float) -> Vec2:
        return cls(radius * math.cos(angle), radius * math.sin(angle))

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> Vec2:
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> Vec2:
        return Vec2(self.x / s, self.y / s)

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Vec2) -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


def normalize_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.remainder(angle, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    return a


def distance(a: Vec2, b: Vec2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def chord_angle(chord: float, radius: float, eps: float = EPS_TRI) -> float:
    """Rotation magnitude that moves a point on a circle by ``chord``.

    Equal to ``arccos(1 - chord**2 / (2 * radius**2))``; evaluated as
    ``2 * asin(chord / (2 * radius))`` which keeps full precision for small
    chords.

    Raises:
        ChordTooLong: if the chord exceeds the diameter by more than ``eps``
            (relative).
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if chord < 0:
        raise ValueError("chord must be nonnegative")
    ratio = chord / (2.0 * radius)
    if ratio > 1.0 + eps:
        raise ChordTooLong(f"chord {chord:.6g} longer than diameter {2 * radius:.6g}")
    return 2.0 * math.asin(min(ratio, 1.0))


def triangle_angle(d: float, l: float, opposite: float, eps: float = EPS_TRI) -> float:
    """Angle between sides ``d`` and ``l`` of a triangle, by the law of cosines.

    The half-angle form is used so that near-flat triangles do not lose
    precision in the inverse cosine. Side-length violations up to ``eps``
    relative to the perimeter are clamped; anything larger raises
    ``DegenerateTriangle``.
    """
    if d <= 0 or l <= 0:
        raise DegenerateTriangle(f"adjacent sides must be positive, got d={d!r}, l={l!r}")
    if opposite < 0:
        raise DegenerateTriangle(f"opposite side must be nonnegative, got {opposite!r}")
    slack = eps * (d + l + opposite)
    if opposite > d + l + slack or opposite < abs(d - l) - slack:
        raise DegenerateTriangle(
            f"sides d={d:.6g}, l={l:.6g}, opposite={opposite:.6g} violate the triangle inequality"
        )
    s = 0.5 * (d + l + opposite)
    num = max(0.0, (s - d) * (s - l))
    den = max(0.0, s * (s - opposite))
    return 2.0 * math.atan2(math.sqrt(num), math.sqrt(den))


def rotate_about(p: Vec2, center: Vec2, angle: float) -> Vec2:
    c, s = math.cos(angle), math.sin(angle)
    dx, dy = p.x - center.x, p.y - center.y
    return Vec2(center.x + c * dx - s * dy, center.y + s * dx + c * dy)


def signed_turn(from_dir: Vec2, to_dir: Vec2) -> float:
    """Signed angle in (-pi, pi] turning ``from_dir`` onto ``to_dir``."""
    if from_dir.norm() < ZERO_NORM or to_dir.norm() < ZERO_NORM:
        raise ZeroVector("signed_turn needs two nonzero directions")
    a = math.atan2(from_dir.cross(to_dir), from_dir.dot(to_dir))
    return math.pi if a == -math.pi else a


def min_altitude(a: Vec2, b: Vec2, c: Vec2) -> float:
    """Smallest altitude of triangle abc (twice the area over the longest side)."""
    longest = max(distance(a, b), distance(b, c), distance(c, a))
    if longest == 0.0:
        return 0.0
    return abs((b - a).cross(c - a)) / longest
