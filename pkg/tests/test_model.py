import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from handplan.errors import ContactAtCenter
from handplan.geometry import Vec2, distance
from handplan.model import (
    ContactUpdateMode,
    FingerChain,
    GraspScene,
    ObjectPose,
    Roll,
    Translate,
    contact_target,
    displacement,
    object_target,
    reachability_check,
)

GEO, PAPER = ContactUpdateMode.GEOMETRIC, ContactUpdateMode.PAPER_LITERAL


def straight(lengths=(1, 1, 1), base=(0, 0)):
    return FingerChain.from_link_angles(base, (0, 0, 0), lengths)


def test_object_target_translate():
    assert object_target(ObjectPose(Vec2(0, 0)), Translate(Vec2(1, 2))).position == Vec2(1, 2)


def test_object_target_roll_15_degrees():
    out = object_target(ObjectPose(Vec2(5, 5), 0.0), Roll(math.radians(15)))
    assert out.position == Vec2(5, 5)
    assert out.orientation == pytest.approx(math.radians(15))


def test_object_target_identity():
    pose = ObjectPose(Vec2(3, -1), 0.4)
    assert object_target(pose, Translate(Vec2(0, 0))) == pose


def test_roll_angle_range():
    with pytest.raises(ValueError):
        Roll(4.0)
    Roll(math.pi)


def test_contact_target_translate_ignores_mode():
    f = FingerChain.from_link_angles((-1, 1), (0, 0, 0), (1, 1, 1))  # contact (2, 1)
    for mode in ContactUpdateMode:
        assert contact_target(f, ObjectPose(Vec2(9, 9)), Translate(Vec2(1, 0)), mode) == Vec2(3, 1)


def test_contact_target_roll_modes():
    f = FingerChain.from_link_angles((-2, 0), (0, 0, 0), (1, 1, 1))  # contact (1, 0)
    p = ObjectPose(Vec2(0, 0))
    lit = contact_target(f, p, Roll(math.pi / 2), PAPER)
    geo = contact_target(f, p, Roll(math.pi / 2), GEO)
    assert (lit.x, lit.y) == pytest.approx((1, 1))
    assert (geo.x, geo.y) == pytest.approx((0, 1), abs=1e-15)
    # the literal update does not keep the contact on its circle
    assert distance(lit, p.position) == pytest.approx(math.sqrt(2))


def test_contact_at_center():
    f = straight()
    with pytest.raises(ContactAtCenter):
        contact_target(f, ObjectPose(f.contact0), Roll(0.1), GEO)


@given(st.floats(-np.pi + 1e-9, np.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_geometric_roll_keeps_radius(phi, px, py):
    f = FingerChain.from_link_angles((0, 0), (0.3, 0.9, 1.4), (1, 1, 1))
    pose = ObjectPose(Vec2(px, py))
    if distance(pose.position, f.contact0) == 0:
        return
    c = contact_target(f, pose, Roll(phi), GEO)
    assert abs(distance(c, pose.position) - distance(f.contact0, pose.position)) <= 1e-12


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_translate_round_trip(dx, dy):
    f = FingerChain.from_link_angles((0, 0), (0.3, 0.9, 1.4), (1, 1, 1))
    pose = ObjectPose(Vec2(0.5, 2))
    d = Vec2(dx, dy)
    back = object_target(object_target(pose, Translate(d)), Translate(-d))
    assert distance(back.position, pose.position) <= 1e-12
    moved = contact_target(f, pose, Translate(d), GEO)
    assert distance(moved - d, f.contact0) <= 1e-12


def test_displacement_examples():
    f = FingerChain.from_link_angles((0, 0), (0.3, 0.9, 1.4), (1, 1, 1))
    q2, q3 = f.joints0
    assert displacement(f, (q2, q3)) == (0.0, 0.0)
    assert displacement(f, (q2 + Vec2(3, 4), q3)) == pytest.approx((5, 0))
    assert displacement(f, (q2 + Vec2(1, 0), q3 + Vec2(0, 2))) == pytest.approx((1, 2))


def test_reachability_examples():
    f = straight()
    assert reachability_check(f, Vec2(3, 0))
    assert not reachability_check(f, Vec2(3.01, 0))
    g = FingerChain.from_link_angles((0, 0), (0, 0, 0), (5, 1, 1))
    assert not reachability_check(g, Vec2(2.9, 0))
    assert reachability_check(g, Vec2(3.0, 0))


def test_min_reach_brute_force():
    # dense sweep over relative joint angles for lengths (5, 1, 1)
    t = np.linspace(-np.pi, np.pi, 721)
    a2, a3 = np.meshgrid(t, t)
    x = 5 + np.cos(a2) + np.cos(a2 + a3)
    y = np.sin(a2) + np.sin(a2 + a3)
    r = np.hypot(x, y)
    assert r.min() == pytest.approx(3.0, abs=1e-9)
    lo, hi = FingerChain.from_link_angles((0, 0), (0, 0, 0), (5, 1, 1)).reach()
    assert (lo, hi) == (3.0, 7.0)


def test_chain_invariants_checked():
    with pytest.raises(ValueError):
        FingerChain((0, 0), ((1, 0), (2, 0)), (3, 0), (1, 1, 1.001))
    with pytest.raises(ValueError):
        FingerChain((0, 0), ((1, 0), (2, 0)), (3, 0), (1, -1, 1))


def test_scene_invariants():
    f = straight()
    with pytest.raises(ValueError):
        GraspScene(ObjectPose(Vec2(0, 0)), [])
    with pytest.raises(ValueError):
        GraspScene(ObjectPose(Vec2(0, 0)), [f, f])
    GraspScene(ObjectPose(Vec2(4, 0)), [f])
