import json
import math

import pytest

from handplan.errors import ParseError, ValidationError
from handplan.model import Roll, is_identity
from handplan.scenario_file import builtin_names, parse_scenario, resolve
from handplan.scenarios import build_scenario

MINIMAL = {
    "name": "minimal",
    "shape": {"kind": "sphere", "radius_cm": 0.5},
    "initial_pose": {"x_cm": 2.2, "y_cm": 1.7, "beta_deg": 0},
    "desired_pose": {"x_cm": 2.2, "y_cm": 1.7, "beta_deg": 0},
    "fingers": [
        {
            "id": 0,
            "base_cm": [0, 0],
            "joints_cm": [[1, 0], [2, 0]],
            "contact_cm": [2, 1],
            "lengths_cm": [1, 1, 1],
        }
    ],
}


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc, indent=2))
    return p


def test_minimal_document(tmp_path):
    spec = parse_scenario(write(tmp_path, MINIMAL))
    scene, task = build_scenario(spec)
    assert is_identity(task)
    assert len(scene.fingers) == 1
    assert scene.fingers[0].lengths == (1.0, 1.0, 1.0)


def test_negative_length_names_field(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["fingers"][0]["lengths_cm"][1] = -1
    with pytest.raises(ValidationError) as info:
        parse_scenario(write(tmp_path, doc))
    assert "fingers[0].lengths_cm[1]" in str(info.value)


def test_unknown_field_rejected(tmp_path):
    doc = dict(MINIMAL, colour="red")
    with pytest.raises(ValidationError):
        parse_scenario(write(tmp_path, doc))


def test_inconsistent_finger_rejected(tmp_path):
    doc = json.loads(json.dumps(MINIMAL))
    doc["fingers"][0]["contact_cm"] = [5, 5]
    with pytest.raises(ValidationError):
        parse_scenario(write(tmp_path, doc))


def test_parse_error_has_position(tmp_path):
    text = '{\n  "name": "x",\n  "shape": oops\n}'
    with pytest.raises(ParseError) as info:
        parse_scenario(write(tmp_path, text))
    assert info.value.line == 3
    assert info.value.column > 1


def test_ellipse_fixture_is_a_12_degree_roll():
    spec = parse_scenario("builtin:ellipse_b2f")
    _, task = build_scenario(spec)
    assert isinstance(task, Roll)
    assert math.degrees(task.phi) == pytest.approx(12)
    assert spec.initial_pose[0] == 35


def test_builtins_all_parse():
    names = builtin_names()
    for obj in ("ellipse", "sphere", "cylinder", "cone", "cube"):
        assert f"{obj}_b2f" in names
    for name in names:
        parse_scenario(f"builtin:{name}")
    assert len(resolve("builtin:benchmark")) == 5


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        resolve(tmp_path / "nope.json")
