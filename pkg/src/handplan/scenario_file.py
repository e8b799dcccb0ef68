"""Scenario documents (JSON) to ``ScenarioSpec``.

Lengths are given in centimeters and angles in degrees, each field name
carrying its unit suffix; the working plane uses centimeters and radians.
The schema ships as ``fixtures/scenario.schema.json`` next to the built-in
scenarios.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from handplan.errors import ParseError, ValidationError
from handplan.model import FingerChain
from handplan.scenarios import DEFAULT_LENGTHS, ObjectShape, ScenarioSpec, ShapeKind

BUILTIN_PREFIX = "builtin:"
_FIXTURES = "fixtures"


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("handplan").joinpath(_FIXTURES, "scenario.schema.json").read_text()
    return json.loads(text)


def builtin_names() -> list[str]:
    folder = resources.files("handplan").joinpath(_FIXTURES)
    return sorted(
        p.name[: -len(".json")]
        for p in folder.iterdir()
        if p.name.endswith(".json") and not p.name.endswith(".schema.json")
    )


def resolve(path) -> list[Path]:
    """Scenario files named by ``path``.

    Accepts a file, a directory of ``*.json`` files, ``builtin:NAME`` or
    ``builtin:benchmark`` (the five benchmark objects).
    """
    text = str(path)
    if text.startswith(BUILTIN_PREFIX):
        name = text[len(BUILTIN_PREFIX):]
        folder = resources.files("handplan").joinpath(_FIXTURES)
        if name == "benchmark":
            names = [f"{o}_b2f" for o in ("ellipse", "sphere", "cylinder", "cone", "cube")]
        elif name in builtin_names():
            names = [name]
        else:
            raise FileNotFoundError(f"no built-in scenario {name!r}; available: {', '.join(builtin_names())}")
        return [Path(str(folder.joinpath(n + ".json"))) for n in names]
    p = Path(text)
    if p.is_dir():
        files = sorted(f for f in p.glob("*.json") if not f.name.endswith(".schema.json"))
        if not files:
            raise FileNotFoundError(f"{p}: no scenario files")
        return files
    if not p.is_file():
        raise FileNotFoundError(f"{p}: no such scenario file")
    return [p]


def _field(path) -> str:
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<document>"


def _pose(d: dict):
    return (
        float(d["x_cm"]),
        float(d["y_cm"]),
        float(d.get("z_cm", 0.0)),
        math.radians(d.get("rho_deg", 0.0)),
        math.radians(d["beta_deg"]),
        math.radians(d.get("gamma_deg", 0.0)),
    )


def _shape(d: dict) -> ObjectShape:
    kind = ShapeKind(d["kind"])
    if kind is ShapeKind.ELLIPSE:
        dims = d["semi_axes_cm"]
    elif kind is ShapeKind.CONE:
        dims = (d["base_cm"], d["height_cm"])
    elif kind is ShapeKind.CUBE:
        dims = (d["side_cm"],)
    else:
        dims = (d["radius_cm"],)
    return ObjectShape(kind, tuple(dims))


def spec_from_dict(doc: dict) -> ScenarioSpec:
    """Validate a decoded scenario document and build a ScenarioSpec.

    Raises:
        ValidationError: naming the offending field.
    """
    validator = jsonschema.Draft202012Validator(schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise ValidationError(_field(error.absolute_path), error.message)

    fingers = []
    for i, f in enumerate(doc.get("fingers", [])):
        try:
            fingers.append(
                FingerChain(
                    base=tuple(f["base_cm"]),
                    joints0=tuple(tuple(q) for q in f["joints_cm"]),
                    contact0=tuple(f["contact_cm"]),
                    lengths=tuple(f["lengths_cm"]),
                    id=f.get("id", i),
                )
            )
        except ValueError as exc:
            raise ValidationError(f"fingers[{i}]", str(exc)) from exc
    if not fingers and "case" not in doc:
        raise ValidationError("case", "required when no explicit fingers are given")
    try:
        return ScenarioSpec(
            name=doc["name"],
            shape=_shape(doc["shape"]),
            initial_pose=_pose(doc["initial_pose"]),
            desired_pose=_pose(doc["desired_pose"]),
            case_label=doc.get("case", "B2F"),
            lengths=tuple(doc.get("link_lengths_cm", DEFAULT_LENGTHS)),
            fingers=tuple(fingers),
        )
    except ValueError as exc:
        raise ValidationError("<document>", str(exc)) from exc


def parse_scenario(path) -> ScenarioSpec:
    """Read and validate one scenario file (or ``builtin:NAME``).

    Raises:
        ParseError: malformed JSON, with line and column.
        ValidationError: schema or invariant violation, naming the field.
    """
    (p,) = resolve(path) if str(path).startswith(BUILTIN_PREFIX) else (Path(path),)
    text = p.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, p, exc.lineno, exc.colno) from exc
    return spec_from_dict(doc)
