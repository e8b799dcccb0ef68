"""Result files: CSV tables, an SVG workspace plot, a text report and a trace.

Numbers are written with 12 significant digits and angles in degrees, so
identical inputs and seeds give byte-identical CSV files. Every file is
written to a temporary name in the target directory and renamed into place.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from handplan import __version__
from handplan.angles import AngleMethod, JointAngles
from handplan.clustering import ClusterModel
from handplan.geometry import Vec2, rotate_about
from handplan.model import ContactUpdateMode, FingerChain, MotionTask, ObjectPose, Roll, Translate
from handplan.sampler import FingerSolution

CONFIG_HEADER = [
    "task", "finger_id", "index", "selected",
    "q1_x", "q1_y", "q2_x", "q2_y", "q3_x", "q3_y", "contact_x", "contact_y",
    "e2", "e3", "cost",
    "theta1_paper_deg", "theta2_paper_deg", "theta3_paper_deg",
    "theta1_direct_deg", "theta2_direct_deg", "theta3_direct_deg",
]
WEIGHTS_HEADER = ["kind", "configuration", "finger_id", "cost", "gamma_i", "gamma", "motion"]
CLUSTERS_HEADER = ["record", "cluster", "sample", "dim", "value"]
TRACE_HEADER = [
    "step", "t", "finger_id", "object_x", "object_y", "object_theta_deg",
    "contact_x", "contact_y", "contact_displacement", "theta1_deg", "theta2_deg", "theta3_deg",
]
FILES = ("configurations.csv", "weights.csv", "clusters.csv", "workspace.svg", "report.txt", "trace.csv")
TRACE_STEPS = 24


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x == 0.0:
        return "0"
    return format(x, ".12g")


@dataclass
class ConfigRow:
    task: int
    index: int
    solution: FingerSolution
    selected: bool = False


@dataclass
class Drawing:
    """What the workspace plot shows."""

    outlines: list[tuple[list[Vec2], str]] = field(default_factory=list)
    initial_chains: list[tuple[Vec2, ...]] = field(default_factory=list)
    cloud: list[Vec2] = field(default_factory=list)
    selected_chains: list[tuple[Vec2, ...]] = field(default_factory=list)


@dataclass
class Bundle:
    configurations: list[ConfigRow] = field(default_factory=list)
    weights: list[tuple] = field(default_factory=list)
    clusters: ClusterModel | None = None
    drawing: Drawing = field(default_factory=Drawing)
    report: str = ""
    trace: list[tuple] = field(default_factory=list)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


def _angles_deg(sol: FingerSolution, method: AngleMethod):
    a = sol.angles.get(method)
    if a is None:
        return [None] * 3
    return [math.degrees(v) for v in a.as_tuple()]


def configurations_csv(rows: list[ConfigRow]) -> str:
    out = []
    for r in rows:
        s = r.solution
        q1, q2, q3 = s.joints
        out.append(
            [r.task, s.finger_id, r.index, r.selected, q1.x, q1.y, q2.x, q2.y, q3.x, q3.y,
             s.contact.x, s.contact.y, s.displacements[0], s.displacements[1], s.cost,
             *_angles_deg(s, AngleMethod.PAPER_LAW_OF_COSINES),
             *_angles_deg(s, AngleMethod.DIRECT_FROM_POSITIONS)]
        )
    return _csv_text(CONFIG_HEADER, out)


def clusters_csv(model: ClusterModel | None, features=None) -> str:
    rows = []
    if model is not None:
        for j, c in enumerate(model.centroids):
            for d, v in enumerate(c):
                rows.append(["centroid", j, None, d, v])
        for s, j in enumerate(model.assignments):
            dist = None
            if features is not None:
                dist = math.dist(features[s], model.centroids[j])
            rows.append(["assignment", int(j), s, None, dist])
    return _csv_text(CLUSTERS_HEADER, rows)


def render_svg(drawing: Drawing) -> str:
    pts = [p for outline, _ in drawing.outlines for p in outline]
    pts += [p for ch in drawing.initial_chains + drawing.selected_chains for p in ch]
    pts += drawing.cloud
    if pts:
        xs, ys = [p.x for p in pts], [p.y for p in pts]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    pad = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    w, h = x1 - x0, y1 - y0
    stroke = fmt(0.004 * max(w, h))
    dot = fmt(0.004 * max(w, h))

    def path(points):
        return " ".join(f"{fmt(p.x)},{fmt(-p.y)}" for p in points)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- generator: handplan {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{fmt(x0)} {fmt(-y1)} {fmt(w)} {fmt(h)}" width="640" height="{int(640 * h / w)}">',
    ]
    for outline, style in drawing.outlines:
        dash = ' stroke-dasharray="0.2,0.2"' if style == "target" else ""
        lines.append(f'<polygon points="{path(outline)}" fill="none" stroke="black" stroke-width="{stroke}"{dash}/>')
    lines.append('<g fill="#888888">')
    lines += [f'<circle cx="{fmt(p.x)}" cy="{fmt(-p.y)}" r="{dot}"/>' for p in drawing.cloud]
    lines.append("</g>")
    for ch in drawing.initial_chains:
        lines.append(f'<polyline points="{path(ch)}" fill="none" stroke="#cc2222" stroke-width="{stroke}"/>')
    for ch in drawing.selected_chains:
        lines.append(f'<polyline points="{path(ch)}" fill="none" stroke="#2244cc" stroke-width="{stroke}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def trace_rows(
    fingers: list[FingerChain],
    object0: ObjectPose,
    task: MotionTask,
    selected: list[FingerSolution],
    mode: ContactUpdateMode,
    steps: int = TRACE_STEPS,
) -> list[tuple]:
    """Planned object and contact positions and joint values over normalized time."""
    rows = []
    for n in range(steps + 1):
        t = n / steps
        if isinstance(task, Translate):
            pos, theta = object0.position + task.delta * t, object0.orientation
        else:
            pos, theta = object0.position, object0.orientation + task.phi * t
        for f, sol in zip(fingers, selected):
            if isinstance(task, Roll) and mode is ContactUpdateMode.GEOMETRIC:
                c = rotate_about(f.contact0, object0.position, task.phi * t)
            else:
                c = f.contact0 + (sol.contact - f.contact0) * t
            a = sol.angles.get(AngleMethod.DIRECT_FROM_POSITIONS)
            th = [math.degrees(v) * t for v in a.as_tuple()] if a else [None] * 3
            rows.append((n, t, f.id, pos.x, pos.y, math.degrees(theta), c.x, c.y, (c - f.contact0).norm(), *th))
    return rows


def bundle_texts(bundle: Bundle, features=None) -> dict[str, str]:
    return {
        "configurations.csv": configurations_csv(bundle.configurations),
        "weights.csv": _csv_text(WEIGHTS_HEADER, bundle.weights),
        "clusters.csv": clusters_csv(bundle.clusters, features),
        "workspace.svg": render_svg(bundle.drawing),
        "report.txt": bundle.report,
        "trace.csv": _csv_text(TRACE_HEADER, bundle.trace),
    }


def write_atomic(path: Path, text: str) -> int:
    path = Path(path)
    data = text.encode("utf-8")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return len(data)


def emit_bundle(bundle: Bundle, output_dir, features=None, only=None) -> list[tuple[Path, int]]:
    """Write the bundle files; returns ``(path, size)`` for each one written."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for name, text in bundle_texts(bundle, features).items():
        if only is not None and name not in only:
            continue
        manifest.append((out / name, write_atomic(out / name, text)))
    return manifest


def _f(s: str) -> float | None:
    return float(s) if s != "" else None


def read_configurations(path) -> list[ConfigRow]:
    """Parse a configurations.csv back into solutions with their joint values."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CONFIG_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for r in reader:
            angles = {}
            for method, tag in ((AngleMethod.PAPER_LAW_OF_COSINES, "paper"), (AngleMethod.DIRECT_FROM_POSITIONS, "direct")):
                vals = [_f(r[f"theta{j}_{tag}_deg"]) for j in (1, 2, 3)]
                if None not in vals:
                    angles[method] = JointAngles(*(math.radians(v) for v in vals), method)
            sol = FingerSolution(
                finger_id=int(r["finger_id"]),
                joints=tuple(Vec2(float(r[f"q{j}_x"]), float(r[f"q{j}_y"])) for j in (1, 2, 3)),
                contact=Vec2(float(r["contact_x"]), float(r["contact_y"])),
                displacements=(float(r["e2"]), float(r["e3"])),
                cost=float(r["cost"]),
                angles=angles,
            )
            rows.append(ConfigRow(int(r["task"]), int(r["index"]), sol, r["selected"] == "1"))
    return rows
