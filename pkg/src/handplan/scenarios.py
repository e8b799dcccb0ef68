"""Object shapes, grasp synthesis and run metrics for the benchmark scenarios.

Each scenario gives an object, a six-value initial and desired pose
(x, y, z, rho, beta, gamma) and a finger layout. Only (x, y) and beta act in
the working plane; z, rho and gamma are kept for reference.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from handplan.angles import AngleMethod, apply_deltas
from handplan.errors import HandPlanError, InfeasibleGrasp
from handplan.geometry import Vec2, normalize_angle, rotate_about, signed_turn
from handplan.model import (
    ContactUpdateMode,
    FingerChain,
    GraspScene,
    MotionTask,
    ObjectPose,
    Roll,
    Translate,
    is_identity,
)
from handplan.planner import ManipulationPlan, plan as make_plan
from handplan.sampler import SamplerConfig, derive_seed

DEFAULT_LENGTHS = (5.4, 3.8, 4.4)
SUCCESS_THRESHOLD = 0.15
CASE_LABELS = ("2F", "3F", "B2F")

# contact parameters (deg, object frame) and curl direction per finger
_LAYOUTS = {
    "2F": ((0.0, 1), (180.0, 1)),
    "3F": ((0.0, 1), (120.0, 1), (240.0, 1)),
    "B2F": ((-20.0, 1), (20.0, -1), (160.0, 1), (200.0, -1)),
}
# absolute link directions relative to the contact-to-centroid direction, tip link first
_CURL_DEG = (10.0, 50.0, 90.0)


class ShapeKind(enum.Enum):
    ELLIPSE = "ellipse"
    SPHERE = "sphere"
    CYLINDER = "cylinder"
    CONE = "cone"
    CUBE = "cube"


@dataclass(frozen=True)
class ObjectShape:
    """Object with its planar cross-section.

    ``dims`` holds (a, b) semi-axes for an ellipse, (r,) for a sphere or
    cylinder, (base, height) for the cone's isosceles triangle and (side,)
    for the cube's square.
    """

    kind: ShapeKind
    dims: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", ShapeKind(self.kind))
        object.__setattr__(self, "dims", tuple(float(d) for d in self.dims))
        expected = {ShapeKind.ELLIPSE: 2, ShapeKind.CONE: 2}.get(self.kind, 1)
        if len(self.dims) != expected:
            raise ValueError(f"{self.kind.value} needs {expected} dimension(s), got {self.dims}")
        if any(not (d > 0 and math.isfinite(d)) for d in self.dims):
            raise ValueError(f"shape dimensions must be positive, got {self.dims}")

    @property
    def is_polygon(self) -> bool:
        return self.kind in (ShapeKind.CONE, ShapeKind.CUBE)

    def vertices(self) -> list[Vec2]:
        """Polygon corners in the object frame, counter-clockwise, centroid at the origin."""
        if self.kind is ShapeKind.CUBE:
            h = self.dims[0] / 2
            return [Vec2(h, -h), Vec2(h, h), Vec2(-h, h), Vec2(-h, -h)]
        if self.kind is ShapeKind.CONE:
            b, h = self.dims
            return [Vec2(b / 2, -h / 3), Vec2(0.0, 2 * h / 3), Vec2(-b / 2, -h / 3)]
        raise ValueError(f"{self.kind.value} is not a polygon")

    def local_boundary(self, param: float) -> tuple[Vec2, Vec2]:
        """Boundary point and outward unit normal in the object frame.

        Smooth profiles use the usual angular parameter; polygons use the
        direction of a ray from the centroid.
        """
        if self.kind is ShapeKind.ELLIPSE:
            a, b = self.dims
            p = Vec2(a * math.cos(param), b * math.sin(param))
            n = Vec2(b * math.cos(param), a * math.sin(param))
            return p, n / n.norm()
        if not self.is_polygon:
            r = self.dims[0]
            u = Vec2.polar(1.0, param)
            return u * r, u
        u = Vec2.polar(1.0, param)
        verts = self.vertices()
        best = None
        for a, b in zip(verts, verts[1:] + verts[:1]):
            e = b - a
            den = u.cross(e)
            if abs(den) < 1e-15:
                continue
            t = a.cross(e) / den
            s = a.cross(u) / den
            if t > 0 and -1e-12 <= s <= 1 + 1e-12 and (best is None or t < best[0]):
                best = (t, e)
        t, e = best
        n = Vec2(e.y, -e.x)
        return u * t, n / n.norm()

    def boundary(self, param: float, pose: ObjectPose) -> tuple[Vec2, Vec2]:
        p, n = self.local_boundary(param)
        origin = Vec2(0.0, 0.0)
        return (
            rotate_about(p, origin, pose.orientation) + pose.position,
            rotate_about(n, origin, pose.orientation),
        )

    def boundary_residual(self, point: Vec2, pose: ObjectPose) -> float:
        """Distance-like residual of ``point`` from the profile boundary (0 on it)."""
        q = rotate_about(point - pose.position, Vec2(0.0, 0.0), -pose.orientation)
        if self.kind is ShapeKind.ELLIPSE:
            a, b = self.dims
            return abs(math.hypot(q.x / a, q.y / b) - 1.0) * min(a, b)
        if not self.is_polygon:
            return abs(q.norm() - self.dims[0])
        verts = self.vertices()
        best = math.inf
        for a, b in zip(verts, verts[1:] + verts[:1]):
            e = b - a
            s = min(1.0, max(0.0, (q - a).dot(e) / e.dot(e)))
            best = min(best, (q - (a + e * s)).norm())
        return best

    def outline(self, pose: ObjectPose, n: int = 96) -> list[Vec2]:
        origin = Vec2(0.0, 0.0)
        if self.is_polygon:
            pts = self.vertices()
        else:
            pts = [self.local_boundary(2 * math.pi * i / n)[0] for i in range(n)]
        return [rotate_about(p, origin, pose.orientation) + pose.position for p in pts]


Pose6 = tuple[float, float, float, float, float, float]


@dataclass(frozen=True)
class ScenarioSpec:
    """One benchmark scenario.

    Poses are (x, y, z, rho, beta, gamma) with lengths in the working unit
    and angles in radians. ``fingers`` overrides grasp synthesis when given.
    """

    name: str
    shape: ObjectShape
    initial_pose: Pose6
    desired_pose: Pose6
    case_label: str = "B2F"
    lengths: tuple[float, float, float] = DEFAULT_LENGTHS
    fingers: tuple[FingerChain, ...] = ()

    def __post_init__(self):
        if not self.fingers and self.case_label not in CASE_LABELS:
            raise ValueError(f"case label must be one of {CASE_LABELS}, got {self.case_label!r}")

    def planar_pose(self, which: str = "initial") -> ObjectPose:
        x, y, _, _, beta, _ = self.initial_pose if which == "initial" else self.desired_pose
        return ObjectPose(Vec2(x, y), beta)


def synthesize_finger(contact: Vec2, center: Vec2, lengths, curl: int, id: int) -> FingerChain:
    """Bent three-link finger whose tip link points from ``contact`` roughly at ``center``.

    Keeping the tip link close to the radial direction makes a roll move the
    contact across the link rather than along it, which leaves the cost band
    reachable for small rolls.
    """
    inward = (center - contact).angle()
    dirs = [inward + curl * math.radians(a) for a in _CURL_DEG]  # tip link first
    l1, l2, l3 = lengths
    q3 = contact - Vec2.polar(l3, dirs[0])
    q2 = q3 - Vec2.polar(l2, dirs[1])
    base = q2 - Vec2.polar(l1, dirs[2])
    return FingerChain(base=base, joints0=(q2, q3), contact0=contact, lengths=(l1, l2, l3), id=id)


def planar_task(spec: ScenarioSpec) -> MotionTask:
    (x0, y0, *_r0), (x1, y1, *_r1) = spec.initial_pose, spec.desired_pose
    dxy = Vec2(x1 - x0, y1 - y0)
    dbeta = normalize_angle(spec.desired_pose[4] - spec.initial_pose[4])
    if dbeta != 0.0 and (dxy.x != 0.0 or dxy.y != 0.0):
        raise ValueError(f"{spec.name}: combined translation and roll is not supported")
    if dbeta != 0.0:
        return Roll(dbeta)
    return Translate(dxy)


def build_scenario(spec: ScenarioSpec) -> tuple[GraspScene, MotionTask]:
    pose = spec.planar_pose()
    task = planar_task(spec)
    if spec.fingers:
        fingers = spec.fingers
    else:
        fingers = []
        for i, (param_deg, curl) in enumerate(_LAYOUTS[spec.case_label]):
            c, _ = spec.shape.boundary(math.radians(param_deg), pose)
            fingers.append(synthesize_finger(c, pose.position, spec.lengths, curl, i))
    try:
        scene = GraspScene(pose, fingers)
    except ValueError as exc:
        raise InfeasibleGrasp(f"{spec.name}: {exc}") from exc
    return scene, task


def fit_rigid_motion(center: Vec2, old, new) -> tuple[Vec2, float]:
    """Least-squares rigid motion taking ``old`` points to ``new``.

    Returns ``(translation, rotation)`` such that each new point is
    ``center + R(rotation) (p - center) + translation``. The rotation comes
    from the centered point sets; a single point can only be explained as a
    translation.
    """
    old = [Vec2.of(p) for p in old]
    new = [Vec2.of(p) for p in new]
    if len(old) != len(new) or not old:
        raise ValueError("need matching, nonempty point sets")
    m_old = Vec2(float(np.mean([p.x for p in old])), float(np.mean([p.y for p in old])))
    m_new = Vec2(float(np.mean([p.x for p in new])), float(np.mean([p.y for p in new])))
    s_cross = s_dot = 0.0
    for a, b in zip(old, new):
        u, v = a - m_old, b - m_new
        s_cross += u.cross(v)
        s_dot += u.dot(v)
    rotation = math.atan2(s_cross, s_dot) if (s_cross or s_dot) else 0.0
    translation = m_new - center - rotate_about(m_old, center, rotation) + center
    return translation, rotation


@dataclass
class RunMetrics:
    relative_error: float
    success: bool
    attempts: int = 0
    acceptance_rate: float = 0.0
    wall_time: float = 0.0
    achieved: float = 0.0
    desired: float = 0.0
    paper_angle_error: float | None = None
    diagnostics: str = ""


def motion_error(task: MotionTask, center: Vec2, old, new) -> tuple[float, float, float]:
    """Relative error of the rigid motion fitted to contacts ``old`` -> ``new``.

    Returns ``(relative_error, achieved, desired)`` where the motion is a
    translation length or a rotation angle depending on the task.
    """
    if isinstance(task, Roll) and len(old) == 1:
        rotation = signed_turn(old[0] - center, new[0] - center)
        return abs(rotation - task.phi) / abs(task.phi), rotation, task.phi
    shift, rotation = fit_rigid_motion(center, old, new)
    if isinstance(task, Translate):
        want = task.delta.norm()
        return (shift - task.delta).norm() / want, shift.norm(), want
    return abs(rotation - task.phi) / abs(task.phi), rotation, task.phi


def evaluate(result, spec: ScenarioSpec | None = None, threshold: float = SUCCESS_THRESHOLD) -> RunMetrics:
    """Kinematic error of a plan, or failure metrics for a planning exception.

    The achieved object motion is the rigid fit of the selected contacts,
    old to new. A failed plan achieves no motion, so its relative error is 1.
    ``paper_angle_error`` repeats the fit with contacts obtained by running
    the initial chains forward under the law-of-cosines joint values.
    """
    if not isinstance(result, ManipulationPlan):
        attempts = 0
        stats = getattr(result, "stats", None)
        if stats is not None:
            attempts = stats.attempts
        return RunMetrics(1.0, False, attempts=attempts, diagnostics=f"{type(result).__name__}: {result}")
    p = result
    attempts = p.attempts
    accepted = sum(s.accepted for s in p.stats)
    rate = accepted / attempts if attempts else 0.0
    if is_identity(p.task):
        return RunMetrics(0.0, True, attempts, rate)
    center = p.scene.object0.position
    old = [f.contact0 for f in p.scene.fingers]
    sel = p.selected_solutions
    err, achieved, desired = motion_error(p.task, center, old, [s.contact for s in sel])
    paper_pts = []
    for f, s in zip(p.scene.fingers, sel):
        paper_pts.append(apply_deltas(f, s.angles[AngleMethod.PAPER_LAW_OF_COSINES])[2])
    paper_err = motion_error(p.task, center, old, paper_pts)[0]
    return RunMetrics(
        relative_error=err,
        success=err <= threshold,
        attempts=attempts,
        acceptance_rate=rate,
        achieved=achieved,
        desired=desired,
        paper_angle_error=paper_err,
    )


def run_scenario(
    spec: ScenarioSpec,
    config: SamplerConfig | None = None,
    k: int = 4,
    mode: ContactUpdateMode = ContactUpdateMode.GEOMETRIC,
) -> tuple[ManipulationPlan | None, RunMetrics]:
    start = time.perf_counter()
    try:
        scene, task = build_scenario(spec)
        result = make_plan(scene, task, config, k=k, mode=mode)
    except HandPlanError as exc:
        result = exc
    metrics = evaluate(result, spec)
    metrics.wall_time = time.perf_counter() - start
    return (result if isinstance(result, ManipulationPlan) else None), metrics


@dataclass
class SuiteCell:
    object: str
    case: str
    runs: list[RunMetrics] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.runs)

    @property
    def mean_error(self) -> float:
        return float(np.mean([r.relative_error for r in self.runs])) if self.runs else math.nan

    @property
    def success_rate(self) -> float:
        return float(np.mean([r.success for r in self.runs])) if self.runs else math.nan

    @property
    def failures(self) -> int:
        return sum(1 for r in self.runs if r.diagnostics)


@dataclass
class SuiteReport:
    cells: list[SuiteCell]
    repetitions: int
    base_seed: int

    def cell(self, obj: str, case: str) -> SuiteCell:
        for c in self.cells:
            if c.object == obj and c.case == case:
                return c
        raise KeyError((obj, case))

    def render(self) -> str:
        return render_table(self)


def run_suite(
    specs,
    repetitions: int = 50,
    base_seed: int = 0,
    config: SamplerConfig | None = None,
    k: int = 4,
    mode: ContactUpdateMode = ContactUpdateMode.GEOMETRIC,
) -> SuiteReport:
    """Repeat every scenario ``repetitions`` times with derived seeds."""
    specs = list(specs)
    if not specs:
        raise ValueError("suite needs at least one scenario")
    if repetitions < 1:
        raise ValueError("repetitions must be positive")
    config = config or SamplerConfig()
    cells: dict[tuple[str, str], SuiteCell] = {}
    for i, spec in enumerate(specs):
        label = spec.case_label if not spec.fingers else f"{len(spec.fingers)}F"
        cell = cells.setdefault((spec.shape.kind.value, label), SuiteCell(spec.shape.kind.value, label))
        for r in range(repetitions):
            cfg = replace(config, seed=derive_seed(base_seed, i, r))
            cell.runs.append(run_scenario(spec, cfg, k=k, mode=mode)[1])
    return SuiteReport(list(cells.values()), repetitions, base_seed)


def render_table(report: SuiteReport) -> str:
    """Plain-text table: objects across, one error row and one success row per case."""
    objects = list(dict.fromkeys(c.object for c in report.cells))
    cases = list(dict.fromkeys(c.case for c in report.cells))
    width = max(10, *(len(o) + 2 for o in objects))
    lines = [
        "Relative error e and kinematic success rate (kSR) per object and finger case",
        f"repetitions: {report.repetitions}  base seed: {report.base_seed}  "
        f"success: planned and e <= {SUCCESS_THRESHOLD:.0%}",
        "",
        "".ljust(10) + "".join(o.capitalize().rjust(width) for o in objects),
    ]
    for case in cases:
        err_row, sr_row = f"{case} e".ljust(10), f"{case} kSR".ljust(10)
        for o in objects:
            try:
                c = report.cell(o, case)
            except KeyError:
                err_row += "-".rjust(width)
                sr_row += "-".rjust(width)
                continue
            err_row += f"{100 * c.mean_error:.1f}%".rjust(width)
            sr_row += f"{100 * c.success_rate:.0f}%".rjust(width)
        lines += [err_row, sr_row]
    fails = [(c.object, c.case, c.failures) for c in report.cells if c.failures]
    if fails:
        lines.append("")
        lines += [f"planning failures: {o} {case}: {n}" for o, case, n in fails]
    return "\n".join(lines) + "\n"


# Table of initial / desired (x, y, z, rho, beta, gamma) per object.
BENCHMARK_POSES = {
    "ellipse": ((35, 28, 45, 37, 62, 25), (35, 28, 45, 43, 74, 29)),
    "sphere": ((32, 26, 47, 36, 58, 25), (32, 26, 47, 39, 67, 29)),
    "cylinder": ((36, 30, 46, 35, 66, 28), (36, 30, 46, 37, 72, 32)),
    "cone": ((47, 22, 41, 31, 56, 29), (47, 22, 41, 37, 62, 35)),
    "cube": ((49, 32, 44, 36, 59, 25), (49, 32, 44, 42, 66, 31)),
}

DEFAULT_SHAPES = {
    "ellipse": ObjectShape(ShapeKind.ELLIPSE, (4.0, 3.0)),
    "sphere": ObjectShape(ShapeKind.SPHERE, (3.5,)),
    "cylinder": ObjectShape(ShapeKind.CYLINDER, (3.0,)),
    "cone": ObjectShape(ShapeKind.CONE, (6.0, 7.0)),
    "cube": ObjectShape(ShapeKind.CUBE, (6.0,)),
}


def _pose_rad(p) -> Pose6:
    x, y, z, rho, beta, gamma = (float(v) for v in p)
    return (x, y, z, math.radians(rho), math.radians(beta), math.radians(gamma))


def benchmark_spec(obj: str, case_label: str = "B2F") -> ScenarioSpec:
    """Scenario for one object of the benchmark pose table (cm, degrees)."""
    ini, des = BENCHMARK_POSES[obj]
    return ScenarioSpec(
        name=f"{obj}_{case_label.lower()}",
        shape=DEFAULT_SHAPES[obj],
        initial_pose=_pose_rad(ini),
        desired_pose=_pose_rad(des),
        case_label=case_label,
    )
