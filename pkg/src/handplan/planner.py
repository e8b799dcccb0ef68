"""Multi-finger planning: per-finger sampling, weight allocation, clustering.

The pipeline for a grasp scene and a motion task:

1. move the object (translation or roll);
2. sample each finger's configurations towards its new contact;
3. allocate per-finger weights so that sum(gamma_i * f_i) = gamma * |motion|;
4. recover joint values, cluster the retained configurations and select one.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from handplan.angles import AngleMethod, recover_all
from handplan.clustering import ClusterModel, SeedMode, TaskAnchors, kmeans
from handplan.errors import DegenerateCosts, HandPlanError, NoFingers
from handplan.geometry import Vec2, distance
from handplan.model import (
    ContactUpdateMode,
    GraspScene,
    MotionTask,
    ObjectPose,
    Translate,
    contact_target,
    object_target,
)
from handplan.sampler import FingerSolution, SamplerConfig, SamplerStats, derive_seed, sample_finger

log = logging.getLogger(__name__)

CLUSTER_SPACES = ("weights", "joints")
_CLUSTER_SEED_KEY = 1_000_003


@dataclass(frozen=True)
class WeightAllocation:
    gamma: float
    gammas: tuple[float, ...]
    costs: tuple[float, ...]
    delta_norm: float

    def residual(self) -> float:
        return abs(sum(g * f for g, f in zip(self.gammas, self.costs)) - self.gamma * self.delta_norm)


def allocate_weights(costs, delta_norm: float, gamma: float = 1.0) -> WeightAllocation:
    """Minimum-norm weights satisfying sum(gamma_i * f_i) = gamma * delta_norm.

    The single linear constraint is solved as gamma_i = gamma * delta_norm *
    f_i / sum(f_j ** 2). Zero motion gives all-zero weights.
    """
    costs = tuple(float(c) for c in costs)
    if not costs:
        raise NoFingers("weight allocation needs at least one finger")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if delta_norm == 0:
        return WeightAllocation(gamma, (0.0,) * len(costs), costs, 0.0)
    if any(not math.isfinite(c) or c <= 0 for c in costs):
        raise ValueError(f"costs must be finite and positive, got {costs}")
    ss = sum(c * c for c in costs)
    if ss < 1e-18:
        raise DegenerateCosts(f"sum of squared costs {ss:.3g} is too small")
    scale = gamma * delta_norm / ss
    return WeightAllocation(gamma, tuple(scale * c for c in costs), costs, float(delta_norm))


@dataclass
class ManipulationPlan:
    scene: GraspScene
    task: MotionTask
    mode: ContactUpdateMode
    target: ObjectPose
    contact_targets: tuple[Vec2, ...]
    motion_norm: float
    per_finger: list[list[FingerSolution]]
    weights: WeightAllocation
    sample_weights: list[WeightAllocation]
    features: np.ndarray
    cluster_space: str
    clusters: ClusterModel | None
    selected: tuple[int, ...]
    stats: list[SamplerStats]
    dropped: list[int] = field(default_factory=list)

    @property
    def selected_solutions(self) -> list[FingerSolution]:
        return [sols[i] for sols, i in zip(self.per_finger, self.selected)]

    @property
    def selected_weights(self) -> WeightAllocation:
        return self.sample_weights[self.selected[0]]

    @property
    def configuration_count(self) -> int:
        return len(self.sample_weights)

    @property
    def attempts(self) -> int:
        return sum(s.attempts for s in self.stats)


def motion_norm(scene: GraspScene, task: MotionTask, targets) -> float:
    """Magnitude of the demanded motion.

    The object translation for ``Translate``; for ``Roll`` the object does not
    translate, so the mean contact displacement stands in.
    """
    if isinstance(task, Translate):
        return task.delta.norm()
    return float(np.mean([distance(f.contact0, c) for f, c in zip(scene.fingers, targets)]))


def select_strategy(features: np.ndarray, clusters: ClusterModel | None, n_fingers: int) -> tuple[int, ...]:
    """Configuration nearest the centroid of the most populated cluster.

    Every finger takes the same configuration index; ties resolve to the
    lowest cluster index and then the lowest sample index.
    """
    if clusters is None or len(features) <= 1:
        return (0,) * n_fingers
    j = int(np.argmax(clusters.sizes()))
    d2 = ((features - clusters.centroids[j]) ** 2).sum(axis=1)
    return (int(np.argmin(d2)),) * n_fingers


def _features(per_finger, weights, space: str) -> np.ndarray:
    if space == "weights":
        return np.array([w.gammas for w in weights], dtype=float)
    m = len(weights)
    rows = []
    for s in range(m):
        row = []
        for sols in per_finger:
            _, q2, q3 = sols[s].joints
            row.extend((q2.x, q2.y, q3.x, q3.y))
        rows.append(row)
    return np.array(rows, dtype=float)


def plan(
    scene: GraspScene,
    task: MotionTask,
    sampler_config: SamplerConfig | None = None,
    k: int = 4,
    mode: ContactUpdateMode = ContactUpdateMode.GEOMETRIC,
    cluster_space: str = "weights",
) -> ManipulationPlan:
    """Plan the finger configurations that carry out ``task``.

    Raises:
        Unreachable, BudgetExhausted: from the per-finger sampler, tagged
            with the finger id.
        TooFewSamples: fewer distinct configurations than ``k``.
    """
    config = sampler_config or SamplerConfig()
    if cluster_space not in CLUSTER_SPACES:
        raise ValueError(f"cluster_space must be one of {CLUSTER_SPACES}")
    target = object_target(scene.object0, task)
    targets = tuple(contact_target(f, scene.object0, task, mode) for f in scene.fingers)
    norm = motion_norm(scene, task, targets)

    per_finger, stats, dropped = [], [], []
    for i, (finger, ct) in enumerate(zip(scene.fingers, targets)):
        delta = task.delta.norm() if isinstance(task, Translate) else distance(finger.contact0, ct)
        res = sample_finger(finger, ct, delta, replace(config, seed=derive_seed(config.seed, i)))
        kept, bad = [], 0
        for sol in res.solutions:
            try:
                angles = {m: recover_all(finger, sol, m) for m in AngleMethod}
            except HandPlanError as exc:
                log.debug("finger %s: dropping solution: %s", finger.id, exc)
                bad += 1
                continue
            kept.append(replace(sol, angles=angles))
        per_finger.append(kept)
        stats.append(res.stats)
        dropped.append(bad)

    m = min(len(s) for s in per_finger)
    if m == 0:
        raise HandPlanError("every sampled configuration failed joint-value recovery")
    sample_weights = [
        allocate_weights([sols[s].cost for sols in per_finger], norm) for s in range(m)
    ]
    best = [min(range(len(sols)), key=lambda s, sols=sols: sols[s].cost) for sols in per_finger]
    weights = allocate_weights([sols[b].cost for sols, b in zip(per_finger, best)], norm)

    features = _features(per_finger, sample_weights, cluster_space)
    clusters = None
    if m > 1:
        anchors = TaskAnchors(tuple(scene.object0.position), tuple(target.position))
        clusters = kmeans(
            features, k, SeedMode.TASK_INTERPOLATED, anchors, seed=derive_seed(config.seed, _CLUSTER_SEED_KEY)
        )
    selected = select_strategy(features, clusters, len(scene.fingers))
    return ManipulationPlan(
        scene=scene,
        task=task,
        mode=mode,
        target=target,
        contact_targets=targets,
        motion_norm=norm,
        per_finger=per_finger,
        weights=weights,
        sample_weights=sample_weights,
        features=features,
        cluster_space=cluster_space,
        clusters=clusters,
        selected=selected,
        stats=stats,
        dropped=dropped,
    )
