"""Monte Carlo search for finger configurations that keep the contact.

Two strategies are available:

``PAPER_REJECTION``
    Draw the two movable joints uniformly from disks around their initial
    positions, keep the draw when the cost lies in the acceptance band and
    all three link lengths match within ``epsilon_len`` (relative). Faithful
    but the acceptance probability is tiny; use it for fidelity checks.

``MANIFOLD_CLOSURE`` (default)
    Draw the third joint uniformly on the circle of radius l3 about the
    contact target and close the chain to the base through one of the two
    circle intersections, picked at random. The link-length constraints are
    then met to rounding and only the cost band and the singularity filter
    remain.

Batches are drawn from generators keyed on ``(seed, batch_index)`` so output
depends only on the inputs and the seed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from handplan.cost import DEFAULT_EPSILON_F, cost_array
from handplan.errors import BudgetExhausted, Unreachable
from handplan.geometry import Vec2, distance
from handplan.model import (
    ContactUpdateMode,
    FingerChain,
    MotionTask,
    ObjectPose,
    Roll,
    contact_target as _contact_target,
    reachability_check,
)


class Strategy(enum.Enum):
    PAPER_REJECTION = "paper"
    MANIFOLD_CLOSURE = "manifold"


_DEFAULT_EPS_LEN = {Strategy.PAPER_REJECTION: 1e-3, Strategy.MANIFOLD_CLOSURE: 1e-6}


@dataclass(frozen=True)
class SamplerConfig:
    strategy: Strategy = Strategy.MANIFOLD_CLOSURE
    epsilon_f: float = DEFAULT_EPSILON_F
    epsilon_len: float | None = None
    max_attempts: int = 1_000_000
    target_count: int = 50
    seed: int = 0
    box_radius: float | None = None
    singularity_ratio: float = 1e-6
    batch_size: int = 8192

    def __post_init__(self):
        if not isinstance(self.strategy, Strategy):
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.epsilon_f <= 0:
            raise ValueError("epsilon_f must be positive")
        if self.epsilon_len is not None and self.epsilon_len <= 0:
            raise ValueError("epsilon_len must be positive")
        if self.max_attempts < 1 or self.target_count < 1 or self.batch_size < 1:
            raise ValueError("max_attempts, target_count and batch_size must be >= 1")
        if self.box_radius is not None and self.box_radius <= 0:
            raise ValueError("box_radius must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def length_tolerance(self) -> float:
        if self.epsilon_len is not None:
            return self.epsilon_len
        return _DEFAULT_EPS_LEN[self.strategy]


def derive_seed(seed: int, *keys: int) -> int:
    """Child seed for a sub-task, independent of evaluation order."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class SamplerStats:
    target_count: int
    attempts: int = 0
    accepted: int = 0
    rejections: dict[str, int] = field(
        default_factory=lambda: {"no_closure": 0, "length": 0, "cost": 0, "singular": 0}
    )

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 0.0

    def describe_rejections(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in self.rejections.items())

    def merge(self, other: SamplerStats) -> None:
        self.attempts += other.attempts
        self.accepted += other.accepted
        for k, v in other.rejections.items():
            self.rejections[k] = self.rejections.get(k, 0) + v


@dataclass(frozen=True, eq=False)
class FingerSolution:
    """One accepted finger configuration.

    ``angles`` maps an ``AngleMethod`` to ``JointAngles`` once joint values
    have been recovered.
    """

    finger_id: int
    joints: tuple[Vec2, Vec2, Vec2]
    contact: Vec2
    displacements: tuple[float, float]
    cost: float
    angles: dict = field(default_factory=dict)

    @property
    def points(self) -> tuple[Vec2, Vec2, Vec2, Vec2]:
        return (*self.joints, self.contact)


@dataclass
class SampleResult:
    solutions: list[FingerSolution]
    stats: SamplerStats

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]


def initial_solution(finger: FingerChain) -> FingerSolution:
    return FingerSolution(
        finger_id=finger.id,
        joints=(finger.base, *finger.joints0),
        contact=finger.contact0,
        displacements=(0.0, 0.0),
        cost=0.0,
    )


def _min_altitude(a, b, c):
    ab, bc, ca = b - a, c - b, a - c
    cross = np.abs(ab[:, 0] * (c - a)[:, 1] - ab[:, 1] * (c - a)[:, 0])
    longest = np.maximum.reduce([np.hypot(*ab.T), np.hypot(*bc.T), np.hypot(*ca.T)])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(longest > 0, cross / longest, 0.0)


def _draw_manifold(rng, n, finger: FingerChain, target: np.ndarray, eps_len: float):
    l1, l2, l3 = finger.lengths
    base = finger.base.as_array()
    alpha = rng.uniform(0.0, 2.0 * np.pi, n)
    branch = rng.integers(0, 2, n) * 2.0 - 1.0
    q3 = target + l3 * np.column_stack([np.cos(alpha), np.sin(alpha)])
    v = q3 - base
    d = np.hypot(v[:, 0], v[:, 1])
    closes = (d > 0) & (d <= l1 + l2) & (d >= abs(l1 - l2))
    safe_d = np.where(d > 0, d, 1.0)
    along = (l1 * l1 - l2 * l2 + d * d) / (2.0 * safe_d)
    h = np.sqrt(np.maximum(l1 * l1 - along * along, 0.0))
    u = v / safe_d[:, None]
    perp = np.column_stack([-u[:, 1], u[:, 0]])
    q2 = base + along[:, None] * u + (branch * h)[:, None] * perp
    r1 = np.abs(np.hypot(*(q2 - base).T) - l1) <= eps_len * l1
    r2 = np.abs(np.hypot(*(q3 - q2).T) - l2) <= eps_len * l2
    return q2, q3, closes, closes & r1 & r2


def _draw_disks(rng, n, finger: FingerChain, target: np.ndarray, eps_len: float, radius: float):
    l1, l2, l3 = finger.lengths
    base = finger.base.as_array()

    def disk(center):
        r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
        t = rng.uniform(0.0, 2.0 * np.pi, n)
        return center.as_array() + np.column_stack([r * np.cos(t), r * np.sin(t)])

    q2 = disk(finger.joints0[0])
    q3 = disk(finger.joints0[1])
    ok = (
        (np.abs(np.hypot(*(q2 - base).T) - l1) <= eps_len * l1)
        & (np.abs(np.hypot(*(q3 - q2).T) - l2) <= eps_len * l2)
        & (np.abs(np.hypot(*(target - q3).T) - l3) <= eps_len * l3)
    )
    return q2, q3, ok


def sample_finger(
    finger: FingerChain, contact_target: Vec2, delta_norm: float, config: SamplerConfig
) -> SampleResult:
    """Draw configurations of ``finger`` that put its tip on ``contact_target``.

    Args:
        finger: the chain in its initial configuration.
        contact_target: where the fingertip must end up.
        delta_norm: motion the cost is normalized against (object
            translation, or contact displacement for a roll).
        config: sampler settings.

    Returns:
        ``SampleResult`` with exactly ``config.target_count`` solutions in
        draw order, or a single unchanged configuration for the identity task.

    Raises:
        Unreachable: the target is outside the chain's annulus of reach.
        BudgetExhausted: ``max_attempts`` draws gave too few acceptances;
            the partial list and statistics ride on the exception.
    """
    contact_target = Vec2.of(contact_target)
    if not reachability_check(finger, contact_target):
        raise Unreachable(finger.id, distance(finger.base, contact_target), finger.reach())
    stats = SamplerStats(target_count=config.target_count)
    if delta_norm == 0 and contact_target == finger.contact0:
        stats.attempts = stats.accepted = 1
        return SampleResult([initial_solution(finger)], stats)

    eps_len = config.length_tolerance
    target = contact_target.as_array()
    q20 = finger.joints0[0].as_array()
    q30 = finger.joints0[1].as_array()
    base = finger.base.as_array()
    alt_min = config.singularity_ratio * finger.total_length
    radius = config.box_radius or 2.0 * finger.total_length
    needed = config.target_count
    solutions: list[FingerSolution] = []
    batch = 0
    while len(solutions) < needed and stats.attempts < config.max_attempts:
        n = min(config.batch_size, config.max_attempts - stats.attempts)
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(batch,)))
        batch += 1
        if config.strategy is Strategy.MANIFOLD_CLOSURE:
            q2, q3, closes, geom_ok = _draw_manifold(rng, n, finger, target, eps_len)
        else:
            q2, q3, geom_ok = _draw_disks(rng, n, finger, target, eps_len, radius)
            closes = np.ones(n, dtype=bool)
        e2 = np.hypot(*(q2 - q20).T)
        e3 = np.hypot(*(q3 - q30).T)
        f = cost_array(delta_norm, e3, e2)
        cost_ok = np.abs(f - 1.0) <= config.epsilon_f
        tgt = np.broadcast_to(target, q3.shape)
        b = np.broadcast_to(base, q2.shape)
        nonsingular = (_min_altitude(b, q2, q3) > alt_min) & (_min_altitude(q2, q3, tgt) > alt_min)

        if config.strategy is Strategy.MANIFOLD_CLOSURE:
            # Table order after closure: cost band, then conditioning
            reasons = [("no_closure", ~closes), ("length", closes & ~geom_ok),
                       ("cost", geom_ok & ~cost_ok)]
            ok = geom_ok & cost_ok
        else:
            # cost is tested before the length constraints
            reasons = [("cost", ~cost_ok), ("length", cost_ok & ~geom_ok)]
            ok = cost_ok & geom_ok
        reasons.append(("singular", ok & ~nonsingular))
        ok &= nonsingular

        idx = np.flatnonzero(ok)
        room = needed - len(solutions)
        cut = n if len(idx) <= room else int(idx[room - 1]) + 1
        idx = idx[:room]
        stats.attempts += cut
        stats.accepted += len(idx)
        for name, mask in reasons:
            stats.rejections[name] += int(np.count_nonzero(mask[:cut]))
        for i in idx:
            solutions.append(
                FingerSolution(
                    finger_id=finger.id,
                    joints=(finger.base, Vec2(*q2[i]), Vec2(*q3[i])),
                    contact=contact_target,
                    displacements=(float(e2[i]), float(e3[i])),
                    cost=float(f[i]),
                )
            )
    if len(solutions) < needed:
        raise BudgetExhausted(finger.id, solutions, stats)
    return SampleResult(solutions, stats)


@dataclass
class WorkspaceCloud:
    """Accepted configurations over a family of tasks, tagged by task index."""

    entries: list[tuple[int, FingerSolution]]
    errors: dict[int, str]
    stats: list[SamplerStats | None]

    def __len__(self):
        return len(self.entries)

    def total_stats(self) -> SamplerStats:
        total = SamplerStats(target_count=0)
        for s in self.stats:
            if s is not None:
                total.target_count += s.target_count
                total.merge(s)
        return total


def workspace_sweep(
    finger: FingerChain,
    object0: ObjectPose,
    task_family: list[MotionTask],
    config: SamplerConfig,
    mode: ContactUpdateMode = ContactUpdateMode.GEOMETRIC,
) -> WorkspaceCloud:
    """Sample ``finger`` for every task in ``task_family``.

    Per-task failures become annotations in ``errors``; partial results from
    an exhausted budget are still added to the cloud.
    """
    if not task_family:
        raise ValueError("task family must not be empty")
    entries, errors, stats = [], {}, []
    for k, task in enumerate(task_family):
        target = _contact_target(finger, object0, task, mode)
        delta = distance(target, finger.contact0)
        cfg = replace(config, seed=derive_seed(config.seed, k))
        try:
            res = sample_finger(finger, target, delta, cfg)
        except BudgetExhausted as exc:
            errors[k] = str(exc)
            stats.append(exc.stats)
            entries.extend((k, s) for s in exc.solutions)
            continue
        except Unreachable as exc:
            errors[k] = str(exc)
            stats.append(None)
            continue
        stats.append(res.stats)
        entries.extend((k, s) for s in res.solutions)
    return WorkspaceCloud(entries, errors, stats)


def rolling_family(max_deg: float = 10.0, step_deg: float = 1.0) -> list[MotionTask]:
    """Roll tasks from -max_deg to +max_deg inclusive."""
    n = int(round(max_deg / step_deg))
    return [Roll(math.radians(k * step_deg)) for k in range(-n, n + 1)]
