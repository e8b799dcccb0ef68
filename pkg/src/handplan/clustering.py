"""Lloyd k-means with reproducible seeding."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from handplan.errors import TooFewSamples


class SeedMode(enum.Enum):
    TASK_INTERPOLATED = "task"
    PLUS_PLUS = "plusplus"


@dataclass(frozen=True)
class TaskAnchors:
    """Start and end object positions used to place initial centroids."""

    start: tuple[float, float]
    end: tuple[float, float]
    finger_points: tuple = ()


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations: int
    seed_mode: SeedMode
    history: list[float] = field(default_factory=list)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def _sq_dists(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    return ((x[:, None, :] - c[None, :, :]) ** 2).sum(axis=2)


def _plus_plus(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = [x[rng.integers(len(x))]]
    for _ in range(1, k):
        d2 = _sq_dists(x, np.asarray(centers)).min(axis=1)
        centers.append(x[rng.choice(len(x), p=d2 / d2.sum())])
    return np.asarray(centers, dtype=float)


def kmeans(
    samples,
    k: int,
    seeding: SeedMode = SeedMode.PLUS_PLUS,
    task_anchors: TaskAnchors | None = None,
    seed: int = 0,
    max_iter: int = 100,
) -> ClusterModel:
    """Cluster ``samples`` (n x d) into ``k`` groups.

    Iterates until the assignment stops changing or ``max_iter`` is hit.
    Ties in the nearest-centroid step go to the lowest centroid index and a
    centroid that loses all its members stays where it was.

    Task-interpolated seeding spreads the initial centroids evenly from the
    start to the end object position; it only applies to 2-D samples with a
    nondegenerate segment and falls back to k-means++ otherwise. The mode
    actually used is recorded on the result.
    """
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise TooFewSamples("no samples to cluster")
    if k < 1:
        raise ValueError("k must be positive")
    distinct = len(np.unique(x, axis=0))
    if distinct < k:
        raise TooFewSamples(f"{distinct} distinct samples for k={k}")

    mode = SeedMode.PLUS_PLUS
    centroids = None
    if seeding is SeedMode.TASK_INTERPOLATED and task_anchors is not None and x.shape[1] == 2:
        a = np.asarray(task_anchors.start, dtype=float)
        b = np.asarray(task_anchors.end, dtype=float)
        if not np.allclose(a, b, rtol=0, atol=1e-12):
            centroids = a + np.linspace(0.0, 1.0, k)[:, None] * (b - a)
            mode = SeedMode.TASK_INTERPOLATED
    if centroids is None:
        centroids = _plus_plus(x, k, np.random.default_rng(seed))

    history: list[float] = []
    labels = None
    it = 0
    for it in range(1, max_iter + 1):
        d2 = _sq_dists(x, centroids)
        new_labels = d2.argmin(axis=1)
        history.append(float(d2[np.arange(len(x)), new_labels].sum()))
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
        for j in range(k):
            members = x[labels == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    else:
        d2 = _sq_dists(x, centroids)
        labels = d2.argmin(axis=1)
        history.append(float(d2[np.arange(len(x)), labels].sum()))

    return ClusterModel(
        k=k,
        centroids=centroids,
        assignments=labels,
        inertia=history[-1],
        iterations=it,
        seed_mode=mode,
        history=history,
    )
