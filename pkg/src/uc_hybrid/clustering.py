"""k-means partitioning of wind scenarios and partition weights."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .system import ScenarioSet

MAX_ITER = 300


class InvalidK(ValueError):
    pass


@dataclass(frozen=True)
class PartitionMap:
    k: int
    assignment: tuple[int, ...]  # scenario -> partition
    weights: tuple[float, ...]

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for w, p in enumerate(self.assignment):
            out[p].append(w)
        return out

    def problems(self) -> list[str]:
        out = []
        if any(not 0 <= p < self.k for p in self.assignment):
            out.append("assignment references a partition outside 0..k-1")
            return out
        sizes = np.bincount(self.assignment, minlength=self.k)
        if np.any(sizes == 0):
            out.append("empty partition")
        if len(self.weights) != self.k:
            out.append("weight vector length differs from k")
        elif abs(sum(self.weights) - 1.0) > 1e-9:
            out.append("partition weights do not sum to one")
        return out

    def to_dict(self) -> dict:
        return {"k": self.k, "assignment": list(self.assignment), "weights": list(self.weights)}

    @classmethod
    def from_dict(cls, doc: dict) -> "PartitionMap":
        return cls(int(doc["k"]), tuple(int(p) for p in doc["assignment"]), tuple(float(x) for x in doc["weights"]))

    @classmethod
    def single(cls, n: int) -> "PartitionMap":
        return cls(1, (0,) * n, (1.0,))

    @classmethod
    def singletons(cls, probabilities) -> "PartitionMap":
        n = len(probabilities)
        return cls(n, tuple(range(n)), tuple(float(p) for p in probabilities))


def partition_probabilities(assignment, probabilities, k: int | None = None) -> np.ndarray:
    assignment = np.asarray(assignment, dtype=int)
    probabilities = np.asarray(probabilities, dtype=float)
    k = int(assignment.max()) + 1 if k is None else k
    # fsum keeps e.g. ten 0.1 weights summing to exactly 1.0
    return np.array([math.fsum(probabilities[assignment == p]) for p in range(k)])


def within_sse(points: np.ndarray, assignment, k: int) -> float:
    assignment = np.asarray(assignment)
    total = 0.0
    for p in range(k):
        block = points[assignment == p]
        if len(block):
            total += float(((block - block.mean(axis=0)) ** 2).sum())
    return total


def _sq_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def _kmeanspp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = _sq_dists(points, points[chosen]).min(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            # all remaining points coincide with a centre; take the first unused
            nxt = next(i for i in range(n) if i not in chosen)
        else:
            nxt = int(rng.choice(n, p=closest / total))
        chosen.append(nxt)
        closest = np.minimum(closest, _sq_dists(points, points[[nxt]])[:, 0])
    return points[chosen].astype(float)


def lloyd(points: np.ndarray, centroids: np.ndarray, max_iter: int = MAX_ITER):
    """Lloyd iterations from ``centroids``; returns ``(assignment, centroids, iterations)``."""
    k = len(centroids)
    assignment = None
    for it in range(1, max_iter + 1):
        # argmin returns the lowest index on ties
        new = np.argmin(_sq_dists(points, centroids), axis=1)
        new = _repair_empty(points, centroids, new, k)
        if assignment is not None and np.array_equal(new, assignment):
            return assignment, centroids, it
        assignment = new
        centroids = np.array([points[assignment == p].mean(axis=0) for p in range(k)])
    return assignment, centroids, max_iter


def _repair_empty(points, centroids, assignment, k):
    assignment = assignment.copy()
    for p in range(k):
        if np.any(assignment == p):
            continue
        sizes = np.bincount(assignment, minlength=k)
        d = ((points - centroids[assignment]) ** 2).sum(axis=1)
        d[sizes[assignment] <= 1] = -1.0  # never empty another cluster
        assignment[int(np.argmax(d))] = p
    return assignment


def cluster_scenarios(scenarios: ScenarioSet, k: int, seed: int = 0, n_init: int = 10) -> PartitionMap:
    """Group scenarios by k-means on their flattened farm x period trajectories.

    Seeding is k-means++ from ``numpy.random.default_rng(seed)``; the best of
    ``n_init`` seeded runs (lowest within-cluster SSE, earliest on ties) is
    kept. Distances are unweighted Euclidean; probabilities only enter the
    partition weights.
    """
    n = scenarios.count
    if not 1 <= k <= n:
        raise InvalidK(f"k must lie in 1..{n}, got {k}")
    points = scenarios.flattened()
    if k == 1:
        assignment = np.zeros(n, dtype=int)
    elif k == n and len(np.unique(points, axis=0)) == n:
        assignment = np.arange(n)
    else:
        rng = np.random.default_rng(seed)
        best = None
        for _ in range(max(1, n_init)):
            cand, _, _ = lloyd(points, _kmeanspp(points, k, rng))
            sse = within_sse(points, cand, k)
            if best is None or sse < best[0] - 1e-9 * max(1.0, sse):
                best = (sse, cand)
        assignment = best[1]
    assignment = _canonical(assignment)
    weights = partition_probabilities(assignment, scenarios.probabilities, k)
    return PartitionMap(k, tuple(int(p) for p in assignment), tuple(float(x) for x in weights))


def _canonical(assignment: np.ndarray) -> np.ndarray:
    """Relabel partitions in order of their first member."""
    relabel: dict[int, int] = {}
    for p in assignment:
        relabel.setdefault(int(p), len(relabel))
    return np.array([relabel[int(p)] for p in assignment], dtype=int)
