"""KMeans over document embeddings: seeded k-means++ initialization, Lloyd
iterations until assignments stabilize, empty-cluster repair by reseeding to
the farthest point. The within-cluster sum of squares (WCSS) trace is
recorded and is non-increasing."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


@dataclass
class KMeansModel:
    centroids: np.ndarray         # K x d
    assignments: np.ndarray       # D, nearest-centroid ids
    wcss: float
    iterations_run: int
    seed: int
    wcss_trace: list[float] = field(default_factory=list)
    degenerate: bool = False


def _sq_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # D x K squared Euclidean distances
    return ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def _kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centroids = [points[rng.integers(n)]]
    for _ in range(1, k):
        d2 = _sq_dists(points, np.array(centroids)).min(axis=1)
        total = d2.sum()
        if total <= 0:
            centroids.append(points[rng.integers(n)])
            continue
        probs = d2 / total
        centroids.append(points[rng.choice(n, p=probs)])
    return np.array(centroids)


def wcss_of(points: np.ndarray, centroids: np.ndarray, assignments: np.ndarray) -> float:
    return float(((points - centroids[assignments]) ** 2).sum())


def kmeans_fit(points: np.ndarray, k: int, seed: int = 0,
               max_iterations: int = 300) -> KMeansModel:
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= K <= n_points, got K={k}, n={n}")
    rng = np.random.default_rng(seed)

    degenerate = bool(np.all(points == points[0])) and k > 1
    if degenerate:
        warnings.warn("all points identical with K > 1; returning duplicated centroids")
        centroids = np.repeat(points[:1], k, axis=0)
        assignments = np.zeros(n, dtype=np.int64)
        return KMeansModel(centroids=centroids, assignments=assignments, wcss=0.0,
                           iterations_run=0, seed=seed, wcss_trace=[0.0], degenerate=True)

    centroids = _kmeanspp_init(points, k, rng)
    assignments = np.full(n, -1, dtype=np.int64)
    trace: list[float] = []
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        new_assignments = _sq_dists(points, centroids).argmin(axis=1)
        for cluster in range(k):
            members = np.flatnonzero(new_assignments == cluster)
            if members.size:
                centroids[cluster] = points[members].mean(axis=0)
            else:
                # reseed to the point farthest from its current centroid
                far = int(_sq_dists(points, centroids).min(axis=1).argmax())
                centroids[cluster] = points[far]
                new_assignments[far] = cluster
        trace.append(wcss_of(points, centroids, new_assignments))
        if np.array_equal(new_assignments, assignments):
            assignments = new_assignments
            break
        assignments = new_assignments
    # final assignment pass so every point sits with its nearest centroid
    assignments = _sq_dists(points, centroids).argmin(axis=1)
    return KMeansModel(
        centroids=centroids,
        assignments=assignments,
        wcss=wcss_of(points, centroids, assignments),
        iterations_run=iterations,
        seed=seed,
        wcss_trace=trace,
    )
