"""Density-based topic discovery over reduced embeddings.

Deliberate substitution for the UMAP+HDBSCAN pair: a seeded Gaussian random
projection to k dimensions followed by DBSCAN, with eps picked at the knee
of the sorted k-distance curve and minPts equal to the minimum cluster
size. Clusters smaller than the minimum are relabeled NOISE. The minimum
cluster size semantics of the original pipeline are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NOISE = -1


@dataclass
class DensityTopicModel:
    projected: np.ndarray          # D x k
    labels: np.ndarray             # topic id per document, NOISE = -1
    min_cluster_size: int
    eps: float
    all_noise: bool
    topic_sizes: dict[int, int] = field(default_factory=dict)
    topic_terms: dict[int, list[tuple[str, float]]] = field(default_factory=dict)


def scaled_min_cluster_size(n_docs: int, fraction: float = 0.002, floor: int = 5) -> int:
    """Desk-scale analogue of the fixed min topic size used at corpus scale."""
    return max(floor, int(np.ceil(fraction * n_docs)))


def random_projection(embeddings: np.ndarray, k: int, seed: int) -> np.ndarray:
    d = embeddings.shape[1]
    if k >= d:
        raise ValueError(f"reduced dimension k={k} must be < d={d}")
    rng = np.random.default_rng(seed)
    mat = rng.standard_normal((d, k)) / np.sqrt(k)
    return embeddings @ mat


def k_distance_knee(points: np.ndarray, min_pts: int) -> float:
    """eps = k-distance at the knee (max distance to the chord) of the
    ascending sorted k-NN distance curve."""
    n = points.shape[0]
    d2 = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    kth = np.sort(np.sqrt(d2), axis=1)[:, min(min_pts, n - 1)]
    curve = np.sort(kth)
    x = np.arange(n, dtype=float)
    x0, y0, x1, y1 = x[0], curve[0], x[-1], curve[-1]
    denom = np.hypot(x1 - x0, y1 - y0)
    if denom == 0:
        return float(curve[-1])
    dist = np.abs((y1 - y0) * x - (x1 - x0) * curve + x1 * y0 - y1 * x0) / denom
    return float(curve[int(dist.argmax())])


def _dbscan(points: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    n = points.shape[0]
    d2 = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    neighbors = [np.flatnonzero(d2[i] <= eps * eps) for i in range(n)]
    core = np.array([len(nb) >= min_pts for nb in neighbors])
    labels = np.full(n, NOISE, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if labels[i] != NOISE or not core[i]:
            continue
        labels[i] = cluster
        frontier = list(neighbors[i])
        while frontier:
            j = frontier.pop()
            if labels[j] == NOISE:
                labels[j] = cluster
                if core[j]:
                    frontier.extend(int(x) for x in neighbors[j] if labels[x] == NOISE)
        cluster += 1
    return labels


def density_topics(
    embeddings: np.ndarray,
    min_cluster_size: int,
    k_reduced: int = 8,
    seed: int = 0,
    eps: float | None = None,
) -> DensityTopicModel:
    embeddings = np.asarray(embeddings, dtype=float)
    n = embeddings.shape[0]
    if min_cluster_size > n:
        raise ValueError(f"min_cluster_size {min_cluster_size} exceeds corpus size {n}")
    projected = random_projection(embeddings, k_reduced, seed)
    if eps is None:
        eps = k_distance_knee(projected, min_cluster_size)
    raw = _dbscan(projected, eps, min_cluster_size)

    # drop undersized clusters, then relabel surviving topics by size desc
    sizes = {int(c): int((raw == c).sum()) for c in set(raw.tolist()) - {NOISE}}
    keep = [c for c, s in sorted(sizes.items(), key=lambda kv: (-kv[1], kv[0]))
            if s >= min_cluster_size]
    labels = np.full(n, NOISE, dtype=np.int64)
    topic_sizes = {}
    for new_id, old_id in enumerate(keep):
        labels[raw == old_id] = new_id
        topic_sizes[new_id] = sizes[old_id]
    return DensityTopicModel(
        projected=projected,
        labels=labels,
        min_cluster_size=min_cluster_size,
        eps=float(eps),
        all_noise=not topic_sizes,
        topic_sizes=topic_sizes,
    )
