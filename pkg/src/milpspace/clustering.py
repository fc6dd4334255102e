"""k-means clustering with WCSS/silhouette model selection.

kmeans uses k-means++ seeding, Lloyd iterations to an assignment
fixpoint (at most 300), farthest-point re-seeding of empty clusters and
the best of 10 restarts by WCSS.  elbow_scan suggests the k whose
(k, WCSS) point lies farthest from the chord between the scan endpoints;
silhouette_scan picks the k with the highest mean silhouette.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_WCSS_SLACK = 1e-9  # Lloyd is monotone up to floating-point roundoff


@dataclass
class ClusteringResult:
    k: int
    labels: np.ndarray  # (n,) int
    centroids: np.ndarray  # (k, d)
    wcss: float
    mean_silhouette: float | None
    n_iterations: int
    seed: int

    def __post_init__(self):
        if self.labels.min(initial=0) < 0 or self.labels.max(initial=0) >= self.k:
            raise ValueError("labels out of range")
        if self.mean_silhouette is not None and not (
            -1.0 - 1e-12 <= self.mean_silhouette <= 1.0 + 1e-12
        ):
            raise ValueError("mean silhouette outside [-1, 1]")


@dataclass
class ScanResult:
    entries: list[tuple[int, float]]
    best_k: int


def _pairwise_distances(x: np.ndarray) -> np.ndarray:
    sq = (x * x).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(d2)


def _assign(x: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = (
        (x * x).sum(axis=1)[:, None]
        + (centroids * centroids).sum(axis=1)[None, :]
        - 2.0 * (x @ centroids.T)
    )
    np.maximum(d2, 0.0, out=d2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(len(x)), labels]


def _plus_plus_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centroids = np.empty((k, x.shape[1]))
    centroids[0] = x[rng.integers(n)]
    closest = ((x - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            centroids[j] = x[rng.integers(n)]
            continue
        centroids[j] = x[rng.choice(n, p=closest / total)]
        closest = np.minimum(closest, ((x - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _lloyd(
    x: np.ndarray, centroids: np.ndarray, max_iter: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, float, int]:
    k = centroids.shape[0]
    labels = np.full(len(x), -1)
    prev_wcss = np.inf
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        new_labels, d2 = _assign(x, centroids)
        for j in np.flatnonzero(np.bincount(new_labels, minlength=k) == 0):
            # re-seed an empty cluster at the point farthest from its centroid
            far = int(np.argmax(d2))
            centroids[j] = x[far]
            new_labels, d2 = _assign(x, centroids)
        wcss = float(d2.sum())
        if wcss > prev_wcss * (1.0 + _WCSS_SLACK) + _WCSS_SLACK:
            raise AssertionError(
                f"Lloyd iteration increased WCSS: {prev_wcss} -> {wcss}"
            )
        prev_wcss = wcss
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            members = x[labels == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    labels, _ = _assign(x, centroids)
    exact_wcss = float(((x - centroids[labels]) ** 2).sum())
    return labels, centroids, exact_wcss, iterations


def kmeans(
    x: np.ndarray,
    k: int,
    seed: int,
    n_restarts: int = 10,
    max_iter: int = 300,
    init_centroids: np.ndarray | None = None,
    compute_silhouette: bool = True,
) -> ClusteringResult:
    """Best-of-restarts k-means.  When init_centroids is given it is run
    as one extra candidate alongside the seeded restarts."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of points {n}")

    rng = np.random.default_rng(seed)
    best: tuple[float, np.ndarray, np.ndarray, int] | None = None
    starts: list[np.ndarray] = []
    if init_centroids is not None:
        starts.append(np.array(init_centroids, dtype=np.float64))
    starts += [_plus_plus_init(x, k, rng) for _ in range(n_restarts)]
    for start in starts:
        labels, centroids, wcss, iters = _lloyd(x, start.copy(), max_iter, rng)
        if best is None or wcss < best[0]:
            best = (wcss, labels, centroids, iters)

    wcss, labels, centroids, iters = best
    silhouette = None
    if compute_silhouette and k >= 2 and len(np.unique(labels)) == k:
        silhouette = _silhouette_mean(_pairwise_distances(x), labels)
    return ClusteringResult(
        k=k,
        labels=labels,
        centroids=centroids,
        wcss=wcss,
        mean_silhouette=silhouette,
        n_iterations=iters,
        seed=seed,
    )


def _silhouette_mean(dist: np.ndarray, labels: np.ndarray) -> float:
    n = len(labels)
    ids, inverse, counts = np.unique(labels, return_inverse=True, return_counts=True)
    k = len(ids)
    if k < 2:
        raise ValueError("silhouette needs at least 2 clusters")
    onehot = np.zeros((n, k))
    onehot[np.arange(n), inverse] = 1.0
    total = dist @ onehot  # (n, k) summed distance to each cluster

    own = counts[inverse]
    scores = np.zeros(n)
    intra_sum = total[np.arange(n), inverse]
    multi = own > 1
    a = np.zeros(n)
    a[multi] = intra_sum[multi] / (own[multi] - 1)

    mean_other = total / counts[None, :]
    mean_other[np.arange(n), inverse] = np.inf
    b = mean_other.min(axis=1)

    denom = np.maximum(a, b)
    ok = multi & (denom > 0)
    scores[ok] = (b[ok] - a[ok]) / denom[ok]
    # singleton clusters score 0 by convention; coincident a=b=0 also 0
    return float(scores.mean())


def silhouette_score(x: np.ndarray, labels) -> float:
    """Mean silhouette (b - a)/max(a, b) with Euclidean distances."""
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels)
    if len(labels) != len(x):
        raise ValueError("labels length must match points")
    if len(np.unique(labels)) < 2:
        raise ValueError("silhouette needs at least 2 non-empty clusters")
    return _silhouette_mean(_pairwise_distances(x), labels)


def elbow_scan(
    x: np.ndarray,
    k_range: tuple[int, int],
    seed: int,
    nested_init: bool = False,
    n_restarts: int = 10,
) -> ScanResult:
    """(k, WCSS) over an inclusive k range plus the elbow suggestion.

    nested_init additionally warm-starts each k with the previous
    solution's centroids plus one new k-means++ centroid, which makes
    the returned curve provably non-increasing.
    """
    x = np.asarray(x, dtype=np.float64)
    lo, hi = k_range
    if not (1 <= lo <= hi <= len(x)):
        raise ValueError(f"k_range {k_range} invalid for {len(x)} points")

    rng = np.random.default_rng(seed)
    entries: list[tuple[int, float]] = []
    prev_centroids: np.ndarray | None = None
    for k in range(lo, hi + 1):
        init = None
        if nested_init and prev_centroids is not None:
            extra = _plus_plus_extend(x, prev_centroids, rng)
            init = np.vstack([prev_centroids, extra])
        result = kmeans(
            x,
            k,
            seed,
            n_restarts=n_restarts,
            init_centroids=init,
            compute_silhouette=False,
        )
        entries.append((k, result.wcss))
        prev_centroids = result.centroids
    return ScanResult(entries=entries, best_k=_elbow_point(entries))


def _plus_plus_extend(
    x: np.ndarray, centroids: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2).min(axis=1)
    total = d2.sum()
    if total <= 0.0:
        return x[rng.integers(len(x))][None, :]
    return x[rng.choice(len(x), p=d2 / total)][None, :]


def _elbow_point(entries: list[tuple[int, float]]) -> int:
    """k whose curve point lies farthest from the chord between the scan
    endpoints, measured on axes normalized to [0, 1] (otherwise the WCSS
    scale swamps the k axis and the chord distance degenerates)."""
    if len(entries) == 1:
        return entries[0][0]
    ks = np.array([k for k, _ in entries], dtype=np.float64)
    ws = np.array([w for _, w in entries], dtype=np.float64)
    xs = (ks - ks[0]) / (ks[-1] - ks[0])
    w_span = ws[0] - ws[-1]
    ys = (ws - ws[-1]) / w_span if w_span != 0.0 else np.zeros_like(ws)
    x0, y0 = xs[0], ys[0]
    x1, y1 = xs[-1], ys[-1]
    chord = np.hypot(x1 - x0, y1 - y0)
    if chord == 0.0:
        return int(ks[0])
    dist = np.abs((y1 - y0) * xs - (x1 - x0) * ys + x1 * y0 - y1 * x0) / chord
    return int(ks[int(np.argmax(dist))])


def silhouette_scan(
    x: np.ndarray,
    k_range: tuple[int, int],
    seed: int,
    n_restarts: int = 10,
) -> ScanResult:
    """(k, mean silhouette) over an inclusive range; best k is the argmax
    with ties broken toward smaller k."""
    x = np.asarray(x, dtype=np.float64)
    lo, hi = k_range
    if not (2 <= lo <= hi <= len(x) - 1):
        raise ValueError(f"k_range {k_range} invalid for {len(x)} points")

    dist = _pairwise_distances(x)
    entries: list[tuple[int, float]] = []
    for k in range(lo, hi + 1):
        result = kmeans(x, k, seed, n_restarts=n_restarts, compute_silhouette=False)
        if len(np.unique(result.labels)) < 2:
            entries.append((k, -1.0))
            continue
        entries.append((k, _silhouette_mean(dist, result.labels)))
    best_k = max(entries, key=lambda kv: (kv[1], -kv[0]))[0]
    return ScanResult(entries=entries, best_k=best_k)
