import itertools

import numpy as np
import pytest
from sklearn.metrics import silhouette_score as sklearn_silhouette

from milpspace.clustering import (
    ClusteringResult,
    elbow_scan,
    kmeans,
    silhouette_scan,
    silhouette_score,
)

FOUR_POINTS = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])


def brute_force_best_wcss(x, k):
    """Enumerate every assignment of points to k clusters."""
    best = np.inf
    for assignment in itertools.product(range(k), repeat=len(x)):
        labels = np.array(assignment)
        wcss = 0.0
        for j in range(k):
            members = x[labels == j]
            if len(members):
                wcss += ((members - members.mean(axis=0)) ** 2).sum()
        best = min(best, wcss)
    return best


def make_blobs(seed, k=4, n_per=40, d=6, sep=12.0):
    """k unit-variance blobs at mutually equidistant centers (needs d >= k)."""
    rng = np.random.default_rng(seed)
    centers = sep * np.eye(k, d)
    points = np.vstack([c + rng.normal(size=(n_per, d)) for c in centers])
    return points, np.repeat(np.arange(k), n_per)


def test_kmeans_four_point_oracle():
    # enumeration oracle: the best 2-partition splits left/right, WCSS 1.0
    assert brute_force_best_wcss(FOUR_POINTS, 2) == pytest.approx(1.0)
    result = kmeans(FOUR_POINTS, 2, seed=0)
    assert result.wcss == pytest.approx(1.0, abs=1e-12)
    centroids = sorted(result.centroids.tolist())
    assert centroids == [[0.0, 0.5], [10.0, 0.5]]


def test_kmeans_single_cluster_wcss():
    result = kmeans(FOUR_POINTS, 1, seed=0)
    assert result.wcss == pytest.approx(101.0, abs=1e-12)
    assert result.centroids.tolist() == [[5.0, 0.5]]


def test_kmeans_k_equals_n():
    result = kmeans(FOUR_POINTS, 4, seed=0)
    assert result.wcss == pytest.approx(0.0, abs=1e-12)
    assert sorted(result.labels.tolist()) == [0, 1, 2, 3]


def test_kmeans_validates_k():
    with pytest.raises(ValueError):
        kmeans(FOUR_POINTS, 0, seed=0)
    with pytest.raises(ValueError):
        kmeans(FOUR_POINTS, 5, seed=0)


def test_kmeans_deterministic_per_seed():
    x, _ = make_blobs(seed=1)
    a = kmeans(x, 4, seed=3)
    b = kmeans(x, 4, seed=3)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.centroids, b.centroids)
    assert a.wcss == b.wcss


def test_kmeans_wcss_matches_recomputation():
    x, _ = make_blobs(seed=2, k=3)
    result = kmeans(x, 5, seed=1)
    recomputed = ((x - result.centroids[result.labels]) ** 2).sum()
    assert abs(result.wcss - recomputed) <= 1e-9 * max(1.0, recomputed)


def test_kmeans_handles_duplicate_points():
    x = np.zeros((6, 2))
    result = kmeans(x, 3, seed=0)
    assert result.wcss == 0.0
    assert result.mean_silhouette is None  # degenerate clustering


def test_silhouette_hand_example():
    x = np.array([[0.0], [1.0], [10.0], [11.0]])
    labels = [0, 0, 1, 1]
    score = silhouette_score(x, labels)
    # hand evaluation: (2 * 9.5/10.5 + 2 * 8.5/9.5) / 4
    assert score == pytest.approx(0.899749373433584, abs=1e-6)
    point_scores = [9.5 / 10.5, 8.5 / 9.5, 8.5 / 9.5, 9.5 / 10.5]
    assert point_scores[0] == pytest.approx(0.90476, abs=1e-5)
    assert point_scores[1] == pytest.approx(0.89474, abs=1e-5)


def test_silhouette_matches_sklearn_on_random_data():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(80, 4))
    labels = rng.integers(0, 3, size=80)
    assert silhouette_score(x, labels) == pytest.approx(
        float(sklearn_silhouette(x, labels)), abs=1e-10
    )


def test_silhouette_coincident_clusters_nonpositive():
    rng = np.random.default_rng(6)
    pts = rng.normal(size=(20, 3))
    x = np.vstack([pts, pts])
    labels = np.array([0] * 20 + [1] * 20)
    assert silhouette_score(x, labels) <= 0.0


def test_silhouette_approaches_one_with_separation():
    scores = []
    for sep in (10.0, 100.0, 1000.0):
        x = np.vstack([np.zeros((10, 2)), np.full((10, 2), sep)])
        x += np.random.default_rng(0).normal(scale=0.5, size=x.shape)
        labels = [0] * 10 + [1] * 10
        scores.append(silhouette_score(x, labels))
    assert scores[0] < scores[1] < scores[2]
    assert scores[2] > 0.999


def test_silhouette_requires_two_clusters():
    with pytest.raises(ValueError):
        silhouette_score(FOUR_POINTS, [0, 0, 0, 0])


def test_silhouette_singletons_score_zero():
    x = np.array([[0.0], [10.0], [11.0]])
    # cluster 0 is a singleton: its point contributes 0
    score = silhouette_score(x, [0, 1, 1])
    s1 = (10.0 - 1.0) / 10.0  # point 10: a=1, b=10
    s2 = (11.0 - 1.0) / 11.0  # point 11: a=1, b=11
    assert score == pytest.approx((0.0 + s1 + s2) / 3)


def test_relabeling_invariance():
    x, _ = make_blobs(seed=3, k=3)
    result = kmeans(x, 3, seed=0)
    perm = {0: 2, 1: 0, 2: 1}
    relabeled = np.array([perm[v] for v in result.labels])
    assert silhouette_score(x, relabeled) == pytest.approx(
        silhouette_score(x, result.labels), abs=1e-12
    )
    recomputed = 0.0
    for j in range(3):
        members = x[relabeled == j]
        recomputed += ((members - members.mean(axis=0)) ** 2).sum()
    assert recomputed == pytest.approx(result.wcss, rel=1e-12)


def test_elbow_scan_finds_planted_k():
    hits = 0
    for seed in range(10):
        x, _ = make_blobs(seed=seed, k=4)
        scan = elbow_scan(x, (1, 10), seed=seed)
        assert len(scan.entries) == 10
        hits += scan.best_k == 4
    assert hits >= 9


def test_elbow_scan_single_k():
    x = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    scan = elbow_scan(x, (3, 3), seed=0)
    assert scan.entries == [(3, 0.0)]
    assert scan.best_k == 3


def test_elbow_nested_init_monotone():
    x, _ = make_blobs(seed=11, k=5, n_per=30)
    scan = elbow_scan(x, (1, 12), seed=2, nested_init=True)
    wcss = [w for _, w in scan.entries]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(wcss, wcss[1:]))


def test_scan_validates_ranges():
    x, _ = make_blobs(seed=1, k=2, n_per=5)
    with pytest.raises(ValueError):
        elbow_scan(x, (0, 3), seed=0)
    with pytest.raises(ValueError):
        elbow_scan(x, (5, 2), seed=0)
    with pytest.raises(ValueError):
        silhouette_scan(x, (1, 3), seed=0)
    with pytest.raises(ValueError):
        silhouette_scan(x, (2, 10), seed=0)


def test_silhouette_scan_finds_planted_k():
    hits = 0
    for seed in range(10):
        x, _ = make_blobs(seed=100 + seed, k=4)
        scan = silhouette_scan(x, (2, 10), seed=seed)
        hits += scan.best_k == 4
        assert all(-1.0 <= s <= 1.0 for _, s in scan.entries)
    assert hits >= 9


def test_silhouette_scan_prefers_true_two_blobs():
    x, _ = make_blobs(seed=21, k=2, n_per=50)
    scan = silhouette_scan(x, (2, 5), seed=0)
    by_k = dict(scan.entries)
    assert by_k[2] > by_k[5]
    assert scan.best_k == 2


def test_clustering_result_validation():
    with pytest.raises(ValueError):
        ClusteringResult(
            k=2,
            labels=np.array([0, 2]),
            centroids=np.zeros((2, 1)),
            wcss=0.0,
            mean_silhouette=None,
            n_iterations=1,
            seed=0,
        )
    with pytest.raises(ValueError):
        ClusteringResult(
            k=2,
            labels=np.array([0, 1]),
            centroids=np.zeros((2, 1)),
            wcss=0.0,
            mean_silhouette=1.5,
            n_iterations=1,
            seed=0,
        )
