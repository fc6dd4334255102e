"""Dimensionality reduction of embedding matrices to 2D.

Three views of the same matrix: pca2 (linear, top-2 singular
directions), tsne2 (exact dense t-SNE with perplexity calibration by
binary search, early exaggeration and momentum gradient descent) and
umap2 (exact k-NN fuzzy topology with smoothed bandwidths, fuzzy-union
symmetrization and negative-sampling layout optimization).  All three
are deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.optimize import curve_fit

_EPS = 1e-12


@dataclass
class Projection2D:
    coords: np.ndarray  # (n, 2)
    method: str  # "pca" | "tsne" | "umap"
    config: dict = field(default_factory=dict)
    explained_variance_ratio: tuple[float, float] | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.coords.ndim != 2 or self.coords.shape[1] != 2:
            raise ValueError("coords must be (n, 2)")
        if not np.all(np.isfinite(self.coords)):
            raise ValueError("coords contain non-finite values")


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 30.0
    iterations: int = 1000
    early_exaggeration: float = 12.0
    exaggeration_iters: int = 250
    learning_rate: float = 200.0
    momentum_start: float = 0.5
    momentum_final: float = 0.8
    momentum_switch_iter: int = 250
    seed: int = 0
    max_points: int | None = None
    log_every: int = 50

    def __post_init__(self):
        if self.perplexity <= 1.0:
            raise ValueError("perplexity must exceed 1")
        if self.iterations < 250:
            raise ValueError("iterations must be >= 250")


@dataclass(frozen=True)
class UmapConfig:
    n_neighbors: int = 15
    min_dist: float = 0.1
    epochs: int = 500
    learning_rate: float = 1.0
    negative_sample_rate: int = 5
    seed: int = 0
    max_points: int | None = None

    def __post_init__(self):
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be >= 2")
        if self.min_dist < 0.0:
            raise ValueError("min_dist must be >= 0")
        if self.epochs < 1 or self.negative_sample_rate < 1:
            raise ValueError("epochs and negative_sample_rate must be >= 1")


# ---------------------------------------------------------------------------
# PCA
# ---------------------------------------------------------------------------


def pca2(x: np.ndarray) -> Projection2D:
    """Project onto the top-2 right singular directions of the centered
    data.  Component signs are fixed by making each component's
    largest-magnitude loading positive; zero-variance input yields
    all-zero coordinates and (0, 0) ratios."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("pca2 needs an (n >= 2, d) matrix")
    centered = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    total = float((s * s).sum())
    if total <= _EPS * max(1.0, float(np.abs(x).max()) ** 2):
        return Projection2D(
            coords=np.zeros((x.shape[0], 2)),
            method="pca",
            explained_variance_ratio=(0.0, 0.0),
        )

    coords = np.zeros((x.shape[0], 2))
    ratios = [0.0, 0.0]
    for comp in range(min(2, vt.shape[0])):
        direction = vt[comp]
        if direction[np.argmax(np.abs(direction))] < 0:
            direction = -direction
        coords[:, comp] = centered @ direction
        ratios[comp] = float(s[comp] ** 2 / total)
    return Projection2D(
        coords=coords,
        method="pca",
        explained_variance_ratio=(ratios[0], ratios[1]),
    )


# ---------------------------------------------------------------------------
# t-SNE
# ---------------------------------------------------------------------------


def _squared_distances(x: np.ndarray) -> np.ndarray:
    sq = (x * x).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def _conditional_probabilities(
    d2: np.ndarray, perplexity: float, n_steps: int = 64, tol: float = 1e-5
) -> np.ndarray:
    """Per-row Gaussian affinities whose entropy matches log(perplexity),
    found by binary search on the precision beta = 1/(2 sigma^2).

    Distances are shifted by the row minimum before exponentiating; the
    normalized affinities and their entropy are shift-invariant and the
    arithmetic stays stable even for extreme precisions.
    """
    n = d2.shape[0]
    target = np.log(perplexity)
    p = np.zeros((n, n))
    for i in range(n):
        beta, lo, hi = 1.0, 0.0, np.inf
        row = np.delete(d2[i], i)
        row = row - row.min()
        for _ in range(n_steps):
            w = np.exp(-row * beta)
            sum_w = w.sum()  # >= 1 because the minimum shifts to zero
            entropy = np.log(sum_w) + beta * float((row * w).sum()) / sum_w
            if abs(entropy - target) < tol:
                break
            if entropy > target:
                lo = beta
                beta = beta * 2.0 if hi == np.inf else (lo + hi) / 2.0
            else:
                hi = beta
                beta = (lo + hi) / 2.0
        w = np.exp(-row * beta)
        w /= w.sum()
        p[i, :i] = w[:i]
        p[i, i + 1 :] = w[i:]
    return p


def tsne2(x: np.ndarray, config: TsneConfig | None = None) -> Projection2D:
    """Exact t-SNE to 2D with early exaggeration and two-phase momentum."""
    config = config or TsneConfig()
    x = np.asarray(x, dtype=np.float64)
    rng = np.random.default_rng(config.seed)
    x, anchor_to = _maybe_subsample(x, config.max_points, rng)
    n = x.shape[0]
    if not 1.0 < config.perplexity < n / 3.0:
        raise ValueError(
            f"perplexity {config.perplexity} infeasible for {n} points "
            f"(need 1 < perplexity < n/3)"
        )

    cond = _conditional_probabilities(_squared_distances(x), config.perplexity)
    p = (cond + cond.T) / (2.0 * x.shape[0])
    np.maximum(p, _EPS, out=p)

    y = rng.standard_normal((x.shape[0], 2)) * 1e-4
    update = np.zeros_like(y)
    gains = np.ones_like(y)
    kl_log: list[tuple[int, float]] = []

    for it in range(config.iterations):
        exag = config.early_exaggeration if it < config.exaggeration_iters else 1.0
        momentum = (
            config.momentum_start
            if it < config.momentum_switch_iter
            else config.momentum_final
        )
        d2 = _squared_distances(y)
        num = 1.0 / (1.0 + d2)
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / num.sum(), _EPS)

        pq = (p * exag - q) * num
        grad = 4.0 * (y * pq.sum(axis=1)[:, None] - pq @ y)

        inc = update * grad < 0.0
        gains[inc] += 0.2
        gains[~inc] *= 0.8
        np.maximum(gains, 0.01, out=gains)
        update = momentum * update - config.learning_rate * gains * grad
        y += update
        y -= y.mean(axis=0)

        if config.log_every and (it % config.log_every == 0 or it == config.iterations - 1):
            kl = float((p * np.log(p / q)).sum())
            kl_log.append((it, kl))

    coords = y if anchor_to is None else y[anchor_to]
    return Projection2D(
        coords=coords,
        method="tsne",
        config=asdict(config),
        diagnostics={"kl": kl_log},
    )


# ---------------------------------------------------------------------------
# UMAP
# ---------------------------------------------------------------------------


def _knn(x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact k nearest neighbors (self excluded) by full pairwise
    distances: (indices, distances), each (n, k), sorted ascending."""
    d2 = _squared_distances(x)
    np.fill_diagonal(d2, np.inf)
    idx = np.argsort(d2, axis=1, kind="stable")[:, :k]
    d = np.sqrt(np.take_along_axis(d2, idx, axis=1))
    return idx, d


def _smooth_bandwidths(
    dists: np.ndarray, n_iter: int = 64, tol: float = 1e-5
) -> tuple[np.ndarray, np.ndarray]:
    """Per-point offset rho (distance to nearest neighbor) and bandwidth
    sigma solving sum_j exp(-max(0, d_ij - rho_i) / sigma_i) = log2(k)."""
    n, k = dists.shape
    target = np.log2(k)
    rho = dists[:, 0].copy()
    sigma = np.ones(n)
    for i in range(n):
        shifted = np.maximum(dists[i] - rho[i], 0.0)
        lo, hi, mid = 0.0, np.inf, 1.0
        for _ in range(n_iter):
            total = float(np.exp(-shifted / max(mid, _EPS)).sum())
            if abs(total - target) < tol:
                break
            if total > target:
                hi = mid
                mid = (lo + hi) / 2.0
            else:
                lo = mid
                mid = mid * 2.0 if hi == np.inf else (lo + hi) / 2.0
        sigma[i] = mid
    return rho, sigma


def fuzzy_memberships(x: np.ndarray, n_neighbors: int) -> np.ndarray:
    """Symmetrized fuzzy adjacency: directed strengths
    exp(-max(0, d - rho)/sigma) over each point's k nearest neighbors,
    combined by the fuzzy union a + b - ab.  Dense (n, n), entries in
    [0, 1], zero diagonal."""
    n = x.shape[0]
    idx, dists = _knn(x, n_neighbors)
    rho, sigma = _smooth_bandwidths(dists)
    a = np.zeros((n, n))
    rows = np.repeat(np.arange(n), n_neighbors)
    vals = np.exp(
        -np.maximum(dists - rho[:, None], 0.0) / np.maximum(sigma[:, None], _EPS)
    )
    a[rows, idx.reshape(-1)] = vals.reshape(-1)
    return a + a.T - a * a.T


def fit_curve_params(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares (a, b) for the low-dimensional similarity curve
    1/(1 + a d^(2b)) matched to the target exp decay beyond min_dist."""
    xs = np.linspace(0.0, spread * 3.0, 300)
    ys = np.where(xs < min_dist, 1.0, np.exp(-(xs - min_dist) / spread))

    def curve(d, a, b):
        return 1.0 / (1.0 + a * d ** (2.0 * b))

    (a, b), _ = curve_fit(curve, xs, ys, p0=(1.0, 1.0), maxfev=5000)
    return float(a), float(b)


def umap2(x: np.ndarray, config: UmapConfig | None = None) -> Projection2D:
    """UMAP to 2D: exact fuzzy topology, PCA initialization scaled into
    [-10, 10], then per-epoch batched attraction over graph edges with
    uniform negative sampling."""
    config = config or UmapConfig()
    x = np.asarray(x, dtype=np.float64)
    rng = np.random.default_rng(config.seed)
    x, anchor_to = _maybe_subsample(x, config.max_points, rng)
    n = x.shape[0]
    if config.n_neighbors >= n:
        raise ValueError(f"n_neighbors {config.n_neighbors} must be < n {n}")

    w = fuzzy_memberships(x, config.n_neighbors)
    a, b = fit_curve_params(config.min_dist)

    # edge list from the upper structure of the symmetric graph, pruned
    # like the reference algorithm: edges too weak to fire even once are
    # dropped
    head, tail = np.nonzero(w)
    strength = w[head, tail]
    keep = strength >= strength.max() / config.epochs
    head, tail, strength = head[keep], tail[keep], strength[keep]
    epochs_per_sample = strength.max() / strength

    init = pca2(x).coords
    scale = np.abs(init).max()
    y = init * (10.0 / scale) if scale > 0 else init.copy()
    y += rng.normal(scale=1e-4, size=y.shape)

    next_fire = epochs_per_sample.copy()
    for epoch in range(config.epochs):
        alpha = config.learning_rate * (1.0 - epoch / config.epochs)
        active = next_fire <= epoch
        if np.any(active):
            h = head[active]
            t = tail[active]
            disp = np.zeros_like(y)

            diff = y[h] - y[t]
            d2 = (diff * diff).sum(axis=1)
            pos = d2 > 0.0
            coeff = np.zeros_like(d2)
            coeff[pos] = (-2.0 * a * b * d2[pos] ** (b - 1.0)) / (
                1.0 + a * d2[pos] ** b
            )
            g = np.clip(coeff[:, None] * diff, -4.0, 4.0)
            np.add.at(disp, h, g * alpha)
            np.add.at(disp, t, -g * alpha)

            for _ in range(config.negative_sample_rate):
                neg = rng.integers(0, n, size=len(h))
                diff_n = y[h] - y[neg]
                d2n = (diff_n * diff_n).sum(axis=1)
                gn = np.empty_like(diff_n)
                posn = d2n > 0.0
                coeff_n = np.zeros_like(d2n)
                coeff_n[posn] = (2.0 * b) / (
                    (0.001 + d2n[posn]) * (1.0 + a * d2n[posn] ** b)
                )
                gn[posn] = np.clip(coeff_n[posn, None] * diff_n[posn], -4.0, 4.0)
                gn[~posn] = 4.0
                gn[neg == h] = 0.0
                np.add.at(disp, h, gn * alpha)

            y += disp
            next_fire[active] += epochs_per_sample[active]

    coords = y if anchor_to is None else y[anchor_to]
    return Projection2D(coords=coords, method="umap", config=asdict(config))


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _maybe_subsample(
    x: np.ndarray, max_points: int | None, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray | None]:
    """Optional uniform subsample for very large inputs.  Returns the
    (possibly reduced) matrix plus, when reduced, a map placing every
    original row at its nearest sampled row so the output keeps one
    coordinate per input row."""
    n = x.shape[0]
    if max_points is None or n <= max_points:
        return x, None
    chosen = np.sort(rng.choice(n, size=max_points, replace=False))
    sample = x[chosen]
    anchor = np.empty(n, dtype=np.int64)
    chunk = max(1, int(2e7) // max(1, max_points))
    for start in range(0, n, chunk):
        block = x[start : start + chunk]
        sq = (block * block).sum(axis=1)[:, None] + (sample * sample).sum(axis=1)[None, :]
        sq -= 2.0 * block @ sample.T
        anchor[start : start + chunk] = np.argmin(sq, axis=1)
    return sample, anchor
