"""Self-supervised link-prediction training of the bipartite encoders.

True (var, con) edges are the positive samples; an equal number of
uniformly sampled non-edges are the negatives.  Embedding pairs are
scored by dot product and trained full-batch with Adam on the stable
binary cross-entropy from logits.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .autodiff import Tape, Tensor
from .bipartite import BipartiteGraph
from .encoders import (
    EmbeddingSet,
    EncoderConfig,
    ModelParams,
    encode_tensors,
    init_params,
)


class TrainingDivergedError(RuntimeError):
    """Raised when the loss becomes non-finite; carries diagnostics."""

    def __init__(self, epoch: int, param_norms: dict[str, float]):
        self.epoch = epoch
        self.param_norms = param_norms
        worst = max(param_norms.items(), key=lambda kv: kv[1]) if param_norms else ("-", 0.0)
        super().__init__(
            f"non-finite loss at epoch {epoch}; largest parameter norm "
            f"{worst[0]}={worst[1]:.3e}"
        )


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    resample_negatives_each_epoch: bool = True
    architecture: str = "gcn"
    encoder: EncoderConfig | None = None

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.optimizer != "adam":
            raise ValueError(f"unsupported optimizer {self.optimizer!r}")
        if self.encoder is not None and self.encoder.architecture != self.architecture:
            raise ValueError("encoder.architecture must match architecture")

    def resolved_encoder(self) -> EncoderConfig:
        return self.encoder or EncoderConfig(architecture=self.architecture)


@dataclass
class LossCurve:
    losses: list[float] = field(default_factory=list)
    wall_ms: list[float] = field(default_factory=list)

    def __post_init__(self):
        bad = [v for v in self.losses if not (np.isfinite(v) and v >= 0.0)]
        if bad:
            raise ValueError(f"loss curve contains invalid values: {bad[:3]}")


def sample_negatives(graph: BipartiteGraph, m: int, seed: int) -> np.ndarray:
    """m distinct (var, con) non-edges, uniform via rejection sampling
    against the hashed edge set; deterministic per seed.  Returns an
    (m, 2) int array of [var_index, con_index] rows."""
    total = graph.n_var * graph.n_con
    available = total - graph.n_edges
    if available <= 0:
        raise ValueError("no negative pairs exist: every (var, con) pair is an edge")
    if m > available:
        raise ValueError(f"requested {m} negatives but only {available} non-edges exist")

    taken = graph.edge_set()
    rng = np.random.default_rng(seed)
    out = np.empty((m, 2), dtype=np.int64)
    found = 0
    while found < m:
        batch = max(16, int((m - found) * 1.5))
        vi = rng.integers(0, graph.n_var, size=batch)
        ci = rng.integers(0, graph.n_con, size=batch)
        keys = vi * graph.n_con + ci
        for v, c, key in zip(vi, ci, keys):
            if key in taken:
                continue
            taken.add(key)
            out[found, 0] = v
            out[found, 1] = c
            found += 1
            if found == m:
                break
    return out


def link_logits(z: EmbeddingSet, pairs) -> np.ndarray:
    """Dot-product score z_var[i] . z_con[j] for each (i, j) pair."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    vi, ci = pairs[:, 0], pairs[:, 1]
    if len(vi) and (vi.min() < 0 or vi.max() >= len(z.z_var)):
        raise IndexError("variable index out of range")
    if len(ci) and (ci.min() < 0 or ci.max() >= len(z.z_con)):
        raise IndexError("constraint index out of range")
    return np.einsum("ij,ij->i", z.z_var[vi], z.z_con[ci])


def bce_with_logits(logits, labels) -> float:
    """Mean stable BCE of raw scores against {0, 1} labels."""
    z = np.asarray(logits, dtype=np.float64).reshape(-1)
    y = np.asarray(labels, dtype=np.float64).reshape(-1)
    if len(z) != len(y):
        raise ValueError("logits and labels must have equal length")
    if len(z) == 0:
        raise ValueError("empty input")
    return float((np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))).mean())


def link_auc(pos_logits, neg_logits) -> float:
    """Rank-sum (Mann-Whitney) AUC of positive over negative scores."""
    pos = np.asarray(pos_logits, dtype=np.float64).reshape(-1)
    neg = np.asarray(neg_logits, dtype=np.float64).reshape(-1)
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("need both positive and negative scores")
    scores = np.concatenate([pos, neg])
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores))
    ranks[order] = np.arange(1, len(scores) + 1)
    # average ranks within tied groups
    sorted_scores = scores[order]
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        if j > i:
            ranks[order[i : j + 1]] = (i + 1 + j + 1) / 2.0
        i = j + 1
    rank_sum = ranks[: len(pos)].sum()
    return float((rank_sum - len(pos) * (len(pos) + 1) / 2.0) / (len(pos) * len(neg)))


class _Adam:
    def __init__(self, params: list[Tensor], config: TrainConfig):
        self.params = params
        self.lr = config.learning_rate
        self.b1 = config.beta1
        self.b2 = config.beta2
        self.eps = config.adam_eps
        self.m = [np.zeros_like(p.data) for p in params]
        self.v = [np.zeros_like(p.data) for p in params]
        self.t = 0

    def step(self, grads: list[np.ndarray]) -> None:
        self.t += 1
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.b1
            m += (1.0 - self.b1) * g
            v *= self.b2
            v += (1.0 - self.b2) * g * g
            m_hat = m / (1.0 - self.b1**self.t)
            v_hat = v / (1.0 - self.b2**self.t)
            p.data -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def _negative_seed(seed: int, epoch: int) -> int:
    return int(np.random.SeedSequence([seed, epoch]).generate_state(1)[0])


def train(
    graph: BipartiteGraph,
    config: TrainConfig,
    params: ModelParams | None = None,
) -> tuple[ModelParams, EmbeddingSet, LossCurve]:
    """Full-batch link-prediction training loop.

    Each epoch: forward encode, score the true edges (label 1) and an
    equal number of sampled non-edges (label 0), take the mean BCE,
    backpropagate, Adam step.  The recorded epoch loss is measured
    before that epoch's update, so losses[0] is the untrained loss.
    """
    if params is None:
        params = init_params(config.resolved_encoder(), config.seed, graph=graph)
    tensors = params.tensors()
    adam = _Adam(tensors, config)

    if graph.n_edges == 0:
        raise ValueError("graph has no edges to train on")
    # one negative per positive, clamped for dense toy graphs
    m = min(graph.n_edges, graph.n_var * graph.n_con - graph.n_edges)
    pos = np.stack([graph.edge_var, graph.edge_con], axis=1)
    labels = ad.column(np.concatenate([np.ones(graph.n_edges), np.zeros(m)]))
    negatives = sample_negatives(graph, m, _negative_seed(config.seed, 0))

    losses: list[float] = []
    wall_ms: list[float] = []
    for epoch in range(config.epochs):
        t0 = time.perf_counter()
        if epoch > 0 and config.resample_negatives_each_epoch:
            negatives = sample_negatives(graph, m, _negative_seed(config.seed, epoch))
        pair_var = np.concatenate([pos[:, 0], negatives[:, 0]])
        pair_con = np.concatenate([pos[:, 1], negatives[:, 1]])

        with Tape() as tape:
            h_var, h_con = encode_tensors(graph, params)
            logits = ad.pair_dot(
                ad.gather_rows(h_var, pair_var), ad.gather_rows(h_con, pair_con)
            )
            loss = ad.bce_with_logits(logits, labels)
        value = loss.item()
        if not np.isfinite(value):
            norms = {
                name: float(np.linalg.norm(params[name].data))
                for name in params.names()
            }
            raise TrainingDivergedError(epoch, norms)
        losses.append(value)

        grads = tape.gradients(loss, tensors)
        adam.step(grads)
        wall_ms.append((time.perf_counter() - t0) * 1e3)

    h_var, h_con = encode_tensors(graph, params)
    embeddings = EmbeddingSet(
        z_var=h_var.data.copy(),
        z_con=h_con.data.copy(),
        architecture=params.architecture,
        meta={"epochs": config.epochs, "seed": config.seed},
    )
    return params, embeddings, LossCurve(losses, wall_ms)
