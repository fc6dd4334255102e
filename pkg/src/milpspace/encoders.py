"""Two heterogeneous bipartite encoders producing node embeddings.

Both encoders first project raw node features (4-wide for variables,
2-wide for constraints) to the hidden width, then stack message-passing
layers with ReLU in between and no activation after the last:

* convolutional ("gcn"): per node a learned self term plus a learned
  transform of the edge-weighted neighbor sum, per direction;
* attention ("gat"): multi-head attention where each logit is
  leaky_relu(a_src . W h_src + a_dst . W h_dst + c * edge_weight),
  softmax-normalized over each destination's incident edges.  Heads are
  concatenated on hidden layers and averaged on the output layer; the
  scalar c injects the tanh-squashed coefficient into the logit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .bipartite import BipartiteGraph

PARAMS_FORMAT_VERSION = 1


@dataclass(frozen=True)
class EncoderConfig:
    architecture: str = "gcn"  # "gcn" | "gat"
    d_hidden: int = 64
    d_out: int = 64
    n_layers: int = 2
    n_heads: int = 4  # attention only
    leaky_slope: float = 0.2

    def __post_init__(self):
        if self.architecture not in ("gcn", "gat"):
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.n_layers < 1:
            raise ValueError("n_layers must be >= 1")
        if self.architecture == "gat":
            if self.n_heads < 1:
                raise ValueError("n_heads must be >= 1")
            if self.n_layers > 1 and self.d_hidden % self.n_heads:
                raise ValueError("d_hidden must be divisible by n_heads")


class ModelParams:
    """Named parameter tensors for one encoder, in creation order."""

    def __init__(self, config: EncoderConfig, tensors: dict[str, Tensor]):
        self.config = config
        self._tensors = dict(tensors)

    @property
    def architecture(self) -> str:
        return self.config.architecture

    def __getitem__(self, name: str) -> Tensor:
        return self._tensors[name]

    def names(self) -> list[str]:
        return list(self._tensors)

    def tensors(self) -> list[Tensor]:
        return list(self._tensors.values())

    def zero_copy(self) -> "ModelParams":
        return ModelParams(
            self.config,
            {
                k: Tensor(np.zeros_like(v.data), requires_grad=True)
                for k, v in self._tensors.items()
            },
        )

    def validate_finite(self) -> None:
        for name, t in self._tensors.items():
            if not np.all(np.isfinite(t.data)):
                raise ValueError(f"parameter {name} contains non-finite entries")

    def to_json(self) -> str:
        payload = {
            "format_version": PARAMS_FORMAT_VERSION,
            "config": asdict(self.config),
            "tensors": {
                name: {"shape": list(t.shape), "data": t.data.reshape(-1).tolist()}
                for name, t in self._tensors.items()
            },
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        payload = json.loads(text)
        version = payload.get("format_version")
        if version != PARAMS_FORMAT_VERSION:
            raise ValueError(f"unsupported params format version {version!r}")
        config = EncoderConfig(**payload["config"])
        tensors = {}
        for name, spec in payload["tensors"].items():
            rows, cols = spec["shape"]
            data = np.asarray(spec["data"], dtype=np.float64).reshape(rows, cols)
            tensors[name] = Tensor(data, requires_grad=True)
        return cls(config, tensors)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "ModelParams":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


@dataclass
class EmbeddingSet:
    """Learned per-node embeddings plus bookkeeping about their origin."""

    z_var: np.ndarray  # (n_var, d_out)
    z_con: np.ndarray  # (n_con, d_out)
    architecture: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.z_var)) or not np.all(np.isfinite(self.z_con)):
            raise ValueError("embeddings contain non-finite entries")


def _layer_dims(config: EncoderConfig) -> list[tuple[int, int]]:
    """(d_in, d_out) per layer; hidden layers keep d_hidden, the last
    layer emits d_out."""
    dims = []
    for i in range(config.n_layers):
        d_in = config.d_hidden
        d_out = config.d_out if i == config.n_layers - 1 else config.d_hidden
        dims.append((d_in, d_out))
    return dims


def init_params(
    config: EncoderConfig, seed: int, graph: BipartiteGraph | None = None
) -> ModelParams:
    """Seeded uniform(+-sqrt(6/(fan_in+fan_out))) weights, zero biases,
    attention edge coefficients starting at 1.

    When the target graph is supplied, the convolutional direction
    matrices shrink by 1/sqrt(mean in-degree): their inputs are
    unnormalized neighbor sums, so the effective fan-in grows with
    degree and plain Xavier initialization makes the first logits
    explode on dense instances.  Attention outputs are convex
    combinations and need no correction.
    """
    rng = np.random.default_rng(seed)
    tensors: dict[str, Tensor] = {}

    def weight(name: str, fan_in: int, fan_out: int, scale: float = 1.0) -> None:
        bound = scale * np.sqrt(6.0 / (fan_in + fan_out))
        data = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        tensors[name] = Tensor(data, requires_grad=True)

    def bias(name: str, width: int) -> None:
        tensors[name] = Tensor(np.zeros((1, width)), requires_grad=True)

    vc_scale = cv_scale = 1.0
    if graph is not None and graph.n_edges:
        vc_scale = 1.0 / np.sqrt(max(1.0, graph.n_edges / graph.n_con))
        cv_scale = 1.0 / np.sqrt(max(1.0, graph.n_edges / graph.n_var))

    weight("proj_var_w", 4, config.d_hidden)
    bias("proj_var_b", config.d_hidden)
    weight("proj_con_w", 2, config.d_hidden)
    bias("proj_con_b", config.d_hidden)

    for i, (d_in, d_out) in enumerate(_layer_dims(config)):
        if config.architecture == "gcn":
            weight(f"layer{i}_self_var_w", d_in, d_out)
            weight(f"layer{i}_self_con_w", d_in, d_out)
            weight(f"layer{i}_vc_w", d_in, d_out, scale=vc_scale)
            weight(f"layer{i}_cv_w", d_in, d_out, scale=cv_scale)
            bias(f"layer{i}_var_b", d_out)
            bias(f"layer{i}_con_b", d_out)
        else:
            last = i == config.n_layers - 1
            d_head = d_out if last else d_out // config.n_heads
            for direction in ("vc", "cv"):
                for h in range(config.n_heads):
                    stem = f"layer{i}_{direction}_h{h}"
                    weight(f"{stem}_w", d_in, d_head)
                    weight(f"{stem}_a_src", d_head, 1)
                    weight(f"{stem}_a_dst", d_head, 1)
                    tensors[f"{stem}_c"] = Tensor(
                        np.ones((1, 1)), requires_grad=True
                    )
            bias(f"layer{i}_var_b", d_out)
            bias(f"layer{i}_con_b", d_out)

    return ModelParams(config, tensors)


def gcn_layer_forward(
    graph: BipartiteGraph,
    h_var: Tensor,
    h_con: Tensor,
    params: ModelParams,
    layer: int,
    edge_w: Tensor | None = None,
) -> tuple[Tensor, Tensor]:
    """One convolutional layer: out = W_self h + W_dir (sum of weighted
    neighbor features) + bias, per node type."""
    if edge_w is None:
        edge_w = ad.column(graph.weight)
    p = lambda name: params[f"layer{layer}_{name}"]

    msg_vc = ad.mul(ad.gather_rows(h_var, graph.edge_var), edge_w)
    agg_con = ad.segment_sum(msg_vc, graph.edge_con, graph.n_con)
    new_con = ad.add(
        ad.add(ad.matmul(h_con, p("self_con_w")), ad.matmul(agg_con, p("vc_w"))),
        p("con_b"),
    )

    msg_cv = ad.mul(ad.gather_rows(h_con, graph.edge_con), edge_w)
    agg_var = ad.segment_sum(msg_cv, graph.edge_var, graph.n_var)
    new_var = ad.add(
        ad.add(ad.matmul(h_var, p("self_var_w")), ad.matmul(agg_var, p("cv_w"))),
        p("var_b"),
    )
    return new_var, new_con


def _gat_direction(
    h_src: Tensor,
    h_dst: Tensor,
    src_idx: np.ndarray,
    dst_idx: np.ndarray,
    n_dst: int,
    edge_w: Tensor,
    params: ModelParams,
    stem: str,
    n_heads: int,
    merge: str,
    slope: float,
) -> Tensor:
    head_outs = []
    for h in range(n_heads):
        w = params[f"{stem}_h{h}_w"]
        wh_src = ad.matmul(h_src, w)
        wh_dst = ad.matmul(h_dst, w)
        score_src = ad.gather_rows(ad.matmul(wh_src, params[f"{stem}_h{h}_a_src"]), src_idx)
        score_dst = ad.gather_rows(ad.matmul(wh_dst, params[f"{stem}_h{h}_a_dst"]), dst_idx)
        logits = ad.leaky_relu(
            ad.add(ad.add(score_src, score_dst), ad.mul(edge_w, params[f"{stem}_h{h}_c"])),
            slope=slope,
        )
        alpha = ad.segment_softmax(logits, dst_idx, n_dst)
        messages = ad.mul(ad.gather_rows(wh_src, src_idx), alpha)
        head_outs.append(ad.segment_sum(messages, dst_idx, n_dst))

    if merge == "concat":
        out = head_outs[0]
        for extra in head_outs[1:]:
            out = ad.concat_cols(out, extra)
        return out
    total = head_outs[0]
    for extra in head_outs[1:]:
        total = ad.add(total, extra)
    return ad.mul(total, Tensor(np.array([[1.0 / n_heads]])))


def gat_layer_forward(
    graph: BipartiteGraph,
    h_var: Tensor,
    h_con: Tensor,
    params: ModelParams,
    layer: int,
    edge_w: Tensor | None = None,
) -> tuple[Tensor, Tensor]:
    """One attention layer in both directions.  Heads are concatenated on
    hidden layers and averaged on the last."""
    config = params.config
    if edge_w is None:
        edge_w = ad.column(graph.weight)
    merge = "mean" if layer == config.n_layers - 1 else "concat"
    new_con = _gat_direction(
        h_var,
        h_con,
        graph.edge_var,
        graph.edge_con,
        graph.n_con,
        edge_w,
        params,
        f"layer{layer}_vc",
        config.n_heads,
        merge,
        config.leaky_slope,
    )
    new_var = _gat_direction(
        h_con,
        h_var,
        graph.edge_con,
        graph.edge_var,
        graph.n_var,
        edge_w,
        params,
        f"layer{layer}_cv",
        config.n_heads,
        merge,
        config.leaky_slope,
    )
    new_con = ad.add(new_con, params[f"layer{layer}_con_b"])
    new_var = ad.add(new_var, params[f"layer{layer}_var_b"])
    return new_var, new_con


def encode_tensors(
    graph: BipartiteGraph, params: ModelParams
) -> tuple[Tensor, Tensor]:
    """Differentiable forward pass -> (h_var, h_con) tensors."""
    config = params.config
    edge_w = ad.column(graph.weight)
    h_var = ad.add(
        ad.matmul(Tensor(graph.var_features), params["proj_var_w"]),
        params["proj_var_b"],
    )
    h_con = ad.add(
        ad.matmul(Tensor(graph.con_features), params["proj_con_w"]),
        params["proj_con_b"],
    )
    layer_fn = gcn_layer_forward if config.architecture == "gcn" else gat_layer_forward
    for i in range(config.n_layers):
        h_var, h_con = layer_fn(graph, h_var, h_con, params, i, edge_w)
        if i < config.n_layers - 1:
            h_var, h_con = ad.relu(h_var), ad.relu(h_con)
    return h_var, h_con


def encode(graph: BipartiteGraph, params: ModelParams, meta: dict | None = None) -> EmbeddingSet:
    """Pure forward pass producing an EmbeddingSet (no tape involved)."""
    h_var, h_con = encode_tensors(graph, params)
    return EmbeddingSet(
        z_var=h_var.data.copy(),
        z_con=h_con.data.copy(),
        architecture=params.architecture,
        meta=dict(meta or {}),
    )
