"""Full pipeline orchestration: MPS path in, analysis artifacts out.

Stages run in order (parse, graph, train per architecture, reduce,
cluster, figures, manifest); a failure in any stage removes the files
written so far and re-raises as a stage-tagged error.  The manifest
records the fully resolved configuration (every default made explicit),
instance statistics, per-stage wall times and a sha256 for every
emitted file.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__ as _version
from .bipartite import BipartiteGraph, build_bipartite, export_edges_csv
from .clustering import elbow_scan, kmeans, silhouette_scan
from .encoders import EmbeddingSet, EncoderConfig
from .figures import curve_svg, scatter_svg, sparsity_svg
from .mps import MilpInstance, instance_stats, parse_mps_file
from .projection import Projection2D, TsneConfig, UmapConfig, pca2, tsne2, umap2
from .training import TrainConfig, train

ARCHITECTURES = ("gcn", "gat")
METHODS = ("pca", "tsne", "umap")


class StageError(RuntimeError):
    """Pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    output_dir: str
    architectures: tuple[str, ...] = ARCHITECTURES
    train: TrainConfig = field(default_factory=TrainConfig)
    tsne: TsneConfig = field(default_factory=TsneConfig)
    umap: UmapConfig = field(default_factory=UmapConfig)
    figure_k: int = 10
    k_range: tuple[int, int] = (2, 15)
    seed: int = 0
    standardize_features: bool = True
    export_edges: bool = False

    def __post_init__(self):
        if not self.architectures:
            raise ValueError("at least one architecture must be selected")
        for arch in self.architectures:
            if arch not in ARCHITECTURES:
                raise ValueError(f"unknown architecture {arch!r}")


@dataclass
class RunManifest:
    tool_version: str
    config: dict
    instance: dict
    stage_wall_s: dict[str, float]
    outputs: dict[str, str]  # relative path -> sha256

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_embeddings_csv(path: Path, node_type: str, z: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["node_type", "node_index"] + [f"e{i}" for i in range(z.shape[1])]
        )
        for idx, row in enumerate(z):
            writer.writerow([node_type, idx] + [repr(float(v)) for v in row])


def _write_projection_csv(
    path: Path, node_type: str, proj: Projection2D
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_type", "node_index", "x", "y", "method"])
        for idx, (x, y) in enumerate(proj.coords):
            writer.writerow(
                [node_type, idx, repr(float(x)), repr(float(y)), proj.method]
            )


def read_embeddings_csv(path) -> tuple[str, np.ndarray]:
    """Inverse of the embeddings export: (node_type, matrix)."""
    with open(path, "r", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: empty embeddings file")
    node_type = rows[1][0]
    data = np.array([[float(v) for v in row[2:]] for row in rows[1:]])
    return node_type, data


class _Emitter:
    """Tracks emitted files so a failing stage can clean up after itself."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[Path] = []

    def write_text(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        path.write_text(text, encoding="utf-8")
        self.written.append(path)
        return path

    def path(self, name: str) -> Path:
        path = self.out_dir / name
        self.written.append(path)
        return path

    def rollback(self) -> None:
        for path in self.written:
            try:
                path.unlink(missing_ok=True)
            except OSError:
                pass

    def inventory(self) -> dict[str, str]:
        return {
            p.name: _sha256(p) for p in sorted(self.written) if p.exists()
        }


def _resolve_config(config: PipelineConfig) -> dict:
    """Config snapshot with every default resolved to its concrete value."""
    snapshot = dataclasses.asdict(config)
    snapshot["train"]["encoder"] = dataclasses.asdict(
        config.train.resolved_encoder()
    )
    snapshot["tool_version"] = _version
    return snapshot


def run_pipeline(config: PipelineConfig) -> RunManifest:
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    emitter = _Emitter(out_dir)
    walls: dict[str, float] = {}

    def stage(name: str, fn):
        t0 = time.perf_counter()
        try:
            result = fn()
        except BaseException as exc:
            emitter.rollback()
            raise StageError(name, exc) from exc
        walls[name] = time.perf_counter() - t0
        return result

    inst: MilpInstance = stage("parse", lambda: parse_mps_file(config.input_path))
    stats = instance_stats(inst)

    def build_stage() -> BipartiteGraph:
        graph = build_bipartite(inst, standardize=config.standardize_features)
        emitter.write_text("sparsity.svg", sparsity_svg(inst))
        if config.export_edges:
            export_edges_csv(graph, emitter.path("edges.csv"))
        return graph

    graph = stage("graph", build_stage)

    embeddings: dict[str, EmbeddingSet] = {}

    def train_stage(arch: str):
        train_cfg = dataclasses.replace(
            config.train,
            architecture=arch,
            encoder=dataclasses.replace(
                config.train.resolved_encoder(), architecture=arch
            ),
            seed=config.train.seed if config.train.seed else config.seed,
        )
        params, z, curve = train(graph, train_cfg)
        embeddings[arch] = z
        params.save(emitter.path(f"params_{arch}.json"))
        # wall times stay out of hashed artifacts so reruns are bit-identical;
        # per-epoch timing is available via the standalone train subcommand
        with open(emitter.path(f"loss_{arch}.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "loss"])
            for epoch, value in enumerate(curve.losses):
                writer.writerow([epoch, repr(value)])
        emitter.write_text(
            f"loss_{arch}.svg",
            curve_svg(
                list(range(len(curve.losses))),
                curve.losses,
                f"link-prediction training loss ({arch})",
                "epoch",
                "mean BCE",
            ),
        )
        _write_embeddings_csv(
            emitter.path(f"embeddings_{arch}_var.csv"), "var", z.z_var
        )
        _write_embeddings_csv(
            emitter.path(f"embeddings_{arch}_con.csv"), "con", z.z_con
        )

    for arch in config.architectures:
        stage(f"train_{arch}", lambda arch=arch: train_stage(arch))

    projections: dict[tuple[str, str, str], Projection2D] = {}

    def reduce_stage():
        for arch in config.architectures:
            z = embeddings[arch]
            for node_type, matrix in (("var", z.z_var), ("con", z.z_con)):
                for method in METHODS:
                    if method == "pca":
                        proj = pca2(matrix)
                    elif method == "tsne":
                        proj = tsne2(matrix, _fit_tsne_config(config.tsne, matrix, config.seed))
                    else:
                        proj = umap2(matrix, _fit_umap_config(config.umap, matrix, config.seed))
                    projections[(arch, node_type, method)] = proj
                    _write_projection_csv(
                        emitter.path(f"proj_{arch}_{node_type}_{method}.csv"),
                        node_type,
                        proj,
                    )

    stage("reduce", reduce_stage)

    cluster_labels: dict[tuple[str, str], np.ndarray] = {}

    def cluster_stage():
        for arch in config.architectures:
            z = embeddings[arch]
            for node_type, matrix in (("var", z.z_var), ("con", z.z_con)):
                k = min(config.figure_k, len(matrix))
                result = kmeans(matrix, k, config.seed, compute_silhouette=False)
                cluster_labels[(arch, node_type)] = result.labels
                with open(
                    emitter.path(f"clusters_{arch}_{node_type}.csv"), "w", newline=""
                ) as fh:
                    writer = csv.writer(fh)
                    writer.writerow(["node_type", "node_index", "k", "label"])
                    for idx, label in enumerate(result.labels):
                        writer.writerow([node_type, idx, k, int(label)])

                lo = min(config.k_range[0], len(matrix))
                hi = min(config.k_range[1], len(matrix) - 1)
                if hi < max(lo, 2):
                    continue
                elbow = elbow_scan(matrix, (max(lo, 1), hi), config.seed)
                sil = silhouette_scan(matrix, (max(lo, 2), hi), config.seed)
                sil_by_k = dict(sil.entries)
                with open(
                    emitter.path(f"scan_{arch}_{node_type}.csv"), "w", newline=""
                ) as fh:
                    writer = csv.writer(fh)
                    writer.writerow(["k", "wcss", "mean_silhouette"])
                    for k_value, wcss in elbow.entries:
                        sil_value = sil_by_k.get(k_value)
                        writer.writerow(
                            [
                                k_value,
                                repr(wcss),
                                "" if sil_value is None else repr(sil_value),
                            ]
                        )
                emitter.write_text(
                    f"elbow_{arch}_{node_type}.svg",
                    curve_svg(
                        [k for k, _ in elbow.entries],
                        [w for _, w in elbow.entries],
                        f"elbow scan ({arch} {node_type}), suggested k={elbow.best_k}",
                        "k",
                        "WCSS",
                        marker_x=elbow.best_k,
                    ),
                )
                emitter.write_text(
                    f"silhouette_{arch}_{node_type}.svg",
                    curve_svg(
                        [k for k, _ in sil.entries],
                        [s for _, s in sil.entries],
                        f"silhouette scan ({arch} {node_type}), best k={sil.best_k}",
                        "k",
                        "mean silhouette",
                        marker_x=sil.best_k,
                    ),
                )

    stage("cluster", cluster_stage)

    def figures_stage():
        for (arch, node_type, method), proj in projections.items():
            labels = cluster_labels[(arch, node_type)]
            emitter.write_text(
                f"proj_{arch}_{node_type}_{method}.svg",
                scatter_svg(
                    proj.coords,
                    labels,
                    f"{node_type.upper()}: {arch.upper()} ({method})",
                    xlabel=f"{method} dim 1",
                    ylabel=f"{method} dim 2",
                ),
            )

    stage("figures", figures_stage)

    def manifest_stage() -> RunManifest:
        outputs = emitter.inventory()
        manifest = RunManifest(
            tool_version=_version,
            config=_resolve_config(config),
            instance=stats.as_dict() | {"name": inst.name},
            stage_wall_s={k: round(v, 6) for k, v in walls.items()},
            outputs=outputs,
        )
        emitter.path("manifest.json").write_text(manifest.to_json(), encoding="utf-8")
        # re-hash everything to confirm the inventory is faithful
        for name, digest in outputs.items():
            if _sha256(out_dir / name) != digest:
                raise RuntimeError(f"output {name} changed during the run")
        return manifest

    return stage("manifest", manifest_stage)


def _fit_tsne_config(cfg: TsneConfig, matrix: np.ndarray, seed: int) -> TsneConfig:
    """Clamp perplexity for small inputs and default the seed."""
    n = min(len(matrix), cfg.max_points) if cfg.max_points else len(matrix)
    perplexity = min(cfg.perplexity, max(2.0, (n - 1) / 3.0 - 1e-9))
    return dataclasses.replace(cfg, perplexity=perplexity, seed=cfg.seed or seed)


def _fit_umap_config(cfg: UmapConfig, matrix: np.ndarray, seed: int) -> UmapConfig:
    n = min(len(matrix), cfg.max_points) if cfg.max_points else len(matrix)
    n_neighbors = min(cfg.n_neighbors, max(2, n - 1))
    return dataclasses.replace(cfg, n_neighbors=n_neighbors, seed=cfg.seed or seed)
