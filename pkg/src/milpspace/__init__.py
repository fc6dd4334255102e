"""Bipartite-graph embeddings and instance space analysis for MILP instances.

The library turns a MILP instance (read from an MPS file or generated
synthetically) into a heterogeneous variable/constraint bipartite graph,
learns node embeddings with two GNN encoders trained on self-supervised
link prediction, and analyzes the embedding geometry with 2D projections
(PCA, t-SNE, UMAP) and k-means cluster validation.
"""

__version__ = "0.1.0"

from .mps import (
    ConstraintRecord,
    InstanceStats,
    MilpInstance,
    MpsParseError,
    ObjSense,
    Sense,
    SparseMatrix,
    VariableRecord,
    generate_set_partitioning,
    instance_stats,
    parse_mps,
    parse_mps_file,
    write_mps,
    write_mps_file,
)
from .bipartite import (
    BipartiteGraph,
    build_bipartite,
    constraint_features,
    edge_weight,
    variable_features,
)
from .autodiff import Tape, Tensor, finite_difference_check
from .encoders import (
    EmbeddingSet,
    EncoderConfig,
    ModelParams,
    encode,
    gat_layer_forward,
    gcn_layer_forward,
    init_params,
)
from .training import (
    LossCurve,
    TrainConfig,
    TrainingDivergedError,
    bce_with_logits,
    link_auc,
    link_logits,
    sample_negatives,
    train,
)
from .projection import (
    Projection2D,
    TsneConfig,
    UmapConfig,
    pca2,
    tsne2,
    umap2,
)
from .clustering import (
    ClusteringResult,
    ScanResult,
    elbow_scan,
    kmeans,
    silhouette_scan,
    silhouette_score,
)
from .pipeline import PipelineConfig, RunManifest, StageError, run_pipeline

__all__ = [
    "BipartiteGraph",
    "ClusteringResult",
    "ConstraintRecord",
    "EmbeddingSet",
    "EncoderConfig",
    "InstanceStats",
    "LossCurve",
    "MilpInstance",
    "ModelParams",
    "MpsParseError",
    "ObjSense",
    "PipelineConfig",
    "Projection2D",
    "RunManifest",
    "ScanResult",
    "Sense",
    "SparseMatrix",
    "StageError",
    "Tape",
    "Tensor",
    "TrainConfig",
    "TrainingDivergedError",
    "TsneConfig",
    "UmapConfig",
    "VariableRecord",
    "bce_with_logits",
    "build_bipartite",
    "constraint_features",
    "edge_weight",
    "elbow_scan",
    "encode",
    "finite_difference_check",
    "gat_layer_forward",
    "gcn_layer_forward",
    "generate_set_partitioning",
    "init_params",
    "instance_stats",
    "kmeans",
    "link_auc",
    "link_logits",
    "parse_mps",
    "parse_mps_file",
    "pca2",
    "run_pipeline",
    "sample_negatives",
    "silhouette_scan",
    "silhouette_score",
    "train",
    "tsne2",
    "umap2",
    "variable_features",
    "write_mps",
    "write_mps_file",
]
