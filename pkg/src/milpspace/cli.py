"""Command-line interface.

Subcommands mirror the pipeline stages so each is independently
invocable: parse, gen, graph, train, reduce, cluster and run (the full
pipeline).  Exit codes: 0 success, 1 usage, 2 parse error, 3 numeric
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bipartite import build_bipartite, export_edges_csv
from .clustering import elbow_scan, kmeans, silhouette_scan
from .encoders import EncoderConfig
from .figures import curve_svg, scatter_svg, sparsity_svg
from .mps import (
    MpsParseError,
    generate_set_partitioning,
    instance_stats,
    parse_mps_file,
    write_mps_file,
)
from .pipeline import (
    PipelineConfig,
    StageError,
    read_embeddings_csv,
    run_pipeline,
)
from .projection import TsneConfig, UmapConfig, pca2, tsne2, umap2
from .training import TrainConfig, TrainingDivergedError, train

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milpspace",
        description="MILP bipartite-graph embeddings and instance space analysis",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse an MPS file and print instance stats")
    p.add_argument("input", help="path to an MPS file")
    p.add_argument("--json", dest="json_out", help="also write the stats to this path")

    p = sub.add_parser("gen", help="generate a synthetic set-partitioning instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flights", type=int, default=20)
    p.add_argument("--pairings", type=int, default=120)
    p.add_argument("-o", "--output", required=True, help="output MPS path")

    p = sub.add_parser("graph", help="build the bipartite graph and export views")
    p.add_argument("input")
    p.add_argument("--edges-csv", help="edge list CSV output path")
    p.add_argument("--sparsity-svg", help="sparsity plot SVG output path")
    p.add_argument(
        "--raw-features",
        action="store_true",
        help="skip feature standardization (clamped raw values)",
    )

    p = sub.add_parser("train", help="train one encoder and export its artifacts")
    p.add_argument("input")
    p.add_argument("--arch", choices=("gcn", "gat"), default="gcn")
    p.add_argument("-o", "--output-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_train_flags(p)
    p.add_argument("--raw-features", action="store_true")

    p = sub.add_parser("reduce", help="project an embeddings CSV to 2D")
    p.add_argument("--embeddings", required=True, help="embeddings CSV path")
    p.add_argument("--method", choices=("pca", "tsne", "umap"), required=True)
    p.add_argument("-o", "--output", required=True, help="projection CSV path")
    p.add_argument("--svg", help="optional scatter SVG path (single color)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--n-neighbors", type=int, default=15)
    p.add_argument("--min-dist", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--max-points", type=int, default=None)

    p = sub.add_parser("cluster", help="k-means plus model-selection scans")
    p.add_argument("--embeddings", required=True, help="embeddings or projection CSV")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output-prefix", required=True)

    p = sub.add_parser("run", help="run the full pipeline")
    p.add_argument("input")
    p.add_argument("-o", "--output-dir", required=True)
    p.add_argument(
        "--arch",
        action="append",
        choices=("gcn", "gat"),
        help="architecture to run (repeatable; default both)",
    )
    p.add_argument("--config", help="JSON file with pipeline config overrides")
    p.add_argument("--figure-k", type=int, default=10)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=15)
    p.add_argument("--raw-features", action="store_true")
    p.add_argument("--export-edges", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    _add_train_flags(p)
    p.add_argument("--tsne-iterations", type=int, default=1000)
    p.add_argument("--tsne-perplexity", type=float, default=30.0)
    p.add_argument("--umap-epochs", type=int, default=500)
    p.add_argument("--umap-neighbors", type=int, default=15)
    p.add_argument("--max-points", type=int, default=None)
    return parser


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--d-hidden", type=int, default=64)
    p.add_argument("--d-out", type=int, default=64)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument(
        "--fixed-negatives",
        action="store_true",
        help="sample the negative pairs once instead of every epoch",
    )


def _cmd_parse(args) -> int:
    inst = parse_mps_file(args.input)
    stats = instance_stats(inst).as_dict() | {"name": inst.name}
    text = json.dumps(stats, indent=2)
    print(text)
    if args.json_out:
        Path(args.json_out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_gen(args) -> int:
    inst = generate_set_partitioning(args.seed, args.flights, args.pairings)
    write_mps_file(inst, args.output)
    print(f"wrote {args.output}: {inst.n_vars} vars, {inst.n_cons} cons")
    return EXIT_OK


def _cmd_graph(args) -> int:
    inst = parse_mps_file(args.input)
    graph = build_bipartite(inst, standardize=not args.raw_features)
    print(
        f"graph: {graph.n_var} var nodes, {graph.n_con} con nodes, "
        f"{graph.n_edges} edges"
    )
    if args.edges_csv:
        export_edges_csv(graph, args.edges_csv)
    if args.sparsity_svg:
        Path(args.sparsity_svg).write_text(sparsity_svg(inst), encoding="utf-8")
    return EXIT_OK


def _train_config(args, arch: str) -> TrainConfig:
    encoder = EncoderConfig(
        architecture=arch,
        d_hidden=args.d_hidden,
        d_out=args.d_out,
        n_layers=args.layers,
        n_heads=args.heads,
    )
    return TrainConfig(
        epochs=args.epochs,
        learning_rate=args.lr,
        seed=args.seed,
        resample_negatives_each_epoch=not args.fixed_negatives,
        architecture=arch,
        encoder=encoder,
    )


def _cmd_train(args) -> int:
    inst = parse_mps_file(args.input)
    graph = build_bipartite(inst, standardize=not args.raw_features)
    params, z, curve = train(graph, _train_config(args, args.arch))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    params.save(out / f"params_{args.arch}.json")
    with open(out / f"loss_{args.arch}.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "loss", "wall_ms"])
        for epoch, (value, ms) in enumerate(zip(curve.losses, curve.wall_ms)):
            writer.writerow([epoch, repr(value), f"{ms:.3f}"])
    for node_type, matrix in (("var", z.z_var), ("con", z.z_con)):
        path = out / f"embeddings_{args.arch}_{node_type}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["node_type", "node_index"] + [f"e{i}" for i in range(matrix.shape[1])]
            )
            for idx, row in enumerate(matrix):
                writer.writerow([node_type, idx] + [repr(float(v)) for v in row])
    print(
        f"trained {args.arch}: first loss {curve.losses[0]:.4f}, "
        f"final loss {curve.losses[-1]:.4f}"
    )
    return EXIT_OK


def _cmd_reduce(args) -> int:
    node_type, matrix = read_embeddings_csv(args.embeddings)
    if args.method == "pca":
        proj = pca2(matrix)
    elif args.method == "tsne":
        proj = tsne2(
            matrix,
            TsneConfig(
                perplexity=args.perplexity,
                iterations=args.iterations,
                seed=args.seed,
                max_points=args.max_points,
            ),
        )
    else:
        proj = umap2(
            matrix,
            UmapConfig(
                n_neighbors=args.n_neighbors,
                min_dist=args.min_dist,
                epochs=args.epochs,
                seed=args.seed,
                max_points=args.max_points,
            ),
        )
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_type", "node_index", "x", "y", "method"])
        for idx, (x, y) in enumerate(proj.coords):
            writer.writerow([node_type, idx, repr(float(x)), repr(float(y)), proj.method])
    if args.svg:
        Path(args.svg).write_text(
            scatter_svg(
                proj.coords,
                np.zeros(len(proj.coords), dtype=int),
                f"{node_type}: {args.method}",
            ),
            encoding="utf-8",
        )
    print(f"reduced {len(proj.coords)} points with {args.method}")
    return EXIT_OK


def _cmd_cluster(args) -> int:
    node_type, matrix = read_embeddings_csv(args.embeddings)
    k = min(args.k, len(matrix))
    result = kmeans(matrix, k, args.seed)
    prefix = Path(args.output_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    with open(f"{prefix}_clusters.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_type", "node_index", "k", "label"])
        for idx, label in enumerate(result.labels):
            writer.writerow([node_type, idx, k, int(label)])

    hi = min(args.k_max, len(matrix) - 1)
    lo = min(args.k_min, hi)
    elbow = elbow_scan(matrix, (max(1, lo), hi), args.seed)
    sil = silhouette_scan(matrix, (max(2, lo), hi), args.seed)
    sil_by_k = dict(sil.entries)
    with open(f"{prefix}_scan.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "wcss", "mean_silhouette"])
        for k_value, wcss in elbow.entries:
            sil_value = sil_by_k.get(k_value)
            writer.writerow(
                [k_value, repr(wcss), "" if sil_value is None else repr(sil_value)]
            )
    Path(f"{prefix}_elbow.svg").write_text(
        curve_svg(
            [k_ for k_, _ in elbow.entries],
            [w for _, w in elbow.entries],
            f"elbow scan, suggested k={elbow.best_k}",
            "k",
            "WCSS",
            marker_x=elbow.best_k,
        ),
        encoding="utf-8",
    )
    Path(f"{prefix}_silhouette.svg").write_text(
        curve_svg(
            [k_ for k_, _ in sil.entries],
            [s for _, s in sil.entries],
            f"silhouette scan, best k={sil.best_k}",
            "k",
            "mean silhouette",
            marker_x=sil.best_k,
        ),
        encoding="utf-8",
    )
    print(
        f"k={k}: wcss={result.wcss:.4f}, "
        f"silhouette={result.mean_silhouette if result.mean_silhouette is not None else 'n/a'}; "
        f"elbow suggests k={elbow.best_k}, silhouette prefers k={sil.best_k}"
    )
    return EXIT_OK


def _cmd_run(args) -> int:
    train_cfg = _train_config(args, "gcn")
    config = PipelineConfig(
        input_path=args.input,
        output_dir=args.output_dir,
        architectures=tuple(args.arch) if args.arch else ("gcn", "gat"),
        train=train_cfg,
        tsne=TsneConfig(
            perplexity=args.tsne_perplexity,
            iterations=args.tsne_iterations,
            seed=args.seed,
            max_points=args.max_points,
        ),
        umap=UmapConfig(
            n_neighbors=args.umap_neighbors,
            epochs=args.umap_epochs,
            seed=args.seed,
            max_points=args.max_points,
        ),
        figure_k=args.figure_k,
        k_range=(args.k_min, args.k_max),
        seed=args.seed,
        standardize_features=not args.raw_features,
        export_edges=args.export_edges,
    )
    if args.config:
        config = _merge_config_file(config, args.config)
    manifest = run_pipeline(config)
    print(f"pipeline complete: {len(manifest.outputs)} artifacts in {args.output_dir}")
    return EXIT_OK


def _merge_config_file(config: PipelineConfig, path: str) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        overrides = json.load(fh)
    kwargs = {}
    for key, value in overrides.items():
        if key == "train":
            encoder = value.pop("encoder", None)
            train_kwargs = dataclasses.asdict(config.train)
            train_kwargs.pop("encoder")
            train_kwargs.update(value)
            enc_cfg = None
            if encoder is not None:
                enc_cfg = EncoderConfig(**encoder)
                train_kwargs["architecture"] = enc_cfg.architecture
            kwargs["train"] = TrainConfig(encoder=enc_cfg, **train_kwargs)
        elif key == "tsne":
            kwargs["tsne"] = dataclasses.replace(config.tsne, **value)
        elif key == "umap":
            kwargs["umap"] = dataclasses.replace(config.umap, **value)
        elif key in ("architectures", "k_range"):
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    return dataclasses.replace(config, **kwargs)


_COMMANDS = {
    "parse": _cmd_parse,
    "gen": _cmd_gen,
    "graph": _cmd_graph,
    "train": _cmd_train,
    "reduce": _cmd_reduce,
    "cluster": _cmd_cluster,
    "run": _cmd_run,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        return _COMMANDS[args.command](args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        cause = exc.cause
        if isinstance(cause, MpsParseError):
            return EXIT_PARSE
        if isinstance(cause, (TrainingDivergedError, FloatingPointError)):
            return EXIT_NUMERIC
        if isinstance(cause, OSError):
            return EXIT_IO
        return EXIT_NUMERIC
    except MpsParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (TrainingDivergedError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
