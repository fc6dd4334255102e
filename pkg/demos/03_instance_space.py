"""Project trained embeddings to 2D three ways (PCA, t-SNE, UMAP), pick
a cluster count with the elbow and silhouette scans, and render the
colored instance-space views.

Run:  python3 demos/03_instance_space.py
"""

from pathlib import Path

import milpspace as ms
from milpspace.figures import curve_svg, scatter_svg
from milpspace.projection import TsneConfig, UmapConfig

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

inst = ms.generate_set_partitioning(seed=7, n_flights=25, n_pairings=140)
graph = ms.build_bipartite(inst)
config = ms.TrainConfig(epochs=150, architecture="gcn", seed=0)
_, z, _ = ms.train(graph, config)
print(f"embeddings: z_var {z.z_var.shape}, z_con {z.z_con.shape}")

# which k! WCSS elbow and mean silhouette often disagree; inspect both
elbow = ms.elbow_scan(z.z_var, (1, 12), seed=0)
sil = ms.silhouette_scan(z.z_var, (2, 12), seed=0)
print(f"elbow suggests k={elbow.best_k}; silhouette prefers k={sil.best_k}")
(OUT / "elbow_var.svg").write_text(
    curve_svg(
        [k for k, _ in elbow.entries],
        [w for _, w in elbow.entries],
        f"variable-embedding elbow (suggested k={elbow.best_k})",
        "k",
        "WCSS",
        marker_x=elbow.best_k,
    )
)
(OUT / "silhouette_var.svg").write_text(
    curve_svg(
        [k for k, _ in sil.entries],
        [s for _, s in sil.entries],
        f"variable-embedding silhouette (best k={sil.best_k})",
        "k",
        "mean silhouette",
        marker_x=sil.best_k,
    )
)

k = sil.best_k
clusters = ms.kmeans(z.z_var, k, seed=0)
print(f"k-means at k={k}: wcss={clusters.wcss:.2f}, silhouette={clusters.mean_silhouette:.3f}")

projections = {
    "pca": ms.pca2(z.z_var),
    "tsne": ms.tsne2(z.z_var, TsneConfig(perplexity=20, iterations=500, seed=0)),
    "umap": ms.umap2(z.z_var, UmapConfig(n_neighbors=10, epochs=200, seed=0)),
}
for method, proj in projections.items():
    path = OUT / f"var_{method}.svg"
    path.write_text(
        scatter_svg(
            proj.coords,
            clusters.labels,
            f"VAR nodes, {method} (k={k})",
            xlabel=f"{method} dim 1",
            ylabel=f"{method} dim 2",
        )
    )
    print(f"wrote {path}")
if projections["pca"].explained_variance_ratio:
    pc1, pc2 = projections["pca"].explained_variance_ratio
    print(f"PCA explains {100 * pc1:.1f}% + {100 * pc2:.1f}% of the variance")
