"""Reproduce the air05 analysis: exact instance statistics, training-loss
comparison of both encoders, and the 2D instance-space views.

air05.mps is not redistributed here; download it first:

    curl -LO https://miplib.zib.de/WebData/instances/air05.mps.gz
    gunzip air05.mps.gz            # the parser reads plain text

Run:  python3 demos/05_air05.py path/to/air05.mps
Expect roughly 5-15 minutes end to end on a desktop CPU.
"""

import sys
from pathlib import Path

import milpspace as ms
from milpspace.encoders import EncoderConfig
from milpspace.pipeline import PipelineConfig, run_pipeline
from milpspace.projection import TsneConfig, UmapConfig

OUT = Path(__file__).parent / "out" / "air05"

if len(sys.argv) != 2 or not Path(sys.argv[1]).is_file():
    sys.exit(__doc__)

inst = ms.parse_mps_file(sys.argv[1])
stats = ms.instance_stats(inst)
print(f"air05: {stats.n_vars} variables ({stats.n_integer_vars} integer), "
      f"{stats.n_cons} constraints")
print(f"nonzeros: {stats.nnz}, density {100 * stats.density:.2f}%")
assert (stats.n_vars, stats.n_cons, stats.nnz) == (7195, 426, 52121)

config = PipelineConfig(
    input_path=sys.argv[1],
    output_dir=str(OUT),
    train=ms.TrainConfig(architecture="gcn"),
    # exact t-SNE on all 7195 variable nodes is O(n^2) per iteration and
    # dominates the runtime; subsample for a quicker look
    tsne=TsneConfig(max_points=2000),
    umap=UmapConfig(),
    figure_k=10,
    k_range=(2, 15),
    seed=0,
)
manifest = run_pipeline(config)

print(f"\n{len(manifest.outputs)} artifacts in {OUT}")
for arch in ("gcn", "gat"):
    losses = [
        float(line.split(",")[1])
        for line in (OUT / f"loss_{arch}.csv").read_text().splitlines()[1:]
    ]
    print(f"{arch}: loss {losses[0]:.4f} -> {losses[-1]:.4f}")
print("compare proj_gcn_con_tsne.svg vs proj_gat_con_tsne.svg for the "
      "constraint-space contrast")
