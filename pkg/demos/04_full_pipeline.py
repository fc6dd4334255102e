"""End-to-end pipeline on a generated instance: parse, graph, train both
encoders, reduce three ways, cluster, export everything with a manifest.

Run:  python3 demos/04_full_pipeline.py
Equivalent CLI:
  milpspace gen --seed 7 --flights 25 --pairings 140 -o demos/out/setpart.mps
  milpspace run demos/out/setpart.mps -o demos/out/pipeline \\
      --epochs 60 --tsne-iterations 300 --umap-epochs 150 --k-max 8
"""

import json
from pathlib import Path

import milpspace as ms
from milpspace.encoders import EncoderConfig
from milpspace.pipeline import PipelineConfig, run_pipeline
from milpspace.projection import TsneConfig, UmapConfig

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

mps_path = OUT / "setpart.mps"
ms.write_mps_file(ms.generate_set_partitioning(7, 25, 140), mps_path)

config = PipelineConfig(
    input_path=str(mps_path),
    output_dir=str(OUT / "pipeline"),
    train=ms.TrainConfig(
        epochs=60,
        architecture="gcn",
        encoder=EncoderConfig(architecture="gcn", d_hidden=32, d_out=32),
    ),
    tsne=TsneConfig(perplexity=6.0, iterations=300),
    umap=UmapConfig(n_neighbors=8, epochs=150),
    figure_k=6,
    k_range=(2, 8),
    seed=0,
)
manifest = run_pipeline(config)

print(f"pipeline wrote {len(manifest.outputs)} artifacts:")
for name in sorted(manifest.outputs):
    print(f"  {name}")
print("stage wall times (s):", json.dumps(manifest.stage_wall_s, indent=2))
print(f"manifest: {OUT / 'pipeline' / 'manifest.json'}")
