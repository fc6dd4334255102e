"""Train both bipartite encoders on link prediction and compare their
loss curves and link-ranking quality.

Run:  python3 demos/02_embeddings.py
"""

from pathlib import Path

import numpy as np

import milpspace as ms
from milpspace.encoders import EncoderConfig
from milpspace.figures import curve_svg

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

inst = ms.generate_set_partitioning(seed=7, n_flights=25, n_pairings=140)
graph = ms.build_bipartite(inst)
positives = np.stack([graph.edge_var, graph.edge_con], axis=1)
held_out_negatives = ms.sample_negatives(graph, graph.n_edges, seed=2024)

for arch in ("gcn", "gat"):
    config = ms.TrainConfig(
        epochs=150,
        architecture=arch,
        encoder=EncoderConfig(architecture=arch, d_hidden=32, d_out=32),
        seed=0,
    )
    params, z, curve = ms.train(graph, config)
    auc = ms.link_auc(
        ms.link_logits(z, positives), ms.link_logits(z, held_out_negatives)
    )
    print(
        f"{arch}: loss {curve.losses[0]:.4f} -> {curve.losses[-1]:.4f} "
        f"over {config.epochs} epochs, link AUC {auc:.3f}"
    )
    (OUT / f"loss_{arch}.svg").write_text(
        curve_svg(
            range(len(curve.losses)),
            curve.losses,
            f"link-prediction loss ({arch})",
            "epoch",
            "mean BCE",
        )
    )
    params.save(OUT / f"params_{arch}.json")
    print(f"  saved {OUT / f'loss_{arch}.svg'} and params_{arch}.json")

print("reload check:", ms.ModelParams.load(OUT / "params_gcn.json").architecture)
