"""Generate a synthetic crew set-partitioning instance, round-trip it
through MPS, and inspect its bipartite graph.

Run:  python3 demos/01_mps_and_graph.py
Outputs land in demos/out/.
"""

from pathlib import Path

import numpy as np

import milpspace as ms
from milpspace.bipartite import export_edges_csv
from milpspace.figures import sparsity_svg

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# 25 flights, each of which must be covered by exactly one of 140
# candidate crew pairings; a feasible partition is planted.
inst = ms.generate_set_partitioning(seed=7, n_flights=25, n_pairings=140)
print(f"instance {inst.name}: {inst.n_vars} binary vars, {inst.n_cons} EQ rows")

mps_path = OUT / "setpart.mps"
ms.write_mps_file(inst, mps_path)
reparsed = ms.parse_mps_file(mps_path)
assert reparsed == inst, "MPS round trip must be field-identical"
print(f"wrote and re-parsed {mps_path.name}: round trip OK")

stats = ms.instance_stats(reparsed)
print(
    f"stats: nnz={stats.nnz}, density={100 * stats.density:.2f}%, "
    f"{stats.n_integer_vars} integer variables"
)

graph = ms.build_bipartite(reparsed)
print(f"graph: {graph.n_var} var nodes, {graph.n_con} con nodes, {graph.n_edges} edges")
print(f"edge weights live in ({graph.weight.min():.4f}, {graph.weight.max():.4f})")

per_pairing = np.bincount(graph.edge_var, minlength=graph.n_var)
print(f"flights covered per pairing: min {per_pairing.min()}, max {per_pairing.max()}")

(OUT / "sparsity.svg").write_text(sparsity_svg(reparsed))
export_edges_csv(graph, OUT / "edges.csv")
print(f"figures: {OUT / 'sparsity.svg'}, {OUT / 'edges.csv'}")
