"""Heterogeneous variable/constraint bipartite graph construction.

Variable nodes carry [objective coefficient, lower bound, clamped upper
bound, integrality flag]; constraint nodes carry [rhs, sense code] with
LE -> -1, EQ -> 0, GE -> +1.  One edge per nonzero coefficient, weighted
by tanh of the raw coefficient so magnitudes stay in (-1, 1) while the
sign survives.  The reverse (constraint -> variable) direction reuses the
same edge list read the other way around.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .mps import ConstraintRecord, MilpInstance, Sense, VariableRecord

# Infinite bounds would poison downstream arithmetic; clamp before use.
BOUND_CLAMP = 1e6

# largest double below 1: tanh saturates to exactly 1.0 for |a| > ~19.06,
# which would break the open-interval weight contract
_OPEN_ONE = float(np.nextafter(1.0, 0.0))

_SENSE_CODE = {Sense.LE: -1.0, Sense.EQ: 0.0, Sense.GE: 1.0}


def variable_features(v: VariableRecord, clamp: float = BOUND_CLAMP) -> np.ndarray:
    """[obj_coeff, lower_bound, upper_bound, integrality] with bounds
    clamped to +-clamp."""
    lo = max(v.lower_bound, -clamp)
    up = min(v.upper_bound, clamp)
    return np.array([v.obj_coeff, lo, up, 1.0 if v.is_integer else 0.0])


def constraint_features(c: ConstraintRecord) -> np.ndarray:
    """[rhs, sense_code]."""
    return np.array([c.rhs, _SENSE_CODE[c.sense]])


def edge_weight(a_ij: float) -> float:
    """tanh squashing of a nonzero coefficient; |weight| < 1, sign kept."""
    if a_ij == 0.0:
        raise ValueError("zero coefficients have no edge")
    return float(np.clip(np.tanh(a_ij), -_OPEN_ONE, _OPEN_ONE))


@dataclass(frozen=True)
class BipartiteGraph:
    """Typed bipartite graph over one MILP instance.

    Edges are stored once as parallel arrays (variable index, constraint
    index, raw coefficient, tanh weight); the reverse direction is the
    same arrays read constraint-first.
    """

    n_var: int
    n_con: int
    var_features: np.ndarray  # (n_var, 4)
    con_features: np.ndarray  # (n_con, 2)
    edge_var: np.ndarray  # (n_edges,) int64
    edge_con: np.ndarray  # (n_edges,) int64
    raw_coeff: np.ndarray  # (n_edges,)
    weight: np.ndarray  # (n_edges,)
    var_names: tuple[str, ...] = field(default=())
    con_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        for arr in (
            self.var_features,
            self.con_features,
            self.edge_var,
            self.edge_con,
            self.raw_coeff,
            self.weight,
        ):
            arr.setflags(write=False)
        if self.var_features.shape != (self.n_var, 4):
            raise ValueError("var_features must be (n_var, 4)")
        if self.con_features.shape != (self.n_con, 2):
            raise ValueError("con_features must be (n_con, 2)")
        if not (
            len(self.edge_var)
            == len(self.edge_con)
            == len(self.raw_coeff)
            == len(self.weight)
        ):
            raise ValueError("edge arrays must have equal length")

    @property
    def n_edges(self) -> int:
        return len(self.edge_var)

    @property
    def edges(self) -> list[tuple[int, int, float, float]]:
        return list(
            zip(
                self.edge_var.tolist(),
                self.edge_con.tolist(),
                self.raw_coeff.tolist(),
                self.weight.tolist(),
            )
        )

    def edge_set(self) -> set[int]:
        """Hashed (var, con) keys for O(1) membership tests."""
        return set((self.edge_var * self.n_con + self.edge_con).tolist())


def build_bipartite(inst: MilpInstance, standardize: bool = True) -> BipartiteGraph:
    """Build the bipartite graph for an instance (node order = instance order).

    standardize z-scores each feature column after clamping.  It defaults
    on because raw objective coefficients (often in the thousands) blow up
    the link-prediction logits and stall training; pass False to feed the
    clamped raw values through.
    """
    var_feats = np.array(
        [variable_features(v) for v in inst.variables], dtype=np.float64
    ).reshape(inst.n_vars, 4)
    con_feats = np.array(
        [constraint_features(c) for c in inst.constraints], dtype=np.float64
    ).reshape(inst.n_cons, 2)
    if standardize:
        var_feats = _zscore(var_feats)
        con_feats = _zscore(con_feats)

    n_edges = inst.matrix.nnz
    edge_var = np.empty(n_edges, dtype=np.int64)
    edge_con = np.empty(n_edges, dtype=np.int64)
    raw = np.empty(n_edges, dtype=np.float64)
    for k, (row, col, value) in enumerate(inst.matrix.entries):
        edge_con[k] = row
        edge_var[k] = col
        raw[k] = value

    return BipartiteGraph(
        n_var=inst.n_vars,
        n_con=inst.n_cons,
        var_features=var_feats,
        con_features=con_feats,
        edge_var=edge_var,
        edge_con=edge_con,
        raw_coeff=raw,
        weight=np.clip(np.tanh(raw), -_OPEN_ONE, _OPEN_ONE),
        var_names=tuple(v.name for v in inst.variables),
        con_names=tuple(c.name for c in inst.constraints),
    )


def _zscore(x: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std[std == 0.0] = 1.0
    return (x - mean) / std


def export_edges_csv(graph: BipartiteGraph, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["var_index", "con_index", "raw_coeff", "weight"])
        for i, j, a, w in zip(
            graph.edge_var, graph.edge_con, graph.raw_coeff, graph.weight
        ):
            writer.writerow([int(i), int(j), repr(float(a)), repr(float(w))])
