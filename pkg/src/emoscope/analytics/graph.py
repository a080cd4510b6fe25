"""The kNN generation graph with layout, clusters, outliers, rings, and curves.

Nodes are generations of the selected runs; neighbors come from the EMD
matrix.  The layout runs Kamada-Kawai over shortest-path graph distances,
clusters come from HDBSCAN on the raw pairwise distances, the donut ring of a
node is the fraction of its k neighbors that belong to a different run, and
per-run time curves keep only the transitions between clusters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from ..similarity import SimilarityMatrix
from .layout import kamada_kawai

__all__ = ["GraphNode", "GraphEdge", "GenerationGraph", "build_generation_graph", "split_label"]

SIZE_RANGE = (3.0, 12.0)  # display radius range for the measure mapping


def split_label(label: str) -> tuple[str, int]:
    """Split a "run#gen" node label into its run id and generation index."""
    run_id, _, gen = label.rpartition("#")
    if not run_id:
        raise ValueError(f"malformed node label {label!r}")
    return run_id, int(gen)


@dataclass(frozen=True)
class GraphNode:
    label: str
    run_id: str
    gen_index: int
    coords: tuple[float, float]
    size_value: float
    cluster: int  # -1 for noise
    is_outlier: bool
    ring: float
    age: float
    neighbors: tuple[str, ...]


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    weight: float


@dataclass(frozen=True, eq=False)
class GenerationGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]  # deduplicated, ascending weight for the visibility slider
    curves: dict  # run_id -> tuple of segments (tuples of node labels)


def _knn_lists(values: np.ndarray, k: int) -> list[np.ndarray]:
    n = values.shape[0]
    out = []
    for i in range(n):
        order = np.argsort(values[i], kind="stable")  # stable: ties resolve by label order
        order = order[order != i]
        out.append(order[:k])
    return out


def _graph_distances(values: np.ndarray, neighbor_lists: list[np.ndarray]) -> np.ndarray:
    n = values.shape[0]
    rows, cols, data = [], [], []
    for i, neigh in enumerate(neighbor_lists):
        for j in neigh:
            rows.append(i)
            cols.append(int(j))
            data.append(values[i, int(j)])
    adj = csr_matrix((data, (rows, cols)), shape=(n, n))
    D = shortest_path(adj, method="D", directed=False)
    finite = np.isfinite(D)
    if not finite.all():
        # disconnected components: pairwise distance = 2x the union diameter
        diameter = float(D[finite].max()) if finite.any() else 1.0
        if diameter <= 0:
            diameter = 1.0
        D = np.where(finite, D, 2.0 * diameter)
        np.fill_diagonal(D, 0.0)
    return D


def _cluster_labels(values: np.ndarray, min_cluster_size: int, min_samples: int) -> np.ndarray:
    n = values.shape[0]
    if n < max(min_cluster_size, min_samples, 2):
        return np.full(n, -1, dtype=int)
    from sklearn.cluster import HDBSCAN

    model = HDBSCAN(
        min_cluster_size=min_cluster_size,
        min_samples=min_samples,
        metric="precomputed",
    )
    return model.fit(values).labels_.astype(int)


def _curve_segments(order: list[int], clusters: np.ndarray, labels: list[str]) -> tuple[tuple[str, ...], ...]:
    # keep only transitions that cross clusters; noise nodes never merge
    groups = []
    for pos, node in enumerate(order):
        c = int(clusters[node])
        key = ("noise", pos) if c == -1 else ("cluster", c)
        if groups and groups[-1][0] == key and key[0] == "cluster":
            groups[-1][1].append(node)
        else:
            groups.append((key, [node]))
    segments: list[list[int]] = []
    for (_, left), (_, right) in zip(groups, groups[1:]):
        a, b = left[-1], right[0]
        if segments and segments[-1][-1] == a:
            segments[-1].append(b)
        else:
            segments.append([a, b])
    return tuple(tuple(labels[i] for i in seg) for seg in segments)


def build_generation_graph(
    M: SimilarityMatrix,
    k: int,
    size_values: dict[str, float],
    min_cluster_size: int = 5,
    min_samples: int = 5,
) -> GenerationGraph:
    """Assemble the full graph model from a gen_emd matrix over selected runs.

    Deterministic for fixed inputs: neighbor ties break by label order, the
    layout starts from a fixed circle, and HDBSCAN has no random component on
    precomputed distances.
    """
    n = M.n
    if not 1 <= k < n:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    labels = list(M.labels)
    parsed = [split_label(lb) for lb in labels]
    values = M.values

    neighbor_lists = _knn_lists(values, k)
    coords = kamada_kawai(_graph_distances(values, neighbor_lists))
    clusters = _cluster_labels(values, min_cluster_size, min_samples)

    # normalized chronological age per run (0 = earliest generation)
    by_run: dict[str, list[int]] = {}
    for i, (run_id, _) in enumerate(parsed):
        by_run.setdefault(run_id, []).append(i)
    age = np.zeros(n)
    for run_id, members in by_run.items():
        members.sort(key=lambda i: parsed[i][1])
        span = max(len(members) - 1, 1)
        for pos, i in enumerate(members):
            age[i] = pos / span

    sizes_raw = np.array([float(size_values[lb]) for lb in labels])
    lo, hi = sizes_raw.min(), sizes_raw.max()
    if hi > lo:
        sizes = SIZE_RANGE[0] + (sizes_raw - lo) / (hi - lo) * (SIZE_RANGE[1] - SIZE_RANGE[0])
    else:
        sizes = np.full(n, (SIZE_RANGE[0] + SIZE_RANGE[1]) / 2.0)

    nodes = []
    edge_set: dict[tuple[int, int], float] = {}
    for i in range(n):
        run_id, gen_index = parsed[i]
        neigh = neighbor_lists[i]
        foreign = sum(1 for j in neigh if parsed[int(j)][0] != run_id)
        for j in neigh:
            a, b = (i, int(j)) if i < int(j) else (int(j), i)
            edge_set[(a, b)] = values[a, b]
        nodes.append(
            GraphNode(
                label=labels[i],
                run_id=run_id,
                gen_index=gen_index,
                coords=(float(coords[i, 0]), float(coords[i, 1])),
                size_value=float(sizes[i]),
                cluster=int(clusters[i]),
                is_outlier=bool(clusters[i] == -1),
                ring=foreign / k,
                age=float(age[i]),
                neighbors=tuple(labels[int(j)] for j in neigh),
            )
        )

    edges = tuple(
        GraphEdge(source=labels[a], target=labels[b], weight=float(w))
        for (a, b), w in sorted(edge_set.items(), key=lambda kv: (kv[1], kv[0]))
    )
    curves = {
        run_id: _curve_segments(members, clusters, labels) for run_id, members in sorted(by_run.items())
    }
    return GenerationGraph(nodes=tuple(nodes), edges=edges, curves=curves)
